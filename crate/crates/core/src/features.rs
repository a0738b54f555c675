//! Lexical approximations of the 16 mutant features for mini-language units.
//!
//! Every value is computed from the token stream of the mutated statement
//! and its enclosing blocks; no control-flow or data-flow graph is built.

use std::collections::{BTreeMap, BTreeSet};

use crate::abstraction::{tokenize, Token, TokenKind};
use crate::corpus::{FeatureSet, FeatureVector, MutantRecord, FEATURE_NAMES};
use crate::error::{Error, Result};

/// Statement shape, used for the AST node type columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum StatementKind {
    Function,
    If,
    Loop,
    Return,
    Declaration,
    Assignment,
    Call,
    Close,
    Other,
}

impl StatementKind {
    fn code(self) -> f64 {
        self as u8 as f64
    }
}

#[derive(Debug, Clone)]
struct Statement {
    tokens: Vec<Token>,
    kind: StatementKind,
    depth: usize,
    /// Indices of enclosing block-opening statements, innermost last.
    parents: Vec<usize>,
}

fn kind_of(tokens: &[Token]) -> StatementKind {
    let first = tokens.first().map(|t| t.text.as_str());
    let opens = tokens.last().is_some_and(|t| t.text == "{");
    match first {
        Some("if") | Some("else") | Some("switch") => StatementKind::If,
        Some("while") | Some("for") | Some("do") => StatementKind::Loop,
        Some("return") | Some("throw") => StatementKind::Return,
        Some("}") => StatementKind::Close,
        _ if opens && tokens.iter().any(|t| t.text == "(") => StatementKind::Function,
        _ if tokens.len() >= 2
            && matches!(tokens[0].kind, TokenKind::Keyword | TokenKind::Identifier)
            && tokens[1].kind == TokenKind::Identifier =>
        {
            StatementKind::Declaration
        }
        _ if tokens.iter().any(|t| t.text == "=") => StatementKind::Assignment,
        _ if tokens.iter().any(|t| t.text == "(") => StatementKind::Call,
        _ => StatementKind::Other,
    }
}

fn split_statements(tokens: &[Token]) -> Vec<Statement> {
    let mut by_index: BTreeMap<usize, Vec<Token>> = BTreeMap::new();
    for t in tokens.iter().filter(|t| t.kind != TokenKind::Comment) {
        by_index.entry(t.statement_index).or_default().push(t.clone());
    }
    let count = by_index.keys().next_back().map_or(0, |k| k + 1);
    let mut out = Vec::with_capacity(count);
    let mut stack: Vec<usize> = Vec::new();
    for i in 0..count {
        let toks = by_index.remove(&i).unwrap_or_default();
        let kind = kind_of(&toks);
        if kind == StatementKind::Close {
            stack.pop();
        }
        out.push(Statement {
            kind,
            depth: stack.len(),
            parents: stack.clone(),
            tokens: toks.clone(),
        });
        if toks.last().is_some_and(|t| t.text == "{") {
            stack.push(i);
        }
    }
    out
}

fn is_operator(t: &Token) -> bool {
    t.kind == TokenKind::Punctuation && !matches!(t.text.as_str(), "(" | ")" | "{" | "}" | ";" | "," | "[" | "]")
}

/// Variable written by a declaration or assignment.
fn defined_name(s: &Statement) -> Option<&str> {
    let eq = s.tokens.iter().position(|t| t.text == "=")?;
    eq.checked_sub(1)
        .and_then(|i| s.tokens.get(i))
        .filter(|t| t.kind == TokenKind::Identifier)
        .map(|t| t.text.as_str())
}

fn used_names(s: &Statement) -> BTreeSet<&str> {
    let eq = s.tokens.iter().position(|t| t.text == "=").map_or(0, |e| e + 1);
    s.tokens[eq..]
        .iter()
        .filter(|t| t.kind == TokenKind::Identifier)
        .map(|t| t.text.as_str())
        .collect()
}

fn statement_features(stmts: &[Statement], i: usize, operator_code: f64) -> Vec<f64> {
    let s = &stmts[i];
    let ops = s.tokens.iter().filter(|t| is_operator(t)).count();
    let control = |k: StatementKind| matches!(k, StatementKind::If | StatementKind::Loop);
    let ctrl_parents = s.parents.iter().filter(|&&p| control(stmts[p].kind)).count();
    let block_parent = s.parents.last().copied();
    let in_block = stmts
        .iter()
        .filter(|o| o.parents.last().copied() == block_parent && o.kind != StatementKind::Close)
        .count();
    let opens = s.tokens.last().is_some_and(|t| t.text == "{");
    let body = if opens {
        stmts[i + 1..].iter().take_while(|o| o.depth > s.depth).count()
    } else {
        0
    };
    let out_deps = defined_name(s).map_or(0, |name| {
        stmts[i + 1..].iter().filter(|o| used_names(o).contains(name)).count()
    });
    let earlier: BTreeSet<&str> = stmts[..i].iter().filter_map(defined_name).collect();
    let in_deps = used_names(s).iter().filter(|n| earlier.contains(*n)).count();
    let preds = if i == 0 {
        0
    } else if stmts[i - 1].kind == StatementKind::Close {
        2
    } else {
        1
    };
    let succs = if control(s.kind) {
        2
    } else if s.kind == StatementKind::Return {
        0
    } else {
        1
    };
    let parent_kind = block_parent.map_or(StatementKind::Other, |p| stmts[p].kind);
    let leaves = s
        .tokens
        .iter()
        .filter(|t| {
            matches!(
                t.kind,
                TokenKind::Identifier | TokenKind::NumericLiteral | TokenKind::StringLiteral
            )
        })
        .count();

    vec![
        s.tokens.len() as f64,
        ops as f64,
        operator_code,
        s.depth as f64,
        ctrl_parents as f64,
        preds as f64,
        succs as f64,
        in_block as f64,
        out_deps as f64,
        in_deps as f64,
        body as f64,
        ctrl_parents as f64,
        parent_kind.code(),
        (s.depth + 1) as f64,
        s.kind.code(),
        leaves as f64,
    ]
}

/// Computes one feature vector per mutant. Operators are coded by their
/// position in the sorted list of operator names occurring in `mutants`.
pub fn extract_features(units: &BTreeMap<String, String>, mutants: &[MutantRecord]) -> Result<FeatureSet> {
    let operators: BTreeSet<&str> = mutants.iter().map(|m| m.operator.as_str()).collect();
    let op_code: BTreeMap<&str, f64> = operators.iter().enumerate().map(|(i, o)| (*o, i as f64)).collect();
    let mut parsed: BTreeMap<&str, Vec<Statement>> = BTreeMap::new();
    let mut vectors = Vec::with_capacity(mutants.len());
    for m in mutants {
        if !parsed.contains_key(m.unit_path.as_str()) {
            let src = units
                .get(&m.unit_path)
                .ok_or_else(|| Error::UnknownUnit(m.unit_path.clone()))?;
            parsed.insert(&m.unit_path, split_statements(&tokenize(src)?));
        }
        let stmts = &parsed[m.unit_path.as_str()];
        if m.statement_index >= stmts.len() {
            return Err(Error::StatementOutOfRange {
                index: m.statement_index,
                count: stmts.len(),
            });
        }
        vectors.push(FeatureVector {
            mutant_id: m.mutant_id.clone(),
            values: statement_features(stmts, m.statement_index, op_code[m.operator.as_str()]),
        });
    }
    FeatureSet::new(FEATURE_NAMES.iter().map(|s| s.to_string()).collect(), vectors)
}
