//! Identifier abstraction: user-defined functions, types, labels, variables
//! and string literals become positional IDs (`fn_1`, `tp_1`, `lb_1`,
//! `vr_1`, `lr_1`, ...), numbered per category in first-occurrence order.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::path::Path;

use super::tokenize::{Token, TokenKind, PRIMITIVE_TYPES};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdCategory {
    Function,
    Type,
    Label,
    Variable,
    StringLiteral,
}

impl IdCategory {
    pub const ALL: [IdCategory; 5] = [
        IdCategory::Function,
        IdCategory::Type,
        IdCategory::Label,
        IdCategory::Variable,
        IdCategory::StringLiteral,
    ];

    pub fn prefix(self) -> &'static str {
        match self {
            IdCategory::Function => "fn",
            IdCategory::Type => "tp",
            IdCategory::Label => "lb",
            IdCategory::Variable => "vr",
            IdCategory::StringLiteral => "lr",
        }
    }

    fn slot(self) -> usize {
        self as usize
    }
}

impl fmt::Display for IdCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.prefix())
    }
}

/// True for tokens shaped like an abstraction ID, e.g. `vr_12`. These are
/// reserved and never rewritten, which makes abstraction idempotent.
pub fn is_abstract_id(s: &str) -> bool {
    let Some((prefix, num)) = s.split_once('_') else {
        return false;
    };
    matches!(prefix, "fn" | "tp" | "lb" | "vr" | "lr")
        && !num.is_empty()
        && !num.starts_with('0')
        && num.bytes().all(|b| b.is_ascii_digit())
}

/// Per-unit original-name ↔ ID maps, one namespace per category.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AbstractionMap {
    originals: [Vec<String>; 5],
    lookup: [HashMap<String, usize>; 5],
}

impl AbstractionMap {
    fn assign(&mut self, category: IdCategory, original: &str) -> String {
        let slot = category.slot();
        let n = match self.lookup[slot].get(original) {
            Some(&n) => n,
            None => {
                self.originals[slot].push(original.to_string());
                let n = self.originals[slot].len();
                self.lookup[slot].insert(original.to_string(), n);
                n
            }
        };
        format!("{}_{n}", category.prefix())
    }

    pub fn id_for(&self, category: IdCategory, original: &str) -> Option<String> {
        self.lookup[category.slot()]
            .get(original)
            .map(|n| format!("{}_{n}", category.prefix()))
    }

    /// Inverse lookup: the original text behind an ID such as `fn_3`.
    pub fn original(&self, id: &str) -> Option<&str> {
        if !is_abstract_id(id) {
            return None;
        }
        let (prefix, num) = id.split_once('_')?;
        let cat = IdCategory::ALL.into_iter().find(|c| c.prefix() == prefix)?;
        let n: usize = num.parse().ok()?;
        self.originals[cat.slot()].get(n.checked_sub(1)?).map(String::as_str)
    }

    /// Originals of one category in ID order (`entries(c)[i]` ↦ `<c>_{i+1}`).
    pub fn entries(&self, category: IdCategory) -> &[String] {
        &self.originals[category.slot()]
    }

    pub fn is_empty(&self) -> bool {
        self.originals.iter().all(Vec::is_empty)
    }
}

/// Library and language-standard names that survive abstraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Allowlist {
    names: BTreeSet<String>,
}

const DEFAULT_ALLOWLIST: &str = include_str!("default_allowlist.txt");

impl Default for Allowlist {
    fn default() -> Self {
        Self::parse(DEFAULT_ALLOWLIST)
    }
}

impl Allowlist {
    /// One name per line; blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Self {
        let names = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .map(str::to_string)
            .collect();
        Self { names }
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Ok(Self::parse(&std::fs::read_to_string(path)?))
    }

    pub fn empty() -> Self {
        Self { names: BTreeSet::new() }
    }

    pub fn contains(&self, name: &str) -> bool {
        self.names.contains(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(String::as_str)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Abstracted {
    /// Code tokens (comments removed), user names replaced by IDs.
    pub tokens: Vec<Token>,
    pub map: AbstractionMap,
    /// Names whose category could not be established from a declaration;
    /// these default to the variable namespace.
    pub warnings: Vec<String>,
}

/// Applies identifier abstraction, or only comment removal when disabled.
#[derive(Debug, Clone)]
pub struct Abstractor {
    allowlist: Allowlist,
    enabled: bool,
}

impl Default for Abstractor {
    fn default() -> Self {
        Self::new(Allowlist::default())
    }
}

impl Abstractor {
    pub fn new(allowlist: Allowlist) -> Self {
        Self {
            allowlist,
            enabled: true,
        }
    }

    /// Comment removal only; names and literals are kept verbatim.
    pub fn unabstracted() -> Self {
        Self {
            allowlist: Allowlist::empty(),
            enabled: false,
        }
    }

    pub fn enabled(&self) -> bool {
        self.enabled
    }

    pub fn allowlist(&self) -> &Allowlist {
        &self.allowlist
    }

    pub fn abstract_unit(&self, tokens: &[Token]) -> Abstracted {
        let code: Vec<Token> = tokens
            .iter()
            .filter(|t| t.kind != TokenKind::Comment)
            .cloned()
            .collect();
        if !self.enabled {
            return Abstracted {
                tokens: code,
                map: AbstractionMap::default(),
                warnings: Vec::new(),
            };
        }

        let categories = self.classify(&code);
        let mut map = AbstractionMap::default();
        let mut out = Vec::with_capacity(code.len());
        for tok in &code {
            let replacement = match tok.kind {
                TokenKind::StringLiteral if !is_abstract_id(&tok.text) => {
                    Some(map.assign(IdCategory::StringLiteral, &tok.text))
                }
                TokenKind::Identifier => categories
                    .names
                    .get(tok.text.as_str())
                    .map(|&cat| map.assign(cat, &tok.text)),
                _ => None,
            };
            out.push(match replacement {
                Some(text) => Token { text, ..tok.clone() },
                None => tok.clone(),
            });
        }
        Abstracted {
            tokens: out,
            map,
            warnings: categories.warnings,
        }
    }

    fn is_user_name(&self, tok: &Token) -> bool {
        tok.kind == TokenKind::Identifier && !self.allowlist.contains(&tok.text) && !is_abstract_id(&tok.text)
    }

    /// Decides one category per user-defined name. Precedence when a name
    /// shows up in several contexts: label, type, function, variable.
    fn classify<'a>(&self, code: &'a [Token]) -> Classification<'a> {
        let text = |i: usize| code.get(i).map(|t| t.text.as_str());
        let prev = |i: usize| i.checked_sub(1).and_then(text);
        let is_ident = |i: usize| code.get(i).is_some_and(|t| t.kind == TokenKind::Identifier);

        let mut label = BTreeSet::new();
        let mut types = BTreeSet::new();
        let mut funcs = BTreeSet::new();
        let mut declared = BTreeSet::new();
        let mut order: Vec<&str> = Vec::new();

        // Statements opening with `typedef` declare their last identifier as a type.
        let mut typedef_stmt = None;

        for (i, tok) in code.iter().enumerate() {
            if tok.kind == TokenKind::Keyword && tok.text == "typedef" {
                typedef_stmt = Some(tok.statement_index);
            }
            if !self.is_user_name(tok) {
                continue;
            }
            let name = tok.text.as_str();
            if !order.contains(&name) {
                order.push(name);
            }
            let p = prev(i);
            let n = text(i + 1);
            let at_stmt_start = matches!(p, None | Some(";") | Some("{") | Some("}"));

            let is_label = matches!(p, Some("goto"))
                || (matches!(p, Some("break") | Some("continue")) && n == Some(";"))
                || (n == Some(":") && at_stmt_start);
            let is_type = matches!(
                p,
                Some("new")
                    | Some("struct")
                    | Some("union")
                    | Some("enum")
                    | Some("class")
                    | Some("interface")
                    | Some("extends")
                    | Some("implements")
                    | Some("instanceof")
                    | Some("throws")
            ) || is_ident(i + 1)
                || (n == Some("[]") && is_ident(i + 2))
                || (n == Some("*")
                    && is_ident(i + 2)
                    && matches!(text(i + 3), Some(";") | Some("=") | Some(",") | Some(")") | Some("["))
                    && matches!(
                        p,
                        None | Some(";")
                            | Some("{")
                            | Some("}")
                            | Some("(")
                            | Some(",")
                            | Some("const")
                            | Some("static")
                    ))
                || (typedef_stmt == Some(tok.statement_index) && n == Some(";"));

            if is_label {
                label.insert(name);
            } else if is_type {
                types.insert(name);
            } else if n == Some("(") {
                funcs.insert(name);
            }

            let after_type = match p {
                Some(pt) if PRIMITIVE_TYPES.contains(&pt) => true,
                Some("[]") => true,
                Some("*") | Some("&") => i >= 2 && (is_ident(i - 2) || code[i - 2].kind == TokenKind::Keyword),
                _ => i >= 1 && is_ident(i - 1),
            };
            if after_type {
                declared.insert(name);
            }
        }

        let mut names = HashMap::new();
        let mut warnings = Vec::new();
        for name in order {
            let cat = if label.contains(name) {
                IdCategory::Label
            } else if types.contains(name) {
                IdCategory::Type
            } else if funcs.contains(name) {
                IdCategory::Function
            } else {
                if !declared.contains(name) {
                    warnings.push(format!(
                        "`{name}` has no declaration in this unit; treated as a variable"
                    ));
                }
                IdCategory::Variable
            };
            names.insert(name, cat);
        }
        Classification { names, warnings }
    }
}

struct Classification<'a> {
    names: HashMap<&'a str, IdCategory>,
    warnings: Vec<String>,
}
