//! Mutation annotations and fixed-budget windows.
//!
//! An annotation is appended after the last token of the mutated statement
//! and tokenizes as `MST[ <operator> ]MSP[ ]`; a labeled one carries `S` or
//! `N` before the closing `]`.

use crate::corpus::{Label, MutantRecord};
use crate::error::{Error, Result};

use super::tokenize::Token;

pub const ANNOTATION_OPEN: &str = "MST[";
pub const ANNOTATION_SEP: &str = "]MSP[";
pub const ANNOTATION_CLOSE: &str = "]";
/// Token count of an unlabeled annotation.
pub const ANNOTATION_SPAN: usize = 4;

/// Context sizes supported by the pipeline.
pub const BUDGETS: [usize; 3] = [25, 50, 100];

/// Token sequence for one mutant carrying exactly one annotation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedSequence {
    pub mutant_id: String,
    /// Context tokens plus the unlabeled annotation span.
    pub tokens: Vec<String>,
    /// Index of the `MST[` token.
    pub annotation_start: usize,
    /// Budget the sequence was windowed to; `None` before windowing.
    pub length_budget: Option<usize>,
    pub label: Option<Label>,
}

impl AnnotatedSequence {
    pub fn operator(&self) -> &str {
        &self.tokens[self.annotation_start + 1]
    }

    /// Position a label token takes in the rendered output line.
    pub fn label_slot(&self) -> usize {
        self.annotation_start + ANNOTATION_SPAN - 1
    }

    pub fn input_tokens(&self) -> &[String] {
        &self.tokens
    }

    /// Input tokens with `label` placed in the annotation slot.
    pub fn output_tokens(&self, label: Label) -> Vec<String> {
        let mut out = self.tokens.clone();
        out.insert(self.label_slot(), label.as_str().to_string());
        out
    }

    pub fn input_line(&self) -> String {
        render(&self.tokens)
    }

    pub fn output_line(&self, label: Label) -> String {
        render(&self.output_tokens(label))
    }

    pub fn with_label(mut self, label: Option<Label>) -> Self {
        self.label = label;
        self
    }

    /// Parses a rendered line. A label inside the annotation, if present,
    /// is lifted into [`AnnotatedSequence::label`].
    pub fn parse_line(mutant_id: &str, line: &str) -> Result<Self> {
        let mut tokens: Vec<String> = line.split_whitespace().map(str::to_string).collect();
        let bad = |why: &str| Error::InvalidCorpus(format!("sequence for `{mutant_id}`: {why}"));
        let opens: Vec<usize> = tokens
            .iter()
            .enumerate()
            .filter(|(_, t)| *t == ANNOTATION_OPEN)
            .map(|(i, _)| i)
            .collect();
        let [start] = opens[..] else {
            return Err(bad("expected exactly one annotation"));
        };
        if tokens.get(start + 2).map(String::as_str) != Some(ANNOTATION_SEP) {
            return Err(bad("annotation missing `]MSP[`"));
        }
        let label = match tokens.get(start + 3).map(String::as_str) {
            Some(ANNOTATION_CLOSE) => None,
            Some(l) if tokens.get(start + 4).map(String::as_str) == Some(ANNOTATION_CLOSE) => {
                let label = l.parse::<Label>().map_err(|e| bad(&e))?;
                tokens.remove(start + 3);
                Some(label)
            }
            _ => return Err(bad("annotation not closed")),
        };
        Ok(Self {
            mutant_id: mutant_id.to_string(),
            tokens,
            annotation_start: start,
            length_budget: None,
            label,
        })
    }
}

/// Joins tokens with single spaces. Whitespace inside a token (possible in
/// verbatim string literals) is escaped so the line splits back the same way.
pub fn render(tokens: &[String]) -> String {
    let mut out = String::new();
    for (i, t) in tokens.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.push_str(&escape_token(t));
    }
    out
}

pub fn escape_token(token: &str) -> std::borrow::Cow<'_, str> {
    if !token.chars().any(char::is_whitespace) {
        return token.into();
    }
    token
        .chars()
        .map(|c| {
            if c.is_whitespace() {
                format!("\\x{:02x}", c as u32)
            } else {
                c.to_string()
            }
        })
        .collect::<String>()
        .into()
}

/// Appends the annotation for `mutant` after its statement's last token.
pub fn insert_annotation(tokens: &[Token], mutant: &MutantRecord) -> Result<AnnotatedSequence> {
    let last = tokens
        .iter()
        .rposition(|t| t.statement_index == mutant.statement_index)
        .ok_or(Error::StatementOutOfRange {
            index: mutant.statement_index,
            count: tokens.iter().map(|t| t.statement_index + 1).max().unwrap_or(0),
        })?;
    let mut out: Vec<String> = Vec::with_capacity(tokens.len() + ANNOTATION_SPAN);
    out.extend(tokens[..=last].iter().map(|t| t.text.clone()));
    let annotation_start = out.len();
    out.push(ANNOTATION_OPEN.into());
    out.push(escape_token(&mutant.operator).into_owned());
    out.push(ANNOTATION_SEP.into());
    out.push(ANNOTATION_CLOSE.into());
    out.extend(tokens[last + 1..].iter().map(|t| t.text.clone()));
    Ok(AnnotatedSequence {
        mutant_id: mutant.mutant_id.clone(),
        tokens: out,
        annotation_start,
        length_budget: None,
        label: mutant.label,
    })
}

/// Cuts a window of at most `budget` tokens around the annotation: the
/// annotation stays whole, the remaining room `r` goes `ceil(r/2)` before and
/// `floor(r/2)` after, and a side that runs short hands its room to the other.
pub fn window_sequence(seq: &AnnotatedSequence, budget: usize) -> Result<AnnotatedSequence> {
    if budget < ANNOTATION_SPAN {
        return Err(Error::BudgetTooSmall {
            budget,
            span: ANNOTATION_SPAN,
        });
    }
    let room = budget - ANNOTATION_SPAN;
    let before_avail = seq.annotation_start;
    let after_avail = seq.tokens.len() - seq.annotation_start - ANNOTATION_SPAN;

    let mut before = room.div_ceil(2).min(before_avail);
    let after = (room - before).min(after_avail);
    before = (room - after).min(before_avail);

    let lo = seq.annotation_start - before;
    let hi = seq.annotation_start + ANNOTATION_SPAN + after;
    Ok(AnnotatedSequence {
        mutant_id: seq.mutant_id.clone(),
        tokens: seq.tokens[lo..hi].to_vec(),
        annotation_start: before,
        length_budget: Some(budget),
        label: seq.label,
    })
}

/// Training pair: the input line and the same line with `label` filled in.
pub fn render_pair(seq: &AnnotatedSequence, label: Label) -> (String, String) {
    (seq.input_line(), seq.output_line(label))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abstraction::tokenize;

    fn mutant(stmt: usize, op: &str) -> MutantRecord {
        MutantRecord {
            mutant_id: "m1".into(),
            project_id: "p".into(),
            unit_path: "u".into(),
            statement_index: stmt,
            operator: op.into(),
            label: None,
        }
    }

    fn unit(n: usize) -> Vec<Token> {
        // n single-token statements: `a0 ; a1 ; ...` has 2n tokens.
        let src: String = (0..n).map(|i| format!("a{i} ; ")).collect();
        tokenize(&src).unwrap()
    }

    #[test]
    fn annotation_after_statement() {
        let toks = tokenize("if ( x ) { return null ; }").unwrap();
        let seq = insert_annotation(&toks, &mutant(1, "ReturnValsMutator")).unwrap();
        assert_eq!(
            seq.input_line(),
            "if ( x ) { return null ; MST[ ReturnValsMutator ]MSP[ ] }"
        );
        assert_eq!(seq.operator(), "ReturnValsMutator");
    }

    #[test]
    fn statement_out_of_range() {
        let toks = tokenize("a ; b ;").unwrap();
        assert!(matches!(
            insert_annotation(&toks, &mutant(2, "X")),
            Err(Error::StatementOutOfRange { index: 2, count: 2 })
        ));
    }

    #[test]
    fn two_mutants_same_statement_independent() {
        let toks = tokenize("a = b ;").unwrap();
        let s1 = insert_annotation(&toks, &mutant(0, "AOR")).unwrap();
        let s2 = insert_annotation(&toks, &mutant(0, "ROR")).unwrap();
        for s in [&s1, &s2] {
            assert_eq!(s.tokens.iter().filter(|t| *t == ANNOTATION_OPEN).count(), 1);
        }
        assert_ne!(s1, s2);
    }

    #[test]
    fn long_unit_saturates_budget() {
        let toks = unit(100); // 200 tokens
        let seq = insert_annotation(&toks, &mutant(50, "X")).unwrap();
        let w = window_sequence(&seq, 100).unwrap();
        assert_eq!(w.tokens.len(), 100);
        // 96 tokens of room: 48 before, 48 after.
        assert_eq!(w.annotation_start, 48);
        assert_eq!(w.tokens[w.annotation_start - 1], ";");
        assert_eq!(w.tokens[w.annotation_start - 2], "a50");
    }

    #[test]
    fn short_unit_kept_whole() {
        let toks = unit(13); // 26 tokens + 4 annotation = 30
        let seq = insert_annotation(&toks, &mutant(3, "X")).unwrap();
        let w = window_sequence(&seq, 100).unwrap();
        assert_eq!(w.tokens, seq.tokens);
        assert_eq!(w.tokens.len(), 30);
    }

    #[test]
    fn early_annotation_spills_after() {
        // A leading 5-token statement puts the annotation at token 5.
        let mut toks = tokenize("x y z w ;").unwrap(); // one 5-token statement
        toks.extend(unit(300).into_iter().map(|mut t| {
            t.statement_index += 1;
            t
        }));
        let seq = insert_annotation(&toks, &mutant(0, "X")).unwrap();
        assert_eq!(seq.annotation_start, 5);
        let w = window_sequence(&seq, 50).unwrap();
        assert_eq!(w.tokens.len(), 50);
        assert_eq!(w.annotation_start, 5, "all 5 preceding tokens kept");
        assert_eq!(&w.tokens[..5], &["x", "y", "z", "w", ";"]);
        // 46 room: 5 before, 41 after.
        assert_eq!(w.tokens.len() - 5 - ANNOTATION_SPAN, 41);
    }

    #[test]
    fn budget_below_span() {
        let seq = insert_annotation(&unit(2), &mutant(0, "X")).unwrap();
        assert!(matches!(window_sequence(&seq, 3), Err(Error::BudgetTooSmall { .. })));
        assert_eq!(window_sequence(&seq, 4).unwrap().tokens.len(), 4);
    }

    #[test]
    fn pair_differs_only_in_label() {
        let toks = tokenize("return null ;").unwrap();
        let seq = insert_annotation(&toks, &mutant(0, "ReturnValsMutator")).unwrap();
        let (input, output) = render_pair(&seq, Label::S);
        assert!(output.ends_with("MST[ ReturnValsMutator ]MSP[ S ]"));
        assert_eq!(output.replacen(" S ]", " ]", 1), input);
        let (_, n) = render_pair(&seq, Label::N);
        assert!(n.ends_with("]MSP[ N ]"));
    }

    #[test]
    fn parse_line_round_trip() {
        let toks = tokenize("a = b ; c ;").unwrap();
        let seq = insert_annotation(&toks, &mutant(0, "AOR")).unwrap();
        let back = AnnotatedSequence::parse_line("m1", &seq.output_line(Label::N)).unwrap();
        assert_eq!(back.tokens, seq.tokens);
        assert_eq!(back.label, Some(Label::N));
        let unl = AnnotatedSequence::parse_line("m1", &seq.input_line()).unwrap();
        assert_eq!(unl.label, None);
        assert!(AnnotatedSequence::parse_line("m1", "a b c").is_err());
    }

    #[test]
    fn whitespace_in_tokens_is_escaped() {
        assert_eq!(render(&["\"a b\"".into(), "x".into()]), "\"a\\x20b\" x");
    }
}
