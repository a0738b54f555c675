//! Source-unit abstraction: tokenize, replace user-defined names with
//! positional IDs, annotate the mutated statement and window the result.

mod abstractor;
mod annotate;
mod tokenize;

pub use abstractor::{is_abstract_id, Abstracted, AbstractionMap, Abstractor, Allowlist, IdCategory};
pub use annotate::{
    escape_token, insert_annotation, render, render_pair, window_sequence, AnnotatedSequence, ANNOTATION_CLOSE,
    ANNOTATION_OPEN, ANNOTATION_SEP, ANNOTATION_SPAN, BUDGETS,
};
pub use tokenize::{is_keyword, statement_count, tokenize, Token, TokenKind, KEYWORDS, PRIMITIVE_TYPES};

use crate::corpus::MutantRecord;
use crate::error::Result;

/// Tokenize → abstract → annotate → window for one mutant.
pub fn sequence_for(
    abstractor: &Abstractor,
    unit_source: &str,
    mutant: &MutantRecord,
    budget: usize,
) -> Result<AnnotatedSequence> {
    let tokens = tokenize(unit_source)?;
    let abstracted = abstractor.abstract_unit(&tokens);
    let seq = insert_annotation(&abstracted.tokens, mutant)?;
    window_sequence(&seq, budget)
}
