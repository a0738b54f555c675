use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the mutant-selection pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("missing file: {}", .0.display())]
    MissingFile(PathBuf),

    #[error("{}:{line}: malformed line: {reason}", path.display())]
    MalformedLine { path: PathBuf, line: usize, reason: String },

    #[error("unmatched mutant id `{0}`")]
    UnmatchedMutant(String),

    #[error("unmatched test id `{0}`")]
    UnmatchedTest(String),

    #[error("duplicate id `{0}`")]
    DuplicateId(String),

    #[error("unknown source unit `{0}`")]
    UnknownUnit(String),

    #[error("invalid corpus: {0}")]
    InvalidCorpus(String),

    #[error("cannot split {projects} projects into {folds} folds")]
    TooFewProjects { projects: usize, folds: usize },

    #[error("need at least 2 training folds, got {0}")]
    TooFewTrainingFolds(usize),

    #[error("unterminated {what} starting at line {line}, column {column}")]
    Unterminated {
        what: &'static str,
        line: usize,
        column: usize,
    },

    #[error("unexpected character `{ch}` at line {line}, column {column}")]
    UnexpectedChar { ch: char, line: usize, column: usize },

    #[error("statement index {index} out of range (unit has {count} statements)")]
    StatementOutOfRange { index: usize, count: usize },

    #[error("budget {budget} is smaller than the annotation span ({span} tokens)")]
    BudgetTooSmall { budget: usize, span: usize },

    #[error("training data contains a single class")]
    SingleClass,

    #[error("empty training set")]
    EmptyTrainingSet,

    #[error("feature schema mismatch: {0}")]
    SchemaMismatch(String),

    #[error("no subsuming mutants: MS* is undefined")]
    NoSubsumingMutants,

    #[error("empty selection")]
    EmptySelection,

    #[error("empty sample")]
    EmptySample,

    #[error("noise rate {0} outside [0, 1]")]
    InvalidNoiseRate(f64),

    #[error("length mismatch: {0}")]
    LengthMismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
