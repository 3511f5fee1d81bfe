use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: malformed record: {reason}")]
    MalformedLine { path: PathBuf, line: usize, reason: String },

    #[error("duplicate id {id:?} at lines {first} and {second}")]
    DuplicateId { id: String, first: usize, second: usize },

    #[error("line count mismatch {src} vs {tgt}")]
    LineCountMismatch { src: usize, tgt: usize },

    #[error("invalid token {0:?}: tokens must be non-empty and contain no whitespace")]
    InvalidToken(String),

    #[error("fold is only allowed for train/test splits")]
    InvalidFold,

    #[error("n-gram order must be at least 1, got {0}")]
    InvalidOrder(usize),

    #[error("at least one reference is required")]
    NoReferences,

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("variant {variant} is {actual}-aggregated, expected {expected}")]
    AggregationMismatch {
        variant: &'static str,
        actual: &'static str,
        expected: &'static str,
    },

    #[error("unknown BLEU variant {0:?}")]
    UnknownVariant(String),

    #[error("unknown tokenizer config {0:?}")]
    UnknownTokenizer(String),

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("need at least {needed} items, got {got}")]
    TooFew { needed: usize, got: usize },

    #[error("p-value {0} outside [0, 1]")]
    InvalidPValue(f64),

    #[error("unknown document {0}")]
    UnknownDocument(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("insufficient population for {kind} pairs: {reason}")]
    InsufficientPopulation { kind: &'static str, reason: String },

    #[error("bad snapshot: {0}")]
    Snapshot(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
