use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed instance document. `line`/`column` are 1-based when known.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unsupported descriptor kind `{kind}` in {context}")]
    UnsupportedDescriptor { kind: String, context: String },

    #[error("validation error: {0}")]
    Validation(String),

    /// An element was passed to an oracle that does not know it.
    #[error("element {element} is outside the ground set of {context}")]
    Domain { element: usize, context: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{what} has size {size}, above the exhaustive-search cap {cap}")]
    TooLarge {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("objective `{0}` is not declared non-negative")]
    NonNegativityRequired(String),

    #[error("need at least {need} records, got {got}")]
    TooFewRecords { got: usize, need: usize },

    #[error("trial failed (instance {instance}, seed {seed}): {source}")]
    Trial {
        instance: String,
        seed: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
