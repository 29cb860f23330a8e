use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("order rejected: {0}")]
    InvalidOrder(&'static str),

    #[error("genome must have {expected} parameters, got {actual}")]
    GenomeLength { expected: usize, actual: usize },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid configuration: {field}: {reason}")]
    Config { field: &'static str, reason: String },

    #[error("{0}")]
    Degenerate(String),

    #[error("empty sample: {0}")]
    EmptySample(&'static str),

    #[error("need at least {needed} corpus rows, have {available}")]
    CorpusTooSmall { needed: usize, available: usize },

    #[error("{path}:{line}: {reason}")]
    Parse { path: PathBuf, line: usize, reason: String },

    #[error("no ticks for {pair} in {month}")]
    EmptyMonth { pair: String, month: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn config(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Config {
            field,
            reason: reason.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
