use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("invalid label {0}, expected 0 or 1")]
    InvalidLabel(i64),

    #[error("invalid sentence pair: {0}")]
    InvalidPair(String),

    #[error("invalid contraction table: {0}")]
    InvalidContractionTable(String),

    #[error("invalid filter config: {0}")]
    InvalidConfig(String),

    #[error("normalized distance is undefined for two empty strings")]
    EmptyComparison,

    #[error("not enough rows: {required} required, {available} available")]
    InsufficientRows { required: usize, available: usize },

    #[error("{pool} pool has {available} examples with label {label}, {required} required")]
    InsufficientPool {
        pool: &'static str,
        label: u8,
        required: usize,
        available: usize,
    },

    #[error("cannot compute metrics over zero records")]
    EmptyMatrix,

    #[error("invalid synth spec: {0}")]
    InvalidSynthSpec(String),

    #[error("stage report must have 8 rows, got {0}")]
    ReportShape(usize),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
