//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),

    #[error("invalid cell: {0}")]
    InvalidCell(String),

    #[error("coincident atoms {i} and {j} (distance {dist:.3e} A)")]
    CoincidentAtoms { i: usize, j: usize, dist: f64 },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("checkpoint incompatible: array `{name}`: {msg}")]
    CheckpointIncompatible { name: String, msg: String },

    #[error("data integrity: {0}")]
    DataIntegrity(String),

    #[error("eip `{name}` on configuration {index}: {source}")]
    EipEval {
        name: String,
        index: usize,
        source: Box<Error>,
    },

    #[error("training aborted: {0}")]
    TrainingAborted(String),

    #[error("sampler failed: {0}")]
    Sampler(String),

    #[error("run config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn argument(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
