use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("format error: {0}")]
    Format(String),

    #[error("length error: expected {expected} values, found {found}")]
    Length { expected: usize, found: usize },

    #[error("data error: {0}")]
    Data(String),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("insufficient data: class {class} has {available} samples, {required} required")]
    InsufficientData {
        class: u32,
        available: usize,
        required: usize,
    },

    #[error("state error: {0}")]
    State(String),

    #[error("training diverged at epoch {epoch}: non-finite loss")]
    Divergence { epoch: usize },

    #[error("instance too large for dense inference: {pixels} pixels (limit {limit})")]
    TooLarge { pixels: usize, limit: usize },

    #[error("empty evaluation set")]
    EmptyReport,

    #[error("usage error: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 1,
            Error::Divergence { .. } => 3,
            _ => 2,
        }
    }
}
