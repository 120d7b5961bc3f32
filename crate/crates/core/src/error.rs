use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpiError {
    #[error("invalid dimensions: {0}")]
    InvalidDimensions(String),

    #[error("dimension mismatch: {what} (expected {expected}, got {got})")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("pixel {index} = {value} lies outside [0, 1]")]
    PixelOutOfRange { index: usize, value: f64 },

    #[error("key entry ({row}, {col}) = {value} is not binary")]
    NonBinaryKey { row: usize, col: usize, value: u8 },

    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    #[error("index {index} out of range 0..{len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("non-finite value at position {0}")]
    NonFinite(usize),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{context}: malformed input at {location}: {message}")]
    Format {
        context: String,
        location: String,
        message: String,
    },
}

impl SpiError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        SpiError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn format(
        context: impl Into<String>,
        location: impl Into<String>,
        message: impl Into<String>,
    ) -> Self {
        SpiError::Format {
            context: context.into(),
            location: location.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, SpiError>;
