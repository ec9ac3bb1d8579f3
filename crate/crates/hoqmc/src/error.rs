use std::io;

/// Errors produced by net construction, analysis, and quadrature routines.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument fell outside its documented domain.
    #[error("argument out of range: {0}")]
    Range(String),

    /// Mutually inconsistent or otherwise unsupported configuration.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// The request would exceed a hard capacity guard, either the 63-digit
    /// numerator word or the 2^26 enumeration budget.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// A data file could not be parsed.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Parsed data failed an admissibility check.
    #[error("validation failed: {0}")]
    Validation(String),

    /// Underlying I/O failure.
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn range(msg: impl Into<String>) -> Self {
        Error::Range(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
