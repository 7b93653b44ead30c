use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, PersistError>;

#[derive(Debug, Error)]
pub enum PersistError {
    #[error(transparent)]
    Io(#[from] io::Error),
    /// A line of a trace, config or CSV file could not be accepted.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("config key `{0}` is missing")]
    MissingKey(String),
    #[error("import failed: {0}")]
    Import(String),
    #[error(transparent)]
    Model(#[from] pocketsim_core::Error),
}

pub(crate) fn parse_err(line: usize, message: impl Into<String>) -> PersistError {
    PersistError::Parse { line, message: message.into() }
}
