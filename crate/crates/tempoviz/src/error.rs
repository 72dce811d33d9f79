use thiserror::Error;

/// Errors produced by parsing and analysis operations.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input file. `row` is the 1-based row number in the source,
    /// counting the header as row 1.
    #[error("row {row}: {message}")]
    Parse { row: usize, message: String },

    /// An operation was called with arguments outside its domain.
    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub fn parse(row: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            row,
            message: message.into(),
        }
    }

    pub fn invalid(message: impl Into<String>) -> Self {
        Error::Invalid(message.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
