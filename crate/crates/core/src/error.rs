use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parameter outside protocol domain: {0}")]
    Domain(String),
    #[error("malformed encoding: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
