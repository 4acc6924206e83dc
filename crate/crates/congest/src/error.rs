use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CongestError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("message of {bits} bits on ({from}, {to}) exceeds the {cap}-bit cap")]
    Oversize { from: usize, to: usize, bits: usize, cap: usize },
    #[error("no edge between {0} and {1}")]
    NoEdge(usize, usize),
    #[error("second message on ({0}, {1}) in one round")]
    Duplicate(usize, usize),
    #[error(transparent)]
    Protocol(#[from] ccproto::Error),
}

pub type Result<T> = std::result::Result<T, CongestError>;
