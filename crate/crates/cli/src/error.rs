use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    /// Bad flags or a configuration outside a protocol's domain (exit 2).
    #[error("usage: {0}")]
    Usage(String),
    /// A checked property failed (exit 1).
    #[error("assertion failed: {0}")]
    Assertion(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Protocol(#[from] ccproto::Error),
    #[error(transparent)]
    Congest(#[from] ccproto_congest::CongestError),
}

impl HarnessError {
    pub fn exit_code(&self) -> u8 {
        match self {
            HarnessError::Usage(_) => 2,
            HarnessError::Protocol(ccproto::Error::Domain(_)) => 2,
            HarnessError::Protocol(ccproto::Error::InvalidInput(_)) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
