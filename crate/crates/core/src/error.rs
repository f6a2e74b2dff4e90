use thiserror::Error;

/// Errors raised by the graphon engine.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Two objects that must share a partition do not.
    #[error("partition mismatch: {0}")]
    Alignment(String),

    /// The requested computation exceeds the configured budget.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// Malformed input text or JSON.
    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn capacity<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Capacity(msg.into()))
}
