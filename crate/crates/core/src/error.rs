use thiserror::Error;

/// Errors raised when building landscapes, partitions or experiments.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NkError {
    /// An argument is outside its admissible range.
    #[error("invalid parameter: {0}")]
    Parameter(String),
    /// The request would need a table or enumeration larger than supported.
    #[error("capacity exceeded: {0}")]
    Capacity(String),
}

pub type Result<T> = std::result::Result<T, NkError>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(NkError::Parameter(msg.into()))
}
