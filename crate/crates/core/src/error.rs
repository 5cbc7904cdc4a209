use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Physical or grid parameters outside the supported range.
    #[error("configuration error: {0}")]
    Config(String),
    /// Argument outside a function's mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// A state that violates a required invariant (e.g. not normalized).
    #[error("invalid state: {0}")]
    InvalidState(String),
    /// Non-finite value encountered during a numerical evaluation.
    #[error("numerical error at {location}: {message}")]
    Numerical { location: String, message: String },
    /// Requested work exceeds a hard resource limit.
    #[error("resource limit: {0}")]
    Resource(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn config<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Config(msg.into()))
}
