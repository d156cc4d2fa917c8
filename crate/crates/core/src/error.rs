use thiserror::Error;

/// Library-wide error type. The CLI maps these onto process exit codes.
#[derive(Debug, Error)]
pub enum Error {
    /// An input violated a documented invariant (malformed matroid spec,
    /// dimension mismatch, precondition failure).
    #[error("specification error: {0}")]
    Spec(String),

    /// The request exceeds what this build can do (ground set too large for
    /// an exhaustive routine with no specialized fallback).
    #[error("capability error: {0}")]
    Capability(String),

    /// Enumeration exceeded the caller-provided cap.
    #[error("enumeration overflow: more than {cap} items")]
    Overflow { cap: usize },

    /// Instance or result document could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// Something that should be impossible happened; for the exchange lab
    /// this is the theorem-violation alarm class.
    #[error("internal alarm: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn spec(msg: impl Into<String>) -> Self {
        Error::Spec(msg.into())
    }
    pub fn capability(msg: impl Into<String>) -> Self {
        Error::Capability(msg.into())
    }
    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
