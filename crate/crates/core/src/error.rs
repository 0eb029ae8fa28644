//! Error types shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, CoreError>;

#[derive(Debug, Error)]
pub enum CoreError {
    /// A physical state left its admissible region (non-positive density,
    /// pressure, or internal energy), or an initial condition is unusable.
    #[error("domain error: {0}")]
    Domain(String),

    /// An API was called with inconsistent arguments (mismatched lengths,
    /// empty fields, bad dimensions).
    #[error("usage error: {0}")]
    Usage(String),

    /// A run or component was configured outside its stable/valid region,
    /// e.g. a CFL violation.
    #[error("configuration error: {0}")]
    Config(String),

    /// A computation produced NaN/Inf or failed to converge.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// A file or byte stream did not match the expected format.
    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CoreError {
    pub fn domain(msg: impl Into<String>) -> Self {
        CoreError::Domain(msg.into())
    }
    pub fn usage(msg: impl Into<String>) -> Self {
        CoreError::Usage(msg.into())
    }
    pub fn config(msg: impl Into<String>) -> Self {
        CoreError::Config(msg.into())
    }
    pub fn numerical(msg: impl Into<String>) -> Self {
        CoreError::Numerical(msg.into())
    }
    pub fn format(msg: impl Into<String>) -> Self {
        CoreError::Format(msg.into())
    }
}
