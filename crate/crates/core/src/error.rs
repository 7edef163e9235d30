use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain an operation is defined on.
    #[error("domain error: {0}")]
    Domain(String),

    /// Geometric-rate fitting had too little usable data.
    #[error("rate fit failed: {0}")]
    Fit(String),

    /// A factorization or iteration broke down.
    #[error("numerical failure: {message}")]
    Numerical {
        message: String,
        condition_estimate: Option<f64>,
    },

    /// The sample size is below the threshold from which the tail bound applies.
    #[error("n = {n} is below the threshold n0 = {n0}; the tail bound does not apply")]
    BelowThreshold { n: u64, n0: u64 },

    /// Malformed serialized input (model JSON, correlation CSV).
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
