use thiserror::Error;

/// Errors raised by node construction and the analysis routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid degree {degree}: {reason}")]
    InvalidDegree { degree: usize, reason: &'static str },

    #[error("node set is not unisolvent: {0}")]
    NotUnisolvent(String),

    #[error("domain violation: {0}")]
    DomainViolation(String),

    #[error("argument out of domain: {0}")]
    OutOfDomain(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("search did not converge: {0}")]
    ConvergenceFailure(String),

    #[error("sign undecided at {bits} bits (|value| = {magnitude:e} within margin)")]
    NeedsMorePrecision { bits: u32, magnitude: f64 },

    #[error("sign undecided up to the precision cap of {cap_bits} bits at degree {degree}, interval {interval}")]
    Undecided {
        degree: usize,
        interval: usize,
        cap_bits: u32,
    },

    #[error("no degree up to {n_max} satisfies the condition")]
    NotFound { n_max: usize },

    #[error("maxima count unstable under grid refinement: {0}")]
    UnstableCount(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
