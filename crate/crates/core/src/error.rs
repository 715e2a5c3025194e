use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("point {0} lies on a branch cut")]
    BranchCut(String),

    #[error("k must exceed 1 (got {0}); k = 1 requires the exploratory flag")]
    InvalidK(String),

    #[error("non-positive beta at n = {n}; increase precision_bits")]
    NonPositiveBeta { n: usize },

    #[error("Newton iteration for Gauss-Legendre node {index} of {n} did not converge")]
    NodeNotConverged { index: usize, n: usize },

    #[error("{what}: not converged after {levels} levels (estimate {estimate})")]
    NotConverged {
        what: String,
        levels: usize,
        estimate: f64,
    },

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("fit range too narrow: {0}")]
    FitRange(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
