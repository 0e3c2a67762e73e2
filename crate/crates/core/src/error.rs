use thiserror::Error;

/// Errors raised by the matrix kernels, the manifold layer and the retractions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch in {op}: expected {expected:?}, got {got:?}")]
    Shape {
        op: &'static str,
        expected: (usize, usize),
        got: (usize, usize),
    },

    #[error("{op} requires a square matrix, got {rows}x{cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },

    #[error("{op} requires an even dimension, got {dim}")]
    OddDimension { op: &'static str, dim: usize },

    #[error("invalid dimensions: {0}")]
    InvalidDimensions(String),

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is singular to working precision in {op}")]
    Singular { op: &'static str },

    #[error("{op} did not converge after {iterations} iterations (residual {residual:e})")]
    NotConverged {
        op: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("input outside the retraction domain: {reason}")]
    OutOfDomain { reason: String },

    #[error("{what} residual {residual:e} exceeds tolerance {tol:e}")]
    Membership {
        what: &'static str,
        residual: f64,
        tol: f64,
    },

    #[error("unknown retraction '{0}'")]
    UnknownRetraction(String),
}

pub type Result<T> = std::result::Result<T, Error>;
