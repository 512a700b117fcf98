use thiserror::Error;

use crate::transform::ConvergenceReport;

/// A single reason a matrix failed correlation validation. Validation
/// collects every violated condition rather than stopping at the first.
#[derive(Debug, Clone, PartialEq)]
pub enum ValidationIssue {
    /// Diagonal entry `value` at index `i` differs from 1 by more than tol.
    Diagonal { i: usize, value: f64 },
    /// Off-diagonal entry outside (-1, 1).
    Range { i: usize, j: usize, value: f64 },
    /// Smallest eigenvalue at or below the positive-definiteness threshold.
    Definiteness { lambda_min: f64 },
}

impl std::fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ValidationIssue::Diagonal { i, value } => {
                write!(f, "diagonal entry ({i},{i}) = {value} is not 1")
            }
            ValidationIssue::Range { i, j, value } => {
                write!(f, "off-diagonal entry ({i},{j}) = {value} outside (-1, 1)")
            }
            ValidationIssue::Definiteness { lambda_min } => {
                write!(f, "not positive definite (lambda_min = {lambda_min})")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("vector of length {len} is not a triangular number n(n-1)/2")]
    NotTriangular { len: usize },

    #[error("matrix is not symmetric: ({i},{j}) = {a} vs ({j},{i}) = {b}")]
    NotSymmetric { i: usize, j: usize, a: f64, b: f64 },

    #[error("non-finite entry at ({i},{j})")]
    NonFinite { i: usize, j: usize },

    #[error("eigensolver failed to converge after {iterations} implicit QL sweeps")]
    EigenNoConvergence { iterations: usize },

    #[error("matrix is not positive definite: eigenvalue {lambda} at position {index} (threshold {threshold})")]
    NotPositiveDefinite {
        lambda: f64,
        index: usize,
        threshold: f64,
    },

    #[error("not a valid correlation matrix: {}", issues.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("; "))]
    Validation {
        issues: Vec<ValidationIssue>,
        lambda_min: f64,
    },

    #[error("fixed-point iteration did not converge within {} iterations (last step {:.3e})",
            report.iterations, report.final_residual())]
    NoConvergence { report: Box<ConvergenceReport> },

    #[error("dense materialization refused for n = {n} > {limit}; use apply() instead")]
    SizeGuard { n: usize, limit: usize },

    #[error("{0}")]
    BadParameter(String),

    #[error("{path}:{line}:{col}: {msg}")]
    Parse {
        path: String,
        line: usize,
        col: usize,
        msg: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
