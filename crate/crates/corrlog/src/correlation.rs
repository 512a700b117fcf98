//! Correlation-matrix validation: unit diagonal, off-diagonal entries in
//! (−1, 1), and positive definiteness measured against a relative floor.

use crate::eigen::sym_eig;
use crate::error::{Error, Result, ValidationIssue};
use crate::matfun::pd_threshold;
use crate::sym::SymMatrix;

/// A symmetric matrix that passed [`validate_correlation`]. The wrapper is
/// the proof of validity; construction is the only gate.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    inner: SymMatrix,
    lambda_min: f64,
}

impl CorrelationMatrix {
    pub fn n(&self) -> usize {
        self.inner.n()
    }

    pub fn matrix(&self) -> &SymMatrix {
        &self.inner
    }

    pub fn into_matrix(self) -> SymMatrix {
        self.inner
    }

    /// Smallest eigenvalue, recorded at validation time.
    pub fn lambda_min(&self) -> f64 {
        self.lambda_min
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.inner.get(i, j)
    }
}

/// Validate M as a non-singular correlation matrix. Collects every violated
/// condition — diagonal, range, definiteness — instead of stopping at the
/// first, and reports λ_min either way.
pub fn validate_correlation(m: &SymMatrix, tol: f64) -> Result<CorrelationMatrix> {
    let n = m.n();
    let mut issues = Vec::new();
    for i in 0..n {
        let d = m.get(i, i);
        if (d - 1.0).abs() > tol {
            issues.push(ValidationIssue::Diagonal { i, value: d });
        }
        for j in 0..i {
            let v = m.get(i, j);
            if v <= -1.0 || v >= 1.0 {
                issues.push(ValidationIssue::Range { i, j, value: v });
            }
        }
    }
    let dec = sym_eig(m)?;
    let lambda_min = dec.lambda_min();
    if lambda_min <= pd_threshold(dec.lambda_max()) {
        issues.push(ValidationIssue::Definiteness { lambda_min });
    }
    if issues.is_empty() {
        Ok(CorrelationMatrix {
            inner: m.clone(),
            lambda_min,
        })
    } else {
        Err(Error::Validation { issues, lambda_min })
    }
}
