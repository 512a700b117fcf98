//! Matrix exponential, logarithm and real powers of symmetric matrices,
//! all through the eigendecomposition: f(M) = Q·diag(f(λ))·Qᵀ.

use crate::eigen::{sym_eig, EigenDecomposition};
use crate::error::{Error, Result};
use crate::sym::SymMatrix;

/// Relative positive-definiteness floor: λ_min must exceed
/// `PD_TOL · max(1, λ_max)` for a matrix to count as non-singular PD.
pub const PD_TOL: f64 = 1e-12;

pub(crate) fn pd_threshold(lambda_max: f64) -> f64 {
    PD_TOL * lambda_max.max(1.0)
}

/// e^M for symmetric M. Always symmetric positive definite.
pub fn sym_exp(m: &SymMatrix) -> Result<SymMatrix> {
    Ok(sym_eig(m)?.reconstruct_with(f64::exp))
}

/// log M for symmetric positive definite M. Errors with the offending
/// eigenvalue when M is not PD.
pub fn sym_log(m: &SymMatrix) -> Result<SymMatrix> {
    Ok(log_decomposition(&sym_eig(m)?)?.reconstruct())
}

/// M^alpha = e^{alpha·log M} for symmetric positive definite M.
pub fn sym_pow(m: &SymMatrix, alpha: f64) -> Result<SymMatrix> {
    let dec = sym_eig(m)?;
    check_pd(&dec)?;
    Ok(dec.reconstruct_with(|l| (alpha * l.ln()).exp()))
}

/// The eigendecomposition of log M, reusing Q from the decomposition of M.
pub(crate) fn log_decomposition(dec: &EigenDecomposition) -> Result<EigenDecomposition> {
    check_pd(dec)?;
    let lambda = dec.lambda().iter().map(|&l| l.ln()).collect();
    Ok(EigenDecomposition::from_parts(
        dec.n(),
        dec.q_matrix().to_vec(),
        lambda,
    ))
}

/// Lower Cholesky factor (row-major n×n, upper part zero) of a symmetric
/// positive definite matrix. Fails on a non-positive pivot, reporting it
/// as the offending "eigenvalue" so callers get a uniform PD error.
pub(crate) fn cholesky_lower(m: &SymMatrix) -> Result<Vec<f64>> {
    let n = m.n();
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = m.get(i, j);
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if s <= 0.0 || !s.is_finite() {
                    return Err(Error::NotPositiveDefinite {
                        lambda: s,
                        index: i,
                        threshold: 0.0,
                    });
                }
                l[i * n + i] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    Ok(l)
}

/// Solve (L Lᵀ) x = b given the lower factor from [`cholesky_lower`].
pub(crate) fn cholesky_solve(l: &[f64], n: usize, b: &[f64]) -> Vec<f64> {
    let mut y = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            y[i] -= l[i * n + k] * y[k];
        }
        y[i] /= l[i * n + i];
    }
    for i in (0..n).rev() {
        for k in i + 1..n {
            y[i] -= l[k * n + i] * y[k];
        }
        y[i] /= l[i * n + i];
    }
    y
}

pub(crate) fn check_pd(dec: &EigenDecomposition) -> Result<()> {
    let threshold = pd_threshold(dec.lambda_max());
    if dec.lambda_min() <= threshold {
        return Err(Error::NotPositiveDefinite {
            lambda: dec.lambda_min(),
            index: 0,
            threshold,
        });
    }
    Ok(())
}
