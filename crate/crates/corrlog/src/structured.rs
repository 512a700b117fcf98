//! Structured correlation matrices and what the matrix logarithm does to
//! them.
//!
//! The equicorrelation family has a scalar closed form: log C again has
//! constant off-diagonal entries γ_c = (1/n)·log(1 + nρ/(1−ρ)), invertible
//! in closed form. Block-equicorrelation structure is preserved region by
//! region, and the log of a Toeplitz correlation matrix is bisymmetric.
//! The generators here build the structured matrices; the checkers verify
//! the preservation claims numerically on a concrete matrix rather than
//! assuming them.

use crate::correlation::{validate_correlation, CorrelationMatrix};
use crate::error::{Error, Result};
use crate::matfun::sym_log;
use crate::sym::{vecl_pos, SymMatrix};

/// Absolute tolerance for the structure checks on entries of log C: one
/// eigendecomposition deep, so errors are O(n·ε·‖log C‖), far below this.
pub const STRUCTURE_TOL: f64 = 1e-9;

/// γ_c: the common off-diagonal entry of log C when C is the n×n
/// equicorrelation matrix with parameter ρ ∈ (−1/(n−1), 1).
pub fn equi_gamma(rho: f64, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::BadParameter("equicorrelation needs n >= 1".into()));
    }
    let lower = if n > 1 {
        -1.0 / (n as f64 - 1.0)
    } else {
        f64::NEG_INFINITY
    };
    if !rho.is_finite() || rho <= lower || rho >= 1.0 {
        return Err(Error::BadParameter(format!(
            "equicorrelation parameter must lie in ({lower}, 1), got {rho}"
        )));
    }
    let nf = n as f64;
    Ok((1.0 + nf * rho / (1.0 - rho)).ln() / nf)
}

/// Inverse of [`equi_gamma`]: the correlation parameter recovered from a
/// common off-diagonal value γ_c of log C. Always lands in (−1/(n−1), 1);
/// evaluated in whichever algebraic form keeps the exponential bounded, so
/// extreme γ_c saturate toward the interval ends instead of overflowing.
pub fn equi_rho(gamma_c: f64, n: usize) -> f64 {
    let nf = n as f64;
    if gamma_c >= 0.0 {
        let e = (-nf * gamma_c).exp(); // in (0, 1]
        (1.0 - e) / (1.0 + (nf - 1.0) * e)
    } else {
        let w = (nf * gamma_c).exp(); // in (0, 1)
        (w - 1.0) / (w + nf - 1.0)
    }
}

/// The n×n equicorrelation matrix: ones on the diagonal, ρ everywhere else.
pub fn make_equicorrelation(rho: f64, n: usize) -> Result<CorrelationMatrix> {
    let mut m = SymMatrix::identity(n);
    for i in 0..n {
        for j in 0..i {
            m.set(i, j, rho);
        }
    }
    validate_correlation(&m, 1e-12)
}

/// The Toeplitz correlation matrix C_ij = ρ^{|i−j|}.
pub fn make_toeplitz(rho: f64, n: usize) -> Result<CorrelationMatrix> {
    let mut m = SymMatrix::identity(n);
    for i in 0..n {
        for j in 0..i {
            m.set(i, j, rho.powi((i - j) as i32));
        }
    }
    validate_correlation(&m, 1e-12)
}

/// A block-equicorrelation layout: K ordered blocks with sizes n_k, a
/// within-block correlation per block (diagonal of `rho`) and a
/// between-block correlation per block pair (off-diagonal of `rho`).
#[derive(Debug, Clone)]
pub struct BlockPartition {
    sizes: Vec<usize>,
    rho: SymMatrix,
}

impl BlockPartition {
    pub fn new(sizes: Vec<usize>, rho: SymMatrix) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::BadParameter(
                "a partition needs at least one block".into(),
            ));
        }
        if let Some(&bad) = sizes.iter().find(|&&s| s == 0) {
            return Err(Error::BadParameter(format!(
                "block sizes must be >= 1, got {bad}"
            )));
        }
        if rho.n() != sizes.len() {
            return Err(Error::DimensionMismatch {
                expected: sizes.len(),
                got: rho.n(),
            });
        }
        Ok(BlockPartition { sizes, rho })
    }

    pub fn k(&self) -> usize {
        self.sizes.len()
    }

    pub fn n(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn rho(&self) -> &SymMatrix {
        &self.rho
    }

    /// Block index of each row of the expanded matrix.
    fn owners(&self) -> Vec<usize> {
        let mut owner = Vec::with_capacity(self.n());
        for (k, &s) in self.sizes.iter().enumerate() {
            owner.extend(std::iter::repeat_n(k, s));
        }
        owner
    }
}

/// Expand a partition into its correlation matrix and validate it.
pub fn make_block(part: &BlockPartition) -> Result<CorrelationMatrix> {
    let n = part.n();
    let owner = part.owners();
    let mut m = SymMatrix::identity(n);
    for i in 0..n {
        for j in 0..i {
            m.set(i, j, part.rho.get(owner[i], owner[j]));
        }
    }
    validate_correlation(&m, 1e-12)
}

/// Outcome of a structure check: the largest absolute deviation from the
/// asserted structure and where it occurred.
#[derive(Debug, Clone)]
pub struct SymmetryReport {
    pub pass: bool,
    pub max_deviation: f64,
    pub location: Option<(usize, usize)>,
    pub tolerance: f64,
}

/// Outcome of the block-preservation check on log C, with the estimated
/// region constants: one diagonal value per block, one within-block
/// off-diagonal value per block of size ≥ 2, one value per block pair
/// (pairs in the shared vecl order over blocks).
#[derive(Debug, Clone)]
pub struct BlockReport {
    pub pass: bool,
    pub max_deviation: f64,
    pub location: Option<(usize, usize)>,
    pub tolerance: f64,
    pub diagonal: Vec<f64>,
    pub within: Vec<Option<f64>>,
    pub between: Vec<f64>,
}

/// Verify that log C carries the same block structure as C: constant in
/// every within-block off-diagonal region, constant in every between-block
/// region, and a single diagonal value per block. Each region's constant is
/// estimated by averaging the region, so no entry is privileged; the report
/// carries the worst deviation from the estimates.
pub fn check_block_preservation(
    c: &CorrelationMatrix,
    part: &BlockPartition,
) -> Result<BlockReport> {
    let n = c.n();
    if part.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: part.n(),
        });
    }
    let g = sym_log(c.matrix())?;
    let owner = part.owners();
    let kk = part.k();

    let mut diag = vec![(0.0, 0usize); kk];
    let mut within = vec![(0.0, 0usize); kk];
    let mut between = vec![(0.0, 0usize); kk * (kk - 1) / 2];
    for i in 0..n {
        diag[owner[i]].0 += g.get(i, i);
        diag[owner[i]].1 += 1;
        for j in 0..i {
            let (bi, bj) = (owner[i], owner[j]);
            let slot = if bi == bj {
                &mut within[bi]
            } else {
                &mut between[vecl_pos(kk, bi, bj)]
            };
            slot.0 += g.get(i, j);
            slot.1 += 1;
        }
    }
    let mean = |(s, c): (f64, usize)| if c > 0 { Some(s / c as f64) } else { None };
    let diagonal: Vec<f64> = diag.into_iter().map(|x| mean(x).unwrap()).collect();
    let within: Vec<Option<f64>> = within.into_iter().map(mean).collect();
    let between: Vec<f64> = between
        .into_iter()
        .map(|x| mean(x).expect("between regions are nonempty for valid partitions"))
        .collect();

    let mut max_deviation = 0.0f64;
    let mut location = None;
    let mut consider = |dev: f64, at: (usize, usize)| {
        if dev > max_deviation {
            max_deviation = dev;
            location = Some(at);
        }
    };
    for i in 0..n {
        consider((g.get(i, i) - diagonal[owner[i]]).abs(), (i, i));
        for j in 0..i {
            let (bi, bj) = (owner[i], owner[j]);
            let target = if bi == bj {
                within[bi].expect("region with an (i,j) member is nonempty")
            } else {
                between[vecl_pos(kk, bi, bj)]
            };
            consider((g.get(i, j) - target).abs(), (i, j));
        }
    }

    Ok(BlockReport {
        pass: max_deviation <= STRUCTURE_TOL,
        max_deviation,
        location,
        tolerance: STRUCTURE_TOL,
        diagonal,
        within,
        between,
    })
}

/// Verify bisymmetry: M_ij == M_{n+1−j, n+1−i} (symmetry about the
/// anti-diagonal, in 1-based index language). Holds for the log of any
/// Toeplitz correlation matrix.
pub fn check_bisymmetry(m: &SymMatrix) -> SymmetryReport {
    let n = m.n();
    let mut max_deviation = 0.0f64;
    let mut location = None;
    for i in 0..n {
        for j in 0..n {
            let dev = (m.get(i, j) - m.get(n - 1 - j, n - 1 - i)).abs();
            if dev > max_deviation {
                max_deviation = dev;
                location = Some((i, j));
            }
        }
    }
    SymmetryReport {
        pass: max_deviation <= STRUCTURE_TOL,
        max_deviation,
        location,
        tolerance: STRUCTURE_TOL,
    }
}
