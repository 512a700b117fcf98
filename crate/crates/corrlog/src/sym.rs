//! Dense symmetric matrices and the `vecl` vectorization.
//!
//! Everything downstream — the gamma transform, the Jacobians, the
//! asymptotic covariances — shares one convention: `vecl` stacks the strict
//! lower triangle column-major, i.e. (2,1),(3,1),…,(n,1),(3,2),…,(n,n−1).
//! The elimination maps in [`crate::frechet`] index into `vec` (full
//! column-major stacking) with the same convention.

use crate::error::{Error, Result};

/// Dense real symmetric n×n matrix, stored full, row-major. Symmetry is
/// structural: constructors reject asymmetric input and mutation goes
/// through [`SymMatrix::set`], which writes both triangles.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    a: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix {
            n,
            a: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            m.a[i * n + i] = 1.0;
        }
        m
    }

    pub fn diag(d: &[f64]) -> Self {
        let mut m = SymMatrix::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m.a[i * d.len() + i] = v;
        }
        m
    }

    /// Build from full row-major entries, checking symmetry and finiteness.
    pub fn from_rows(n: usize, a: Vec<f64>) -> Result<Self> {
        if a.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: a.len(),
            });
        }
        for i in 0..n {
            for j in 0..n {
                let v = a[i * n + j];
                if !v.is_finite() {
                    return Err(Error::NonFinite { i, j });
                }
                if j > i && v != a[j * n + i] {
                    return Err(Error::NotSymmetric {
                        i,
                        j,
                        a: v,
                        b: a[j * n + i],
                    });
                }
            }
        }
        Ok(SymMatrix { n, a })
    }

    /// Build without the symmetry check; callers guarantee `a` is symmetric.
    pub(crate) fn from_rows_unchecked(n: usize, a: Vec<f64>) -> Self {
        debug_assert_eq!(a.len(), n * n);
        SymMatrix { n, a }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    /// Write entry (i,j) and its mirror (j,i).
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.n + j] = v;
        self.a[j * self.n + i] = v;
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// Replace the diagonal by `x`, the A[x] operation of the fixed-point map.
    pub fn with_diagonal(&self, x: &[f64]) -> Result<SymMatrix> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        let mut m = self.clone();
        for (i, &v) in x.iter().enumerate() {
            m.a[i * self.n + i] = v;
        }
        Ok(m)
    }

    pub fn max_abs(&self) -> f64 {
        self.a.iter().fold(0.0, |m, &v| m.max(v.abs()))
    }

    /// Largest absolute difference, entrywise.
    pub fn max_abs_diff(&self, other: &SymMatrix) -> f64 {
        assert_eq!(self.n, other.n);
        self.a
            .iter()
            .zip(&other.a)
            .fold(0.0, |m, (&x, &y)| m.max((x - y).abs()))
    }

    pub(crate) fn as_slice(&self) -> &[f64] {
        &self.a
    }
}

/// Length of vecl for an n×n matrix.
pub fn vecl_len(n: usize) -> usize {
    n * (n - 1) / 2
}

/// Recover n from d = n(n−1)/2. d = 0 maps to n = 1.
pub fn vecl_dim(d: usize) -> Result<usize> {
    if d == 0 {
        return Ok(1);
    }
    // n = (1 + sqrt(1+8d)) / 2, then verify exactly
    let n = (1.0 + ((1 + 8 * d) as f64).sqrt()) / 2.0;
    let n = n.round() as usize;
    if n >= 2 && vecl_len(n) == d {
        Ok(n)
    } else {
        Err(Error::NotTriangular { len: d })
    }
}

/// Index pairs (i, j), i > j, in vecl order: column-major strict lower.
pub fn vecl_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |j| (j + 1..n).map(move |i| (i, j)))
}

/// Position of (i,j), i > j (0-based), within the vecl stacking.
#[inline]
pub fn vecl_pos(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i > j && i < n);
    // offset of column j plus distance down the column
    j * (2 * n - j - 1) / 2 + (i - j - 1)
}

/// Vector in R^{n(n−1)/2} holding the strict lower triangle of an n×n
/// symmetric matrix: ϱ = vecl C, γ = vecl log C, φ = vecl F all use this.
#[derive(Debug, Clone, PartialEq)]
pub struct VeclVector {
    n: usize,
    v: Vec<f64>,
}

/// γ lives in the same indexing as every other vecl vector.
pub type GammaVector = VeclVector;

impl VeclVector {
    pub fn new(v: Vec<f64>) -> Result<Self> {
        let n = vecl_dim(v.len())?;
        Ok(VeclVector { n, v })
    }

    pub fn zeros(n: usize) -> Self {
        VeclVector {
            n,
            v: vec![0.0; vecl_len(n)],
        }
    }

    /// Dimension n of the matrix this vector came from.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.v.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.v
    }

    #[inline]
    pub fn get(&self, p: usize) -> f64 {
        self.v[p]
    }

    pub fn max_abs(&self) -> f64 {
        self.v.iter().fold(0.0, |m, &x| m.max(x.abs()))
    }

    pub fn max_abs_diff(&self, other: &VeclVector) -> f64 {
        assert_eq!(self.n, other.n);
        self.v
            .iter()
            .zip(&other.v)
            .fold(0.0, |m, (&x, &y)| m.max((x - y).abs()))
    }
}

/// Strict lower triangle of M, stacked column-major.
pub fn vecl(m: &SymMatrix) -> VeclVector {
    let n = m.n();
    let v = vecl_pairs(n).map(|(i, j)| m.get(i, j)).collect();
    VeclVector { n, v }
}

/// Symmetric matrix with strict lower (and mirrored upper) triangle from `v`
/// and diagonal from `diag`. Inverse of [`vecl`] up to the choice of diagonal.
pub fn unvecl(v: &VeclVector, diag: &[f64]) -> Result<SymMatrix> {
    let n = v.n();
    if diag.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: diag.len(),
        });
    }
    let mut m = SymMatrix::zeros(n);
    for (p, (i, j)) in vecl_pairs(n).enumerate() {
        m.set(i, j, v.v[p]);
    }
    for (i, &d) in diag.iter().enumerate() {
        m.set(i, i, d);
    }
    Ok(m)
}
