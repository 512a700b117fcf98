//! Symmetric eigensolver: Householder tridiagonalization followed by the
//! implicit-shift QL iteration, the classic EISPACK tred2/tql2 pair (via the
//! public-domain JAMA port). Eigenvalues come out ascending; eigenvectors are
//! the columns of an accumulated orthogonal Q.
//!
//! One eigendecomposition is the unit of work for everything here: the matrix
//! exponential/logarithm, each fixed-point iteration, and all Jacobians.

use crate::error::{Error, Result};
use crate::sym::SymMatrix;

/// QL sweeps allowed per eigenvalue before giving up.
const MAX_SWEEPS: usize = 30;

#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    n: usize,
    /// n×n row-major; column k is the eigenvector for lambda[k].
    q: Vec<f64>,
    /// Ascending eigenvalues.
    lambda: Vec<f64>,
}

/// Eigendecomposition of a symmetric matrix.
///
/// Fails (without partial results) if the QL iteration stalls, which for
/// finite symmetric input essentially never happens.
pub fn sym_eig(m: &SymMatrix) -> Result<EigenDecomposition> {
    let n = m.n();
    let mut v = m.as_slice().to_vec();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(n, &mut v, &mut d, &mut e);
    tql2(n, &mut v, &mut d, &mut e)?;
    Ok(EigenDecomposition { n, q: v, lambda: d })
}

impl EigenDecomposition {
    /// Assemble from parts; used to reuse Q across f(λ) rescalings, e.g. the
    /// decomposition of G = log C from the decomposition of C.
    pub fn from_parts(n: usize, q: Vec<f64>, lambda: Vec<f64>) -> Self {
        debug_assert_eq!(q.len(), n * n);
        debug_assert_eq!(lambda.len(), n);
        EigenDecomposition { n, q, lambda }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn lambda_min(&self) -> f64 {
        self.lambda[0]
    }

    pub fn lambda_max(&self) -> f64 {
        self.lambda[self.n - 1]
    }

    /// Entry i of eigenvector k.
    #[inline]
    pub fn q(&self, i: usize, k: usize) -> f64 {
        self.q[i * self.n + k]
    }

    pub fn q_matrix(&self) -> &[f64] {
        &self.q
    }

    /// Q·diag(f(λ))·Qᵀ, re-symmetrized. The workhorse behind exp, log and
    /// real powers of a symmetric matrix.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> SymMatrix {
        let n = self.n;
        let w: Vec<f64> = self.lambda.iter().map(|&l| f(l)).collect();
        let mut out = vec![0.0; n * n];
        // out = (Q * diag(w)) * Qᵀ; fill lower, mirror, average drift away
        for i in 0..n {
            for j in 0..=i {
                let mut s = 0.0;
                for k in 0..n {
                    s += self.q[i * n + k] * w[k] * self.q[j * n + k];
                }
                out[i * n + j] = s;
                out[j * n + i] = s;
            }
        }
        SymMatrix::from_rows_unchecked(n, out)
    }

    pub fn reconstruct(&self) -> SymMatrix {
        self.reconstruct_with(|l| l)
    }

    /// ‖QᵀQ − I‖_max.
    pub fn orthogonality_residual(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in a..n {
                let mut s = 0.0;
                for i in 0..n {
                    s += self.q[i * n + a] * self.q[i * n + b];
                }
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((s - target).abs());
            }
        }
        worst
    }

    /// diag(f(M)) without forming f(M): entry i is Σ_k q_ik² f(λ_k).
    /// This is the δ(x) = diag(e^{G[x]}) kernel of the fixed-point step.
    pub fn function_diagonal(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        let n = self.n;
        let fl: Vec<f64> = self.lambda.iter().map(|&l| f(l)).collect();
        (0..n)
            .map(|i| {
                let mut s = 0.0;
                for k in 0..n {
                    let q = self.q[i * n + k];
                    s += q * q * fl[k];
                }
                s
            })
            .collect()
    }
}

/// Householder reduction to tridiagonal form, accumulating transformations.
/// On exit `v` holds the orthogonal accumulation, `d` the diagonal and `e`
/// the subdiagonal. Direct port of the JAMA tred2 routine.
fn tred2(n: usize, v: &mut [f64], d: &mut [f64], e: &mut [f64]) {
    let at = |v: &[f64], i: usize, j: usize| v[i * n + j];

    for j in 0..n {
        d[j] = at(v, n - 1, j);
    }

    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for item in d.iter().take(i) {
            scale += item.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = at(v, i - 1, j);
                v[i * n + j] = 0.0;
                v[j * n + i] = 0.0;
            }
        } else {
            for k in 0..i {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            let f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for item in e.iter_mut().take(i) {
                *item = 0.0;
            }
            for j in 0..i {
                let f = d[j];
                v[j * n + i] = f;
                let mut g = e[j] + at(v, j, j) * f;
                for k in j + 1..i {
                    g += at(v, k, j) * d[k];
                    e[k] += at(v, k, j) * f;
                }
                e[j] = g;
            }
            let mut f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                let f = d[j];
                let g = e[j];
                for k in j..i {
                    v[k * n + j] -= f * e[k] + g * d[k];
                }
                d[j] = at(v, i - 1, j);
                v[i * n + j] = 0.0;
            }
        }
        d[i] = h;
    }

    // accumulate transformations
    for i in 0..n - 1 {
        v[(n - 1) * n + i] = at(v, i, i);
        v[i * n + i] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = at(v, k, i + 1) / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += at(v, k, i + 1) * at(v, k, j);
                }
                for k in 0..=i {
                    v[k * n + j] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[k * n + i + 1] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = at(v, n - 1, j);
        v[(n - 1) * n + j] = 0.0;
    }
    v[(n - 1) * n + n - 1] = 1.0;
    e[0] = 0.0;
}

/// Implicit-shift QL on the tridiagonal (d, e), rotations applied to v.
/// Sorts eigenvalues (and vectors) ascending. JAMA tql2 plus the EISPACK
/// 30-sweep failure guard.
fn tql2(n: usize, v: &mut [f64], d: &mut [f64], e: &mut [f64]) -> Result<()> {
    if n == 1 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0f64;
    let mut tst1 = 0.0f64;
    let eps = 2.0f64.powi(-52);

    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_SWEEPS {
                    return Err(Error::EigenNoConvergence { iterations: iter });
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for item in d.iter_mut().take(n).skip(l + 2) {
                    *item -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0f64;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0f64;
                let mut s2 = 0.0f64;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..n {
                        let h = v[k * n + i + 1];
                        v[k * n + i + 1] = s * v[k * n + i] + c * h;
                        v[k * n + i] = c * v[k * n + i] - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }

    // selection sort ascending, carrying eigenvectors along
    for i in 0..n - 1 {
        let mut k = i;
        let mut p = d[i];
        for j in i + 1..n {
            if d[j] < p {
                k = j;
                p = d[j];
            }
        }
        if k != i {
            d[k] = d[i];
            d[i] = p;
            for row in 0..n {
                v.swap(row * n + i, row * n + k);
            }
        }
    }
    Ok(())
}
