//! Fréchet-derivative machinery for the matrix exponential at symmetric
//! arguments, and the Jacobians built on it.
//!
//! With G = QΛQᵀ, the derivative of vec e^{G} in direction vec V is
//! A·vec V where A = (Q⊗Q)·diag(vec Ξ)·(Q⊗Q)ᵀ and Ξ holds the first
//! divided differences of the exponential, ξ_kl = (e^{λ_k}−e^{λ_l})/(λ_k−λ_l).
//! From A come
//!
//! * H = E_d A E_dᵀ, the Jacobian of δ(x) = diag(e^{G[x]}) in x;
//! * J = I − D⁻¹H with D = diag(δ), the derivative of the fixed-point map
//!   g(x) = x − log δ(x), whose spectral radius ν_max < 1 makes the
//!   inversion a contraction (c_L = −1/log ν_max calibrates its speed);
//! * the d×d Jacobian ∂vecl(C)/∂γ obtained from the implicit function
//!   theorem without ever materializing an n²×n² matrix.
//!
//! Everything here is pure: operators hold immutable decompositions and can
//! be shared across threads freely.

use crate::correlation::CorrelationMatrix;
use crate::eigen::{sym_eig, EigenDecomposition};
use crate::error::{Error, Result};
use crate::matfun::{cholesky_lower, cholesky_solve, log_decomposition};
use crate::sym::{unvecl, vecl_len, vecl_pairs, GammaVector, SymMatrix};

/// Dense n²×n² materializations (and the per-column ∂ϱ/∂γ build, which
/// scales the same way) are refused above this dimension; `apply` covers
/// larger n without the memory blow-up.
pub const DENSE_LIMIT: usize = 64;

/// Below this |t| the direct sinh(t)/t loses digits to cancellation; the
/// truncated series is exact to f64 there (next term is t⁶/5040 < 1e−28).
const SINCH_CUTOVER: f64 = 1e-4;

/// sinh(t)/t extended continuously through t = 0.
fn sinch(t: f64) -> f64 {
    if t.abs() < SINCH_CUTOVER {
        let t2 = t * t;
        1.0 + t2 / 6.0 + t2 * t2 / 120.0
    } else {
        t.sinh() / t
    }
}

/// First divided differences of the exponential over an eigenvalue vector:
/// ξ_kk = e^{λ_k}, ξ_kl = (e^{λ_k}−e^{λ_l})/(λ_k−λ_l) for λ_k ≠ λ_l,
/// computed in the cancellation-free form e^{(λ_k+λ_l)/2}·sinch((λ_k−λ_l)/2).
/// All entries are strictly positive, and for λ_i < λ_j the strict ordering
/// ξ_ii < ξ_ij < ξ_jj holds along with 2ξ_ij < ξ_ii + ξ_jj.
#[derive(Debug, Clone)]
pub struct XiMatrix {
    xi: SymMatrix,
}

pub fn xi_matrix(lambda: &[f64]) -> XiMatrix {
    let n = lambda.len();
    let mut xi = SymMatrix::zeros(n);
    for k in 0..n {
        for l in 0..=k {
            let mid = ((lambda[k] + lambda[l]) / 2.0).exp();
            xi.set(k, l, mid * sinch((lambda[k] - lambda[l]) / 2.0));
        }
    }
    XiMatrix { xi }
}

impl XiMatrix {
    pub fn n(&self) -> usize {
        self.xi.n()
    }

    pub fn get(&self, k: usize, l: usize) -> f64 {
        self.xi.get(k, l)
    }

    /// φ_kl = ξ_kk + ξ_ll − 2ξ_kl; strictly positive for λ_k ≠ λ_l and the
    /// weight of the rank-one term (k,l) in D − H.
    pub fn phi(&self, k: usize, l: usize) -> f64 {
        self.xi.get(k, k) + self.xi.get(l, l) - 2.0 * self.xi.get(k, l)
    }

    pub fn matrix(&self) -> &SymMatrix {
        &self.xi
    }
}

/// The derivative operator A(x): d vec e^{G[x]} = A(x) d vec G[x], held in
/// spectral form. `apply` costs one O(n³) congruence; the dense n²×n² form
/// exists for small n only.
#[derive(Debug, Clone)]
pub struct JacobianOperator {
    dec: EigenDecomposition,
    xi: XiMatrix,
}

pub fn jacobian_a(dec: EigenDecomposition) -> JacobianOperator {
    let xi = xi_matrix(dec.lambda());
    JacobianOperator { dec, xi }
}

impl JacobianOperator {
    pub fn n(&self) -> usize {
        self.dec.n()
    }

    pub fn xi(&self) -> &XiMatrix {
        &self.xi
    }

    pub fn decomposition(&self) -> &EigenDecomposition {
        &self.dec
    }

    /// A·w for w of length n² in column-major vec order:
    /// vec(Q (Ξ ∘ (QᵀWQ)) Qᵀ).
    pub fn apply(&self, w: &[f64]) -> Result<Vec<f64>> {
        self.congruence(w, false)
    }

    /// A⁻¹·w — the same congruence with entrywise 1/ξ, valid because every
    /// ξ_kl is strictly positive.
    pub fn apply_inv(&self, w: &[f64]) -> Result<Vec<f64>> {
        self.congruence(w, true)
    }

    fn congruence(&self, w: &[f64], invert: bool) -> Result<Vec<f64>> {
        let n = self.n();
        if w.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: w.len(),
            });
        }
        let q = |i: usize, k: usize| self.dec.q(i, k);

        // t1 = Qᵀ W  with W[i][j] = w[j*n + i]
        let mut t1 = vec![0.0; n * n];
        for k in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for i in 0..n {
                    s += q(i, k) * w[j * n + i];
                }
                t1[k * n + j] = s;
            }
        }
        // m = (t1 Q) ∘ Ξ^{±1}
        let mut m = vec![0.0; n * n];
        for k in 0..n {
            for l in 0..n {
                let mut s = 0.0;
                for j in 0..n {
                    s += t1[k * n + j] * q(j, l);
                }
                let xi = self.xi.get(k, l);
                m[k * n + l] = if invert { s / xi } else { s * xi };
            }
        }
        // t2 = Q m
        let mut t2 = vec![0.0; n * n];
        for i in 0..n {
            for l in 0..n {
                let mut s = 0.0;
                for k in 0..n {
                    s += q(i, k) * m[k * n + l];
                }
                t2[i * n + l] = s;
            }
        }
        // out = vec(t2 Qᵀ)
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for l in 0..n {
                    s += t2[i * n + l] * q(j, l);
                }
                out[j * n + i] = s;
            }
        }
        Ok(out)
    }

    /// Row-major n²×n² materialization; refused above [`DENSE_LIMIT`].
    pub fn dense(&self) -> Result<Vec<f64>> {
        let n = self.n();
        if n > DENSE_LIMIT {
            return Err(Error::SizeGuard {
                n,
                limit: DENSE_LIMIT,
            });
        }
        let n2 = n * n;
        let mut out = vec![0.0; n2 * n2];
        let mut e = vec![0.0; n2];
        for c in 0..n2 {
            e[c] = 1.0;
            let col = self.apply(&e)?;
            e[c] = 0.0;
            for (r, v) in col.into_iter().enumerate() {
                out[r * n2 + c] = v;
            }
        }
        Ok(out)
    }
}

/// H(x) = E_d A(x) E_dᵀ, the Jacobian of δ(x) = diag(e^{G[x]}):
/// H_ij = Σ_k Σ_l q_ik q_jk q_il q_jl ξ_kl. Symmetric positive definite,
/// and H·1 = δ (which is J·1 = 0 in disguise).
pub fn jacobian_h(op: &JacobianOperator) -> SymMatrix {
    h_from(&op.dec, &op.xi)
}

fn h_from(dec: &EigenDecomposition, xi: &XiMatrix) -> SymMatrix {
    let n = dec.n();
    let mut h = SymMatrix::zeros(n);
    let mut u = vec![0.0; n];
    for i in 0..n {
        for j in 0..=i {
            for (k, uk) in u.iter_mut().enumerate() {
                *uk = dec.q(i, k) * dec.q(j, k);
            }
            // uᵀ Ξ u
            let mut s = 0.0;
            for k in 0..n {
                let mut row = 0.0;
                for l in 0..n {
                    row += xi.get(k, l) * u[l];
                }
                s += u[k] * row;
            }
            h.set(i, j, s);
        }
    }
    h
}

/// Scalar convergence diagnostics of the fixed-point map at one state.
#[derive(Debug, Clone, Copy)]
pub struct ContractionDiagnostics {
    /// Spectral radius ν_max of J̃ (equivalently of J).
    pub nu_max: f64,
    /// c_L = −1/log ν_max, the constant scaling the iteration-count bound;
    /// exactly 0 when ν_max = 0 (one-step convergence).
    pub lipschitz_c: f64,
    /// Smallest eigenvalue of e^{G[x]} — of the recovered C when x = x*.
    pub lambda_min_c: f64,
}

/// Full contraction analysis at a state (γ, x): the Jacobian
/// J = I − D⁻¹H of g (row-major, not symmetric), its symmetric similarity
/// transform J̃ = I − D^{-1/2}HD^{-1/2} (same spectrum), the eigenvalues of
/// J̃ in ascending order, and the scalar diagnostics.
#[derive(Debug, Clone)]
pub struct ContractionAnalysis {
    pub j: Vec<f64>,
    pub j_tilde: SymMatrix,
    pub nu: Vec<f64>,
    pub diagnostics: ContractionDiagnostics,
}

/// Build J, J̃ and the contraction diagnostics at (γ, x). J̃ is assembled
/// twice — from its definition and from the rank-one expansion
/// D − H = Σ_{k<l} φ_kl u_kl u_klᵀ with u_kl = Q_{·k} ∘ Q_{·l} — and the two
/// must agree to 1e−10; a disagreement means a broken invariant, so it
/// panics rather than returning an error.
pub fn jacobian_j(gamma: &GammaVector, x: &[f64]) -> Result<ContractionAnalysis> {
    let g = unvecl(gamma, x)?;
    let dec = sym_eig(&g)?;
    let xi = xi_matrix(dec.lambda());
    let n = dec.n();
    let delta = dec.function_diagonal(f64::exp);
    let h = h_from(&dec, &xi);

    let mut j = vec![0.0; n * n];
    for i in 0..n {
        for c in 0..n {
            let id = if i == c { 1.0 } else { 0.0 };
            j[i * n + c] = id - h.get(i, c) / delta[i];
        }
    }

    let root: Vec<f64> = delta.iter().map(|d| d.sqrt()).collect();
    let mut j_tilde = SymMatrix::zeros(n);
    for i in 0..n {
        for c in 0..=i {
            let id = if i == c { 1.0 } else { 0.0 };
            j_tilde.set(i, c, id - h.get(i, c) / (root[i] * root[c]));
        }
    }

    // Rank-one cross-check: J̃ = Σ_{k<l} φ_kl w_kl w_klᵀ, w = D^{-1/2}u_kl.
    let mut alt = vec![0.0; n * n];
    let mut w = vec![0.0; n];
    for k in 0..n {
        for l in 0..k {
            let phi = xi.phi(k, l);
            for (i, wi) in w.iter_mut().enumerate() {
                *wi = dec.q(i, k) * dec.q(i, l) / root[i];
            }
            for i in 0..n {
                for c in 0..=i {
                    alt[i * n + c] += phi * w[i] * w[c];
                }
            }
        }
    }
    let mut worst = 0.0f64;
    for i in 0..n {
        for c in 0..=i {
            worst = worst.max((j_tilde.get(i, c) - alt[i * n + c]).abs());
        }
    }
    assert!(
        worst <= 1e-10,
        "the two J-tilde constructions disagree by {worst:.3e}; an invariant is broken"
    );

    let nu = sym_eig(&j_tilde)?.lambda().to_vec();
    let nu_max = *nu.last().expect("n >= 1");
    let lipschitz_c = if nu_max > 0.0 {
        -1.0 / nu_max.ln()
    } else {
        0.0
    };
    let diagnostics = ContractionDiagnostics {
        nu_max,
        lipschitz_c,
        lambda_min_c: dec.lambda_min().exp(),
    };
    Ok(ContractionAnalysis {
        j,
        j_tilde,
        nu,
        diagnostics,
    })
}

// vec positions of the strict-lower, strict-upper and diagonal entries,
// in the shared vecl ordering — the elimination matrices as index maps.
pub(crate) fn lower_positions(n: usize) -> Vec<usize> {
    vecl_pairs(n).map(|(i, j)| j * n + i).collect()
}

pub(crate) fn upper_positions(n: usize) -> Vec<usize> {
    vecl_pairs(n).map(|(i, j)| i * n + j).collect()
}

pub(crate) fn diag_positions(n: usize) -> Vec<usize> {
    (0..n).map(|k| k * n + k).collect()
}

/// The Jacobian ∂vecl(C)/∂γ of the inverse parametrization at C, a d×d
/// row-major matrix with d = n(n−1)/2:
///
/// ```text
/// E_l (I − A E_dᵀ (E_d A E_dᵀ)⁻¹ E_d) A (E_l + E_u)ᵀ
/// ```
///
/// evaluated at G = log C. Each column takes two `apply` passes and one
/// Cholesky solve against H = E_d A E_dᵀ; the elimination matrices are
/// index selections, so nothing n²×n² is ever formed.
pub fn drho_dgamma(c: &CorrelationMatrix) -> Result<Vec<f64>> {
    let n = c.n();
    if n > DENSE_LIMIT {
        return Err(Error::SizeGuard {
            n,
            limit: DENSE_LIMIT,
        });
    }
    let d = vecl_len(n);
    let op = jacobian_a(log_decomposition(&sym_eig(c.matrix())?)?);
    let h = jacobian_h(&op);
    let h_factor = cholesky_lower(&h)?;

    let lpos = lower_positions(n);
    let upos = upper_positions(n);
    let dpos = diag_positions(n);

    let mut out = vec![0.0; d * d];
    let mut v = vec![0.0; n * n];
    for p in 0..d {
        // column p of A(E_l + E_u)ᵀ
        v.iter_mut().for_each(|x| *x = 0.0);
        v[lpos[p]] = 1.0;
        v[upos[p]] = 1.0;
        let av = op.apply(&v)?;

        // correction through the diagonal block: A E_dᵀ H⁻¹ E_d (av)
        let t: Vec<f64> = dpos.iter().map(|&q| av[q]).collect();
        let s = cholesky_solve(&h_factor, n, &t);
        v.iter_mut().for_each(|x| *x = 0.0);
        for (k, &q) in dpos.iter().enumerate() {
            v[q] = s[k];
        }
        let corr = op.apply(&v)?;

        for (r, &q) in lpos.iter().enumerate() {
            out[r * d + p] = av[q] - corr[q];
        }
    }
    Ok(out)
}
