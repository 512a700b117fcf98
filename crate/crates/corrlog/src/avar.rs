//! Asymptotic covariance matrices of the three parametrizations of a
//! correlation matrix estimated from T observations:
//!
//! * ϱ̂ = vecl(Ĉ), the raw correlations, with Ω_ϱ = E_l Ω E_lᵀ;
//! * φ̂, their elementwise Fisher transforms, with Ω_φ = D_c Ω_ϱ D_c;
//! * γ̂ = vecl(log Ĉ), with Ω_γ = E_l A⁻¹ Ω A⁻¹ E_lᵀ evaluated at G = log C;
//!
//! all driven by one Ω = avar(√T·vec(Ĉ−C)). Ω is pluggable: the Gaussian
//! i.i.d. closed form is [`omega_normal_iid`], and [`omega_monte_carlo`]
//! estimates the same object by simulation, serving as the oracle that the
//! closed form is cross-validated against.

use crate::correlation::CorrelationMatrix;
use crate::eigen::sym_eig;
use crate::error::{Error, Result};
use crate::frechet::{jacobian_a, lower_positions, DENSE_LIMIT};
use crate::matfun::{cholesky_lower, log_decomposition};
use crate::sampling::{fill_standard_normals, substream};
use crate::sym::{vecl, vecl_pairs, SymMatrix};

/// Ω = avar(√T·vec(Ĉ−C)): an n²×n² symmetric PSD matrix in the column-major
/// vec indexing. Rows and columns at diagonal vec positions are identically
/// zero — Ĉ has a constant diagonal, so those coordinates do not vary.
#[derive(Debug, Clone)]
pub struct OmegaMatrix {
    n: usize,
    m: Vec<f64>, // (n²)×(n²), row-major
}

impl OmegaMatrix {
    fn zeros(n: usize) -> Self {
        let n2 = n * n;
        OmegaMatrix {
            n,
            m: vec![0.0; n2 * n2],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Side length n² of the matrix.
    pub fn dim(&self) -> usize {
        self.n * self.n
    }

    /// Entry by flat vec positions (a, b), each in 0..n².
    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.m[a * self.dim() + b]
    }

    /// Entry for the covariance of Ĉ_{ij} with Ĉ_{kl}.
    pub fn entry(&self, (i, j): (usize, usize), (k, l): (usize, usize)) -> f64 {
        self.get(j * self.n + i, l * self.n + k)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.m
    }
}

/// The closed-form Ω under i.i.d. Gaussian sampling: for entry pairs
/// (i,j),(k,l) the classical fourth-moment expression
///
/// ```text
/// ½ρ_ij ρ_kl (ρ_ik² + ρ_il² + ρ_jk² + ρ_jl²) + ρ_ik ρ_jl + ρ_il ρ_jk
///   − ρ_ij (ρ_jk ρ_jl + ρ_ik ρ_il) − ρ_kl (ρ_ik ρ_jk + ρ_il ρ_jl)
/// ```
///
/// which vanishes identically when i = j or k = l (set exactly to zero
/// here). Cross-validated against [`omega_monte_carlo`] in the test suite.
pub fn omega_normal_iid(c: &CorrelationMatrix) -> OmegaMatrix {
    let n = c.n();
    let mut om = OmegaMatrix::zeros(n);
    let n2 = n * n;
    // the formula is defined on correlation matrices, so the diagonal is
    // exactly one even when a solver-recovered C carries O(delta) dust there
    let r = |i: usize, j: usize| if i == j { 1.0 } else { c.get(i, j) };
    // one evaluation per unordered pair of strict-lower entries, written to
    // every (i,j)↔(j,i), (k,l)↔(l,k) image so both symmetries hold bitwise
    let pairs: Vec<(usize, usize)> = vecl_pairs(n).collect();
    for (p, &(i, j)) in pairs.iter().enumerate() {
        for &(k, l) in &pairs[..=p] {
            let v = 0.5
                * r(i, j)
                * r(k, l)
                * (r(i, k).powi(2) + r(i, l).powi(2) + r(j, k).powi(2) + r(j, l).powi(2))
                + r(i, k) * r(j, l)
                + r(i, l) * r(j, k)
                - r(i, j) * (r(j, k) * r(j, l) + r(i, k) * r(i, l))
                - r(k, l) * (r(i, k) * r(j, k) + r(i, l) * r(j, l));
            for a in [j * n + i, i * n + j] {
                for b in [l * n + k, k * n + l] {
                    om.m[a * n2 + b] = v;
                    om.m[b * n2 + a] = v;
                }
            }
        }
    }
    om
}

/// Ω estimated by simulation: the second moment about zero of
/// √T·vec(Ĉ_r − C) over `reps` independent panels of T i.i.d. N(0, C) rows,
/// each panel on its own RNG substream of (seed, replication index).
pub fn omega_monte_carlo(
    c: &CorrelationMatrix,
    t: usize,
    reps: usize,
    seed: u64,
) -> Result<OmegaMatrix> {
    if t < 1000 {
        return Err(Error::BadParameter(format!(
            "monte carlo panels need T >= 1000 for the asymptotics to bite, got {t}"
        )));
    }
    if reps == 0 {
        return Err(Error::BadParameter("reps must be at least 1".into()));
    }
    let n = c.n();
    let n2 = n * n;
    let l = cholesky_lower(c.matrix())?;
    let off: Vec<usize> = (0..n2).filter(|p| p % n != p / n).collect();
    let sqrt_t = (t as f64).sqrt();

    let mut om = OmegaMatrix::zeros(n);
    let mut z = vec![0.0; n];
    let mut y = vec![0.0; n];
    let mut sums = vec![0.0; n];
    let mut prods = vec![0.0; n * n]; // lower triangle used
    let mut w = vec![0.0; n2];

    for rep in 0..reps {
        let mut rng = substream(seed, rep as u64);
        sums.iter_mut().for_each(|v| *v = 0.0);
        prods.iter_mut().for_each(|v| *v = 0.0);
        for _ in 0..t {
            fill_standard_normals(&mut rng, &mut z);
            for i in 0..n {
                let mut s = 0.0;
                for k in 0..=i {
                    s += l[i * n + k] * z[k];
                }
                y[i] = s;
            }
            for i in 0..n {
                sums[i] += y[i];
                for j in 0..=i {
                    prods[i * n + j] += y[i] * y[j];
                }
            }
        }
        let tf = t as f64;
        let mut cov = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                cov[i * n + j] = prods[i * n + j] / tf - (sums[i] / tf) * (sums[j] / tf);
            }
        }
        for i in 0..n {
            for j in 0..n {
                let (a, b) = if i >= j { (i, j) } else { (j, i) };
                let denom = (cov[i * n + i] * cov[j * n + j]).sqrt();
                let rij = if i == j { 1.0 } else { cov[a * n + b] / denom };
                w[j * n + i] = if i == j {
                    0.0
                } else {
                    sqrt_t * (rij - c.get(i, j))
                };
            }
        }
        for &a in &off {
            for &b in &off {
                if b <= a {
                    om.m[a * n2 + b] += w[a] * w[b];
                }
            }
        }
    }

    let rf = reps as f64;
    for a in 0..n2 {
        for b in 0..=a {
            let v = om.m[a * n2 + b] / rf;
            om.m[a * n2 + b] = v;
            om.m[b * n2 + a] = v;
        }
    }
    Ok(om)
}

/// Ω_ϱ = E_l Ω E_lᵀ: the d×d covariance of the strict-lower correlations.
pub fn omega_rho(om: &OmegaMatrix) -> SymMatrix {
    let n = om.n();
    let lpos = lower_positions(n);
    let d = lpos.len();
    let mut out = SymMatrix::zeros(d);
    for p in 0..d {
        for q in 0..=p {
            out.set(p, q, om.get(lpos[p], lpos[q]));
        }
    }
    out
}

/// D_c = diag(1/(1−c_i²)) for c = vecl(C): the Jacobian of the elementwise
/// Fisher transform, every entry ≥ 1.
#[derive(Debug, Clone)]
pub struct DcDiagonal {
    v: Vec<f64>,
}

pub fn dc_diagonal(c: &CorrelationMatrix) -> DcDiagonal {
    let v = vecl(c.matrix())
        .values()
        .iter()
        .map(|ci| 1.0 / (1.0 - ci * ci))
        .collect();
    DcDiagonal { v }
}

impl DcDiagonal {
    pub fn values(&self) -> &[f64] {
        &self.v
    }
}

/// Ω_φ = D_c Ω_ϱ D_c. Under the Gaussian closed form its diagonal is
/// identically one — the variance-stabilization property of the Fisher
/// transform, which holds per coordinate regardless of n.
pub fn omega_phi(om: &OmegaMatrix, c: &CorrelationMatrix) -> Result<SymMatrix> {
    let n = c.n();
    if om.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: om.n(),
        });
    }
    let rho = omega_rho(om);
    let dc = dc_diagonal(c);
    let d = rho.n();
    let mut out = SymMatrix::zeros(d);
    for p in 0..d {
        for q in 0..=p {
            out.set(p, q, dc.v[p] * rho.get(p, q) * dc.v[q]);
        }
    }
    Ok(out)
}

/// Ω_γ = E_l A⁻¹ Ω A⁻¹ E_lᵀ with A the exponential's Fréchet derivative at
/// G = log C. A⁻¹ acts in the eigenbasis (entrywise 1/ξ), never through a
/// dense n²×n² inversion; per column the cost is two operator applies and
/// one Ω·v product.
pub fn omega_gamma(om: &OmegaMatrix, c: &CorrelationMatrix) -> Result<SymMatrix> {
    let n = c.n();
    if om.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: om.n(),
        });
    }
    if n > DENSE_LIMIT {
        return Err(Error::SizeGuard {
            n,
            limit: DENSE_LIMIT,
        });
    }
    let op = jacobian_a(log_decomposition(&sym_eig(c.matrix())?)?);
    let lpos = lower_positions(n);
    let d = lpos.len();
    let n2 = n * n;

    let mut out = SymMatrix::zeros(d);
    let mut e = vec![0.0; n2];
    let mut u = vec![0.0; n2];
    for p in 0..d {
        e.iter_mut().for_each(|v| *v = 0.0);
        e[lpos[p]] = 1.0;
        let v = op.apply_inv(&e)?;
        for (r, ur) in u.iter_mut().enumerate() {
            let mut s = 0.0;
            for bidx in 0..n2 {
                s += om.get(r, bidx) * v[bidx];
            }
            *ur = s;
        }
        let w = op.apply_inv(&u)?;
        for q in p..d {
            out.set(q, p, w[lpos[q]]);
        }
    }
    Ok(out)
}

/// The correlation matrix D^{-1/2} M D^{-1/2} of a covariance-like matrix.
/// For the Ω_• of this module it is the asymptotic correlation of the
/// estimator; it is invariant under the Fisher rescaling, so
/// acorr(Ω_ϱ) == acorr(Ω_φ) exactly.
pub fn acorr(m: &SymMatrix) -> Result<SymMatrix> {
    let d = m.n();
    let mut root = Vec::with_capacity(d);
    for i in 0..d {
        let v = m.get(i, i);
        if v <= 0.0 || !v.is_finite() {
            return Err(Error::NotPositiveDefinite {
                lambda: v,
                index: i,
                threshold: 0.0,
            });
        }
        root.push(v.sqrt());
    }
    let mut out = SymMatrix::zeros(d);
    for i in 0..d {
        for j in 0..=i {
            let v = if i == j {
                1.0
            } else {
                m.get(i, j) / (root[i] * root[j])
            };
            out.set(i, j, v);
        }
    }
    Ok(out)
}
