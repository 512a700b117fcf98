//! The γ parametrization: γ(C) = vecl(log C), its fixed-point inverse, the
//! known-diagonal covariance variant, and the full covariance vectorization.
//!
//! The inverse is the contraction iteration
//!
//! ```text
//! x_{k+1} = x_k − log diag(e^{A[x_k]})
//! ```
//!
//! where A[x] is the symmetric matrix with off-diagonal entries from γ and
//! diagonal x. It converges to the unique x* with diag(e^{A[x*]}) = 1 from
//! any starting point; the recovered correlation matrix is C = e^{A[x*]}.
//! Each step costs one eigendecomposition — the diagonal of e^{G} is
//! δ_i = Σ_k q_ik² e^{λ_k}, so the full exponential is only formed once,
//! after convergence.

use crate::correlation::{validate_correlation, CorrelationMatrix};
use crate::eigen::{sym_eig, EigenDecomposition};
use crate::error::{Error, Result};
use crate::matfun::{log_decomposition, sym_log, sym_pow};
use crate::sym::{unvecl, vecl, GammaVector, SymMatrix};

/// Options for the fixed-point solve. `delta` defaults to 1e−8·√n and the
/// step is measured in the 2-norm; `x0` defaults to the zero vector (the
/// fixed point has non-positive entries, so 0 is a natural corner).
#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub delta: Option<f64>,
    pub max_iter: usize,
    pub x0: Option<Vec<f64>>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            delta: None,
            max_iter: 200,
            x0: None,
        }
    }
}

impl SolveOptions {
    pub fn delta_for(&self, n: usize) -> f64 {
        self.delta.unwrap_or(1e-8 * (n as f64).sqrt())
    }
}

/// Trace of one fixed-point solve. `residuals[k]` is ‖x_{k+1} − x_k‖₂ for
/// the k-th application of the map, so `iterations == residuals.len()`.
#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub iterations: usize,
    pub residuals: Vec<f64>,
    pub converged: bool,
    pub x_star: Vec<f64>,
}

impl ConvergenceReport {
    pub fn final_residual(&self) -> f64 {
        self.residuals.last().copied().unwrap_or(0.0)
    }
}

/// The n log-standard-deviations and γ, jointly a point in R^{n(n+1)/2}
/// that identifies a covariance matrix.
#[derive(Debug, Clone)]
pub struct CovarianceVector {
    pub log_sd: Vec<f64>,
    pub gamma: GammaVector,
}

impl CovarianceVector {
    pub fn n(&self) -> usize {
        self.log_sd.len()
    }
}

/// γ(C) = vecl(log C).
pub fn gamma_of_corr(c: &CorrelationMatrix) -> Result<GammaVector> {
    Ok(vecl(&sym_log(c.matrix())?))
}

/// One application of the map g(x) = x − log diag(e^{A[x]}).
pub fn g_step(gamma: &GammaVector, x: &[f64]) -> Result<Vec<f64>> {
    let g = unvecl(gamma, x)?;
    let dec = sym_eig(&g)?;
    Ok(step_from(&dec, x))
}

/// x − log δ where δ_i = Σ_k q_ik² e^{λ_k} = [e^{G[x]}]_ii.
fn step_from(dec: &EigenDecomposition, x: &[f64]) -> Vec<f64> {
    let delta = dec.function_diagonal(f64::exp);
    x.iter().zip(delta).map(|(xi, d)| xi - d.ln()).collect()
}

struct FixedPoint {
    report: ConvergenceReport,
    /// Decomposition of G[x*], for building C = e^{G[x*]} without another solve.
    dec: EigenDecomposition,
}

/// Iterate g (optionally with a target log-diagonal) until the step norm
/// falls to delta. Shared by the correlation and known-diagonal solvers.
fn iterate(
    gamma: &GammaVector,
    log_target: Option<&[f64]>,
    opts: &SolveOptions,
) -> Result<FixedPoint> {
    let n = gamma.n();
    let delta = opts.delta_for(n);
    if delta <= 0.0 {
        return Err(Error::BadParameter(format!(
            "delta must be positive, got {delta}"
        )));
    }
    if opts.max_iter == 0 {
        return Err(Error::BadParameter("max_iter must be at least 1".into()));
    }
    let mut x = match &opts.x0 {
        Some(v) if v.len() != n => {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: v.len(),
            })
        }
        Some(v) => v.clone(),
        None => vec![0.0; n],
    };

    let mut residuals = Vec::new();
    loop {
        let g = unvecl(gamma, &x)?;
        let dec = sym_eig(&g)?;
        let mut xn = step_from(&dec, &x);
        if let Some(t) = log_target {
            for (v, &ti) in xn.iter_mut().zip(t) {
                *v += ti;
            }
        }
        let step = x
            .iter()
            .zip(&xn)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        residuals.push(step);

        if step <= delta {
            // decompose at x* itself so the returned matrix is e^{G[x*]}
            let dec_star = sym_eig(&unvecl(gamma, &xn)?)?;
            return Ok(FixedPoint {
                report: ConvergenceReport {
                    iterations: residuals.len(),
                    residuals,
                    converged: true,
                    x_star: xn,
                },
                dec: dec_star,
            });
        }
        if residuals.len() >= opts.max_iter {
            return Err(Error::NoConvergence {
                report: Box::new(ConvergenceReport {
                    iterations: residuals.len(),
                    residuals,
                    converged: false,
                    x_star: xn,
                }),
            });
        }
        x = xn;
    }
}

/// Invert γ: find the unique correlation matrix with vecl(log C) = γ.
///
/// The result is validated (unit diagonal within 10·delta, positive
/// definite) and independent of the starting point by uniqueness.
pub fn corr_of_gamma(
    gamma: &GammaVector,
    opts: &SolveOptions,
) -> Result<(CorrelationMatrix, ConvergenceReport)> {
    let n = gamma.n();
    let fp = iterate(gamma, None, opts)?;
    let c = fp.dec.reconstruct_with(f64::exp);
    let delta = opts.delta_for(n);
    let c = validate_correlation(&c, 10.0 * delta)?;
    Ok((c, fp.report))
}

/// Known-diagonal variant: x_{k+1} = x_k + [log v − log diag(e^{A[x_k]})]
/// yields the unique symmetric PD Σ with vecl(log Σ) = γ and diag(Σ) = v.
pub fn corr_of_gamma_target_diag(
    gamma: &GammaVector,
    v: &[f64],
    opts: &SolveOptions,
) -> Result<(SymMatrix, ConvergenceReport)> {
    let n = gamma.n();
    if v.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: v.len(),
        });
    }
    if let Some(&bad) = v.iter().find(|&&vi| vi <= 0.0 || !vi.is_finite()) {
        return Err(Error::BadParameter(format!(
            "target diagonal must be strictly positive, got {bad}"
        )));
    }
    let log_v: Vec<f64> = v.iter().map(|&vi| vi.ln()).collect();
    let fp = iterate(gamma, Some(&log_v), opts)?;
    Ok((fp.dec.reconstruct_with(f64::exp), fp.report))
}

/// Fisher transformation ϝ(ρ) = ½ log((1+ρ)/(1−ρ)); the n = 2 case of γ.
pub fn fisher(rho: f64) -> Result<f64> {
    if !rho.is_finite() || rho.abs() >= 1.0 {
        return Err(Error::BadParameter(format!(
            "fisher requires |rho| < 1, got {rho}"
        )));
    }
    Ok(rho.atanh())
}

/// Inverse Fisher transformation, tanh: R → (−1, 1).
pub fn fisher_inv(z: f64) -> f64 {
    z.tanh()
}

/// Σ → (log σ_i, γ(D^{-1/2} Σ D^{-1/2})).
pub fn cov_compress(sigma: &SymMatrix) -> Result<CovarianceVector> {
    let n = sigma.n();
    let dec = sym_eig(sigma)?;
    crate::matfun::check_pd(&dec)?;
    let mut log_sd = Vec::with_capacity(n);
    for i in 0..n {
        let d = sigma.get(i, i);
        if d <= 0.0 {
            return Err(Error::NotPositiveDefinite {
                lambda: d,
                index: i,
                threshold: 0.0,
            });
        }
        log_sd.push(0.5 * d.ln());
    }
    let mut c = SymMatrix::zeros(n);
    for i in 0..n {
        for j in 0..=i {
            let s = sigma.get(i, j) / (sigma.get(i, i) * sigma.get(j, j)).sqrt();
            c.set(i, j, if i == j { 1.0 } else { s });
        }
    }
    let c = validate_correlation(&c, 1e-8)?;
    Ok(CovarianceVector {
        log_sd,
        gamma: gamma_of_corr(&c)?,
    })
}

/// Inverse of [`cov_compress`]: Σ = D^{1/2} C(γ) D^{1/2}, D = diag(e^{2·log_sd}).
pub fn cov_expand(v: &CovarianceVector, opts: &SolveOptions) -> Result<SymMatrix> {
    let n = v.n();
    if v.gamma.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: v.gamma.n(),
        });
    }
    let (c, _) = corr_of_gamma(&v.gamma, opts)?;
    let sd: Vec<f64> = v.log_sd.iter().map(|&l| l.exp()).collect();
    let mut sigma = SymMatrix::zeros(n);
    for i in 0..n {
        for j in 0..=i {
            sigma.set(i, j, sd[i] * sd[j] * c.get(i, j));
        }
    }
    Ok(sigma)
}

/// C^alpha = e^{alpha·log C}.
pub fn matrix_power(c: &CorrelationMatrix, alpha: f64) -> Result<SymMatrix> {
    sym_pow(c.matrix(), alpha)
}

/// Decomposition of G = log C reusing the eigenvectors of C; the state at
/// which the asymptotic-covariance and ∂ϱ/∂γ Jacobians are evaluated.
pub fn log_corr_decomposition(c: &CorrelationMatrix) -> Result<EigenDecomposition> {
    log_decomposition(&sym_eig(c.matrix())?)
}

pub use crate::sym::GammaVector as Gamma;
