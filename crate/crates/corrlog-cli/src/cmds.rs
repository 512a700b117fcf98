//! Implementations of the subcommands. Everything here is deterministic
//! given the parsed configuration: stochastic commands draw from
//! counter-based substreams keyed by (seed, task index), and rows are
//! emitted in sorted order, so identical invocations produce identical
//! bytes.

use std::fmt::Write as _;
use std::path::Path;

use corrlog::frechet::jacobian_j;
use corrlog::{
    acorr, corr_of_gamma, cov_compress as lib_cov_compress, cov_expand as lib_cov_expand,
    gamma_of_corr, make_block, make_equicorrelation, make_toeplitz, omega_gamma, omega_normal_iid,
    omega_phi, omega_rho, parse_matrix, read_matrix, read_vector, sampling, validate_correlation,
    vecl_dim, write_matrix, write_text, write_vector, BlockPartition, CorrelationMatrix,
    CovarianceVector, Error, GammaVector, Result, SolveOptions,
};
use serde::Serialize;

use crate::X0Policy;

/// One JSON line per solve: what the iteration did and the contraction
/// diagnostics at the solution.
#[derive(Serialize)]
struct SolveReport {
    iterations: usize,
    final_residual: f64,
    nu_max: f64,
    lambda_min: f64,
}

fn io_error(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Resolve a matrix argument: a CSV path, or one of the named generators
/// `equi:<rho>`, `toeplitz:<rho>` (dimension from `n`), `block:<spec-file>`.
fn load_correlation(input: &str, n: Option<usize>, tol: f64) -> Result<CorrelationMatrix> {
    fn param(spec: &str, kind: &str) -> Result<f64> {
        spec.parse().map_err(|_| {
            Error::BadParameter(format!("{kind}: parameter is not a number: {spec:?}"))
        })
    }
    fn dim(n: Option<usize>, kind: &str) -> Result<usize> {
        n.ok_or_else(|| Error::BadParameter(format!("--n is required with the {kind}: generator")))
    }
    if let Some(spec) = input.strip_prefix("equi:") {
        make_equicorrelation(param(spec, "equi")?, dim(n, "equi")?)
    } else if let Some(spec) = input.strip_prefix("toeplitz:") {
        make_toeplitz(param(spec, "toeplitz")?, dim(n, "toeplitz")?)
    } else if let Some(path) = input.strip_prefix("block:") {
        make_block(&read_block_partition(path.as_ref())?)
    } else {
        validate_correlation(&read_matrix(input)?, tol)
    }
}

/// Block spec file: first non-empty line holds the block sizes
/// (comma-separated), the remaining lines the K×K correlation-parameter
/// matrix (diagonal = within-block, off-diagonal = between).
fn read_block_partition(path: &Path) -> Result<BlockPartition> {
    let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    let name = path.display().to_string();
    let mut sizes = None;
    let mut rest = String::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        if sizes.is_none() {
            let mut parsed = Vec::new();
            for (fidx, field) in line.split(',').enumerate() {
                let s: usize = field.trim().parse().map_err(|_| Error::Parse {
                    path: name.clone(),
                    line: idx + 1,
                    col: fidx + 1,
                    msg: format!("block size is not a positive integer: {:?}", field.trim()),
                })?;
                parsed.push(s);
            }
            sizes = Some(parsed);
        } else {
            rest.push_str(line);
            rest.push('\n');
        }
    }
    let sizes = sizes.ok_or_else(|| Error::Parse {
        path: name.clone(),
        line: 1,
        col: 1,
        msg: "empty block spec".into(),
    })?;
    let rho = parse_matrix(&rest, &name)?;
    BlockPartition::new(sizes, rho)
}

pub fn gamma(input: &str, output: &Path, n: Option<usize>, tol: f64) -> Result<()> {
    let c = load_correlation(input, n, tol)?;
    let g = gamma_of_corr(&c)?;
    write_vector(output, g.values())?;
    println!("n={} d={}", c.n(), g.len());
    Ok(())
}

fn draw_x0(policy: X0Policy, seed: Option<u64>, stream: u64, n: usize) -> Result<Option<Vec<f64>>> {
    match policy {
        X0Policy::Zero => Ok(None),
        X0Policy::HalfNormal(scale) => {
            let seed = seed.ok_or_else(|| {
                Error::BadParameter("--seed is required with a stochastic --x0 policy".into())
            })?;
            let mut rng = sampling::substream(seed, stream);
            Ok(Some(
                (0..n)
                    .map(|_| sampling::negative_half_normal(&mut rng, scale))
                    .collect(),
            ))
        }
    }
}

pub fn corr(
    input: &Path,
    output: &Path,
    delta: Option<f64>,
    max_iter: usize,
    x0: X0Policy,
    seed: Option<u64>,
    report: Option<&Path>,
) -> Result<()> {
    let v = read_vector(input)?;
    let n = vecl_dim(v.len())?;
    let gamma = GammaVector::new(v)?;
    let opts = SolveOptions {
        delta,
        max_iter,
        x0: draw_x0(x0, seed, 0, n)?,
    };
    let (c, rep) = corr_of_gamma(&gamma, &opts)?;
    let diag = jacobian_j(&gamma, &rep.x_star)?.diagnostics;
    write_matrix(output, c.matrix())?;
    let line = serde_json::to_string(&SolveReport {
        iterations: rep.iterations,
        final_residual: rep.final_residual(),
        nu_max: diag.nu_max,
        lambda_min: diag.lambda_min_c,
    })
    .expect("report serializes");
    match report {
        Some(p) => write_text(p, &format!("{line}\n"))?,
        None => eprintln!("{line}"),
    }
    Ok(())
}

pub fn cov_compress(input: &Path, output: &Path) -> Result<()> {
    let sigma = read_matrix(input)?;
    let cv = lib_cov_compress(&sigma)?;
    let mut flat = cv.log_sd.clone();
    flat.extend_from_slice(cv.gamma.values());
    write_vector(output, &flat)
}

/// Inverse of the triangular count n(n+1)/2.
fn full_dim(len: usize) -> Result<usize> {
    let n = ((((8 * len + 1) as f64).sqrt() - 1.0) / 2.0).round() as usize;
    if n == 0 || n * (n + 1) / 2 != len {
        return Err(Error::BadParameter(format!(
            "vector of length {len} is not n(n+1)/2 for any n >= 1"
        )));
    }
    Ok(n)
}

pub fn cov_expand(input: &Path, output: &Path, delta: Option<f64>, max_iter: usize) -> Result<()> {
    let v = read_vector(input)?;
    let n = full_dim(v.len())?;
    let cv = CovarianceVector {
        log_sd: v[..n].to_vec(),
        gamma: GammaVector::new(v[n..].to_vec())?,
    };
    let sigma = lib_cov_expand(
        &cv,
        &SolveOptions {
            delta,
            max_iter,
            x0: None,
        },
    )?;
    write_matrix(output, &sigma)
}

/// Three-decimal cell, with negative zero normalized away.
fn fmt3(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

pub fn table1(output: &Path) -> Result<()> {
    let mut out = String::from("rho,quantity,row,col,value\n");
    for &rho in &[0.0, 0.5, 0.9, 0.99] {
        let c = make_toeplitz(rho, 3)?;
        let om = omega_normal_iid(&c);
        let a_rho = omega_rho(&om);
        let a_phi = omega_phi(&om, &c)?;
        let a_gamma = omega_gamma(&om, &c)?;
        let r_gamma = acorr(&a_gamma)?;
        let blocks = [
            ("avar_rho", &a_rho),
            ("avar_phi", &a_phi),
            ("avar_gamma", &a_gamma),
            ("acorr_gamma", &r_gamma),
        ];
        for (name, m) in blocks {
            for i in 0..3 {
                for j in i..3 {
                    writeln!(
                        out,
                        "{rho},{name},{},{},{}",
                        i + 1,
                        j + 1,
                        fmt3(m.get(i, j))
                    )
                    .expect("write to string");
                }
            }
        }
    }
    write_text(output, &out)
}

fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let k = xs.len();
    if k == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / k as f64;
    if k == 1 {
        return (mean, 0.0);
    }
    let ss = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>();
    (mean, (ss / (k - 1) as f64).sqrt())
}

pub fn fig1(
    output: &Path,
    n_max: usize,
    rhos: &[f64],
    trials: usize,
    seed: u64,
    x0: X0Policy,
    max_iter: usize,
) -> Result<()> {
    if trials < 2 {
        return Err(Error::BadParameter(format!(
            "fig1 needs at least 2 trials, got {trials}"
        )));
    }
    if n_max < 3 {
        return Err(Error::BadParameter(format!(
            "fig1 needs --n-max >= 3, got {n_max}"
        )));
    }
    let mut rhos = rhos.to_vec();
    if rhos.is_empty() {
        return Err(Error::BadParameter("fig1 needs at least one rho".into()));
    }
    rhos.sort_by(|a, b| a.partial_cmp(b).expect("finite rho"));
    rhos.dedup();

    let mut out = String::from("n,rho,mean_iters,sd_iters,failed\n");
    for n in 3..=n_max {
        for (ri, &rho) in rhos.iter().enumerate() {
            let c = make_toeplitz(rho, n)?;
            let gamma = gamma_of_corr(&c)?;
            let mut iters = Vec::with_capacity(trials);
            let mut failed = 0usize;
            for t in 0..trials {
                // substream index is a pure function of the task, never of
                // execution order
                let stream =
                    ((n as u64) * rhos.len() as u64 + ri as u64) * trials as u64 + t as u64;
                let opts = SolveOptions {
                    delta: None,
                    max_iter,
                    x0: draw_x0(x0, Some(seed), stream, n)?,
                };
                match corr_of_gamma(&gamma, &opts) {
                    Ok((_, rep)) => iters.push(rep.iterations as f64),
                    Err(Error::NoConvergence { .. }) => failed += 1,
                    Err(e) => return Err(e),
                }
            }
            let (mean, sd) = mean_sd(&iters);
            writeln!(out, "{n},{rho},{mean},{sd},{failed}").expect("write to string");
        }
    }
    write_text(output, &out)
}

pub fn fig2(
    output: &Path,
    n: usize,
    count: usize,
    b: Option<f64>,
    seed: u64,
    max_iter: usize,
) -> Result<()> {
    if count == 0 {
        return Err(Error::BadParameter("fig2 needs --count >= 1".into()));
    }
    if n < 2 {
        return Err(Error::BadParameter(format!("fig2 needs --n >= 2, got {n}")));
    }
    let b = match b {
        Some(b) if b.is_finite() && b > 0.0 => b,
        Some(b) => {
            return Err(Error::BadParameter(format!(
                "--b must be positive, got {b}"
            )))
        }
        None => match n {
            5 => 1.2,
            10 => 0.8,
            25 => 0.5,
            _ => {
                return Err(Error::BadParameter(format!(
                    "no default range for n = {n}; pass --b (defaults exist for n = 5, 10, 25)"
                )))
            }
        },
    };
    let mut out = String::from("trial,iterations,converged,nu_max,c_l,lambda_min,gamma_max\n");
    for k in 0..count {
        let mut rng = sampling::substream(seed, k as u64);
        let gamma = sampling::random_gamma(&mut rng, n, b)?;
        let opts = SolveOptions {
            delta: None,
            max_iter,
            x0: None,
        };
        let (iterations, converged, x) = match corr_of_gamma(&gamma, &opts) {
            Ok((_, rep)) => (rep.iterations, 1, rep.x_star),
            Err(Error::NoConvergence { report }) => (report.iterations, 0, report.x_star),
            Err(e) => return Err(e),
        };
        let diag = jacobian_j(&gamma, &x)?.diagnostics;
        writeln!(
            out,
            "{k},{iterations},{converged},{},{},{},{}",
            diag.nu_max,
            diag.lipschitz_c,
            diag.lambda_min_c,
            gamma.max_abs()
        )
        .expect("write to string");
    }
    write_text(output, &out)
}
