//! `corrlog` — transform correlation matrices to and from the
//! unconstrained γ = vecl(log C) parametrization, and reproduce the
//! iteration-count and asymptotic-covariance experiments.
//!
//! Exit codes: 0 success, 2 parse/validation problems, 3 non-convergence,
//! 4 refusal to materialize an oversized dense operator. Every flag can
//! also be set through the environment with the `CORRLOG_` prefix.

mod cmds;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use corrlog::Error;

#[derive(Parser)]
#[command(name = "corrlog", version, about = "Matrix-logarithm parametrization of correlation matrices", long_about = None)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

/// Starting point for the fixed-point iteration.
#[derive(Clone, Copy, Debug)]
pub enum X0Policy {
    /// x₀ = 0
    Zero,
    /// x₀ drawn once per solve from −|N(0, scale²)| per coordinate
    HalfNormal(f64),
}

impl FromStr for X0Policy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "zero" {
            return Ok(X0Policy::Zero);
        }
        if let Some(rest) = s.strip_prefix("half-normal:") {
            let scale: f64 = rest
                .parse()
                .map_err(|_| format!("half-normal scale is not a number: {rest:?}"))?;
            if !scale.is_finite() || scale <= 0.0 {
                return Err(format!("half-normal scale must be positive, got {scale}"));
            }
            return Ok(X0Policy::HalfNormal(scale));
        }
        Err(format!(
            "expected 'zero' or 'half-normal:<scale>', got {s:?}"
        ))
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute γ = vecl(log C) from a correlation matrix
    Gamma {
        /// Matrix CSV path, or a generator: equi:<rho> | toeplitz:<rho> | block:<spec-file>
        input: String,
        /// Output path for γ, one value per line
        output: PathBuf,
        /// Dimension n, required by the equi:/toeplitz: generators
        #[arg(long, env = "CORRLOG_N")]
        n: Option<usize>,
        /// Validation tolerance on |diag − 1|
        #[arg(long, env = "CORRLOG_TOL", default_value_t = 1e-7)]
        tol: f64,
    },
    /// Recover the correlation matrix C(γ) by fixed-point iteration
    Corr {
        /// γ vector file, one value per line (length must be n(n−1)/2)
        input: PathBuf,
        /// Output path for C as CSV
        output: PathBuf,
        /// Convergence threshold δ (default 1e−8·√n)
        #[arg(long, env = "CORRLOG_DELTA")]
        delta: Option<f64>,
        #[arg(long, env = "CORRLOG_MAX_ITER", default_value_t = 200)]
        max_iter: usize,
        /// Starting point: zero | half-normal:<scale>
        #[arg(long, env = "CORRLOG_X0", default_value = "zero")]
        x0: X0Policy,
        /// RNG seed; required whenever the x0 policy is stochastic
        #[arg(long, env = "CORRLOG_SEED")]
        seed: Option<u64>,
        /// Where to write the JSON-lines solve report (default: stderr)
        #[arg(long, env = "CORRLOG_REPORT")]
        report: Option<PathBuf>,
    },
    /// Move between a covariance matrix and its (log-sd, γ) vector
    Cov {
        #[command(subcommand)]
        action: CovCmd,
    },
    /// Asymptotic covariance tables for C_ij = ρ^{|i−j|}, n = 3,
    /// ρ ∈ {0, 0.5, 0.9, 0.99}: avar(ϱ̂), avar(φ̂), avar(γ̂), acorr(γ̂)
    Table1 {
        /// Output CSV: rho,quantity,row,col,value (3 decimals)
        output: PathBuf,
    },
    /// Iteration counts over Toeplitz matrices C_ij = ρ^{|i−j|} for
    /// n = 3..n-max, from random starts
    Fig1 {
        /// Output CSV: n,rho,mean_iters,sd_iters,failed
        output: PathBuf,
        #[arg(long = "n-max", env = "CORRLOG_N_MAX", default_value_t = 100)]
        n_max: usize,
        /// Comma-separated ρ values
        #[arg(long, env = "CORRLOG_RHOS", value_delimiter = ',', default_values_t = [0.5, 0.9, 0.99])]
        rhos: Vec<f64>,
        /// Random starts per (n, ρ); ≥ 2 (paper scale: 1000)
        #[arg(long, env = "CORRLOG_TRIALS", default_value_t = 100)]
        trials: usize,
        #[arg(long, env = "CORRLOG_SEED")]
        seed: u64,
        /// Starting-point policy for each trial
        #[arg(long, env = "CORRLOG_X0", default_value = "half-normal:10")]
        x0: X0Policy,
        #[arg(long, env = "CORRLOG_MAX_ITER", default_value_t = 500)]
        max_iter: usize,
    },
    /// Iteration count vs. contraction diagnostics over random γ drawn
    /// uniformly from [−b, b] per coordinate, solved from x₀ = 0
    Fig2 {
        /// Output CSV: trial,iterations,converged,nu_max,c_l,lambda_min,gamma_max
        output: PathBuf,
        /// Matrix dimension; 5, 10 and 25 carry default b values
        #[arg(long, env = "CORRLOG_N")]
        n: usize,
        /// Number of random γ draws (paper scale: 50000)
        #[arg(long, env = "CORRLOG_COUNT", default_value_t = 2000)]
        count: usize,
        /// Half-width of the uniform γ range (defaults: 1.2 at n=5,
        /// 0.8 at n=10, 0.5 at n=25; required for other n)
        #[arg(long, env = "CORRLOG_B")]
        b: Option<f64>,
        #[arg(long, env = "CORRLOG_SEED")]
        seed: u64,
        #[arg(long, env = "CORRLOG_MAX_ITER", default_value_t = 500)]
        max_iter: usize,
    },
}

#[derive(Subcommand)]
enum CovCmd {
    /// Covariance CSV → vector (n log-standard-deviations, then γ)
    Compress { input: PathBuf, output: PathBuf },
    /// Vector of length n(n+1)/2 → covariance CSV
    Expand {
        input: PathBuf,
        output: PathBuf,
        #[arg(long, env = "CORRLOG_DELTA")]
        delta: Option<f64>,
        #[arg(long, env = "CORRLOG_MAX_ITER", default_value_t = 200)]
        max_iter: usize,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NoConvergence { .. } | Error::EigenNoConvergence { .. } => 3,
        Error::SizeGuard { .. } => 4,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Gamma {
            input,
            output,
            n,
            tol,
        } => cmds::gamma(&input, &output, n, tol),
        Cmd::Corr {
            input,
            output,
            delta,
            max_iter,
            x0,
            seed,
            report,
        } => cmds::corr(
            &input,
            &output,
            delta,
            max_iter,
            x0,
            seed,
            report.as_deref(),
        ),
        Cmd::Cov { action } => match action {
            CovCmd::Compress { input, output } => cmds::cov_compress(&input, &output),
            CovCmd::Expand {
                input,
                output,
                delta,
                max_iter,
            } => cmds::cov_expand(&input, &output, delta, max_iter),
        },
        Cmd::Table1 { output } => cmds::table1(&output),
        Cmd::Fig1 {
            output,
            n_max,
            rhos,
            trials,
            seed,
            x0,
            max_iter,
        } => cmds::fig1(&output, n_max, &rhos, trials, seed, x0, max_iter),
        Cmd::Fig2 {
            output,
            n,
            count,
            b,
            seed,
            max_iter,
        } => cmds::fig2(&output, n, count, b, seed, max_iter),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("corrlog: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
