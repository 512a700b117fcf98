#![allow(clippy::needless_range_loop)]

//! Acceptance gate: one test per numbered criterion, each printing a single
//! `criterion NN: PASS/FAIL` line (visible with `--nocapture`; cargo also
//! replays the captured stdout of any failing test).
//!
//! Every tolerance is pinned here. Criteria 3, 4 (simulation clause) and 11
//! (second clause) are asserted exactly as stated and are expected to fail;
//! each failure message carries the measured deviation and the analysis of
//! why the stated bound cannot be met. Nothing is loosened to force green.

use std::path::{Path, PathBuf};
use std::process::Command;

use corrlog::frechet::{drho_dgamma, jacobian_j};
use corrlog::sampling::{negative_half_normal, random_gamma, substream, uniform01};
use corrlog::{
    acorr, corr_of_gamma, corr_of_gamma_target_diag, equi_gamma, equi_rho, fisher, gamma_of_corr,
    make_equicorrelation, make_toeplitz, omega_gamma, omega_monte_carlo, omega_normal_iid,
    omega_phi, omega_rho, sym_eig, sym_log, unvecl, validate_correlation, vecl, vecl_len,
    CorrelationMatrix, GammaVector, SolveOptions, SymMatrix,
};

const BIN: &str = env!("CARGO_BIN_EXE_corrlog");

fn workdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("corrlog-acceptance-{name}"));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run_bin(dir: &Path, args: &[&str]) {
    let out = Command::new(BIN)
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs");
    assert!(
        out.status.success(),
        "corrlog {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

fn draw_gamma(seed: u64, stream: u64, n: usize, b: f64) -> GammaVector {
    random_gamma(&mut substream(seed, stream), n, b).unwrap()
}

fn solve(gamma: &GammaVector, max_iter: usize) -> (CorrelationMatrix, corrlog::ConvergenceReport) {
    corr_of_gamma(
        gamma,
        &SolveOptions {
            delta: None,
            max_iter,
            x0: None,
        },
    )
    .unwrap()
}

// ---------------------------------------------------------------- criterion 1

#[test]
fn criterion_01_bijection_round_trip() {
    let started = std::time::Instant::now();
    let mut worst_gamma = 0.0f64;
    let mut worst_diag = 0.0f64;
    let mut min_lambda = f64::INFINITY;
    for (si, &n) in [2usize, 5, 10, 25, 50].iter().enumerate() {
        for k in 0..200u64 {
            let gamma = draw_gamma(20260815, (si as u64) * 1000 + k, n, 1.0);
            let (c, _) = solve(&gamma, 1000);
            let back = gamma_of_corr(&c).unwrap();
            worst_gamma = worst_gamma.max(back.max_abs_diff(&gamma));
            for i in 0..n {
                worst_diag = worst_diag.max((c.get(i, i) - 1.0).abs());
            }
            min_lambda = min_lambda.min(c.lambda_min());
        }
    }
    let secs = started.elapsed().as_secs_f64();
    assert!(
        worst_gamma <= 1e-7,
        "criterion 01: FAIL — round-trip gamma deviation {worst_gamma:.3e} > 1e-7"
    );
    assert!(
        worst_diag <= 1e-7,
        "criterion 01: FAIL — recovered diagonal off unity by {worst_diag:.3e} > 1e-7"
    );
    assert!(
        min_lambda > 0.0,
        "criterion 01: FAIL — non-positive-definite recovery"
    );
    assert!(
        secs < 30.0,
        "criterion 01: FAIL — took {secs:.1} s, budget 30 s"
    );
    println!(
        "criterion 01: PASS — 1000 round trips, max gamma dev {worst_gamma:.2e}, \
         max diag dev {worst_diag:.2e}, min eigenvalue {min_lambda:.2e}, {secs:.1} s"
    );
}

// ---------------------------------------------------------------- criterion 2

#[test]
fn criterion_02_fisher_reduction_at_n2() {
    let mut grid = vec![0.0];
    for k in 1..=9 {
        grid.push(k as f64 / 10.0);
        grid.push(-(k as f64) / 10.0);
    }
    grid.push(0.99);
    grid.push(-0.99);
    let mut worst = 0.0f64;
    for &rho in &grid {
        let c = validate_correlation(
            &SymMatrix::from_rows(2, vec![1.0, rho, rho, 1.0]).unwrap(),
            1e-12,
        )
        .unwrap();
        let g = gamma_of_corr(&c).unwrap();
        worst = worst.max((g.get(0) - fisher(rho).unwrap()).abs());
    }
    assert!(
        worst <= 1e-12,
        "criterion 02: FAIL — deviation {worst:.3e} > 1e-12"
    );
    println!(
        "criterion 02: PASS — max |gamma - atanh(rho)| = {worst:.2e} over {} points",
        grid.len()
    );
}

// ---------------------------------------------------------------- criterion 3

#[test]
fn criterion_03_block_display_log_matches_printed_entries() {
    let c = corrlog::make_block(
        &corrlog::BlockPartition::new(
            vec![3, 3],
            SymMatrix::from_rows(2, vec![0.4, 0.2, 0.2, 0.6]).unwrap(),
        )
        .unwrap(),
    )
    .unwrap();
    let g = sym_log(c.matrix()).unwrap();
    // printed values: diagonals of the two blocks, within-block off-diagonals,
    // and the between-block constant
    let checks = [
        ("-.16 (first-block diagonal)", g.get(0, 0), -0.16),
        (".349 (first-block off-diagonal)", g.get(1, 0), 0.349),
        (".104 (between-block)", g.get(3, 0), 0.104),
        ("-.36 (second-block diagonal)", g.get(3, 3), -0.36),
        (".553 (second-block off-diagonal)", g.get(4, 3), 0.553),
    ];
    let mut failures = Vec::new();
    for (label, got, printed) in checks {
        let dev = (got - printed).abs();
        let verdict = if dev <= 5e-4 { "ok" } else { "EXCEEDS" };
        println!(
            "criterion 03: {label}: computed {got:.6}, printed {printed}, dev {dev:.2e} {verdict}"
        );
        if dev > 5e-4 {
            failures.push(format!(
                "{label}: computed {got:.6} vs printed {printed} (dev {dev:.2e})"
            ));
        }
    }
    assert!(
        failures.is_empty(),
        "criterion 03: FAIL — {}. The three off-diagonal constants carry three decimals and \
         match within 4.6e-4; the two diagonal constants are printed with only two decimals, \
         so their rounding width (5e-3) exceeds the stated 5e-4 tolerance. The computed \
         six-decimal values -0.161578 and -0.362855 round to exactly the printed -.16 and \
         -.36 at two decimals; the gap is display precision, not a computation error.",
        failures.join("; ")
    );
    println!("criterion 03: PASS");
}

// ---------------------------------------------------------------- criterion 4

/// Expand the four distinct printed constants (first diagonal, adjacent
/// off-diagonal, middle diagonal, corner off-diagonal) of a 3×3 symmetric
/// Toeplitz-patterned table block into the full matrix.
fn pattern3(d1: f64, o12: f64, d2: f64, o13: f64) -> SymMatrix {
    SymMatrix::from_rows(3, vec![d1, o12, o13, o12, d2, o12, o13, o12, d1]).unwrap()
}

#[test]
fn criterion_04_table1_closed_form_and_monte_carlo() {
    // clause A: closed-form avar/acorr vs the printed reference constants
    let cases: [(f64, [SymMatrix; 4]); 4] = [
        (
            0.0,
            [
                SymMatrix::identity(3),
                SymMatrix::identity(3),
                SymMatrix::identity(3),
                SymMatrix::identity(3),
            ],
        ),
        (
            0.5,
            [
                pattern3(0.562, 0.316, 0.879, 0.070),
                pattern3(1.000, 0.450, 1.000, 0.125),
                pattern3(0.966, 0.018, 0.962, 0.021),
                pattern3(1.000, 0.018, 1.000, 0.021),
            ],
        ),
        (
            0.9,
            [
                pattern3(0.036, 0.046, 0.118, 0.015),
                pattern3(1.000, 0.698, 1.000, 0.405),
                pattern3(0.817, 0.081, 0.860, 0.093),
                pattern3(1.000, 0.097, 1.000, 0.114),
            ],
        ),
        (
            0.99,
            [
                pattern3(0.0004, 0.0006, 0.0016, 0.0002),
                pattern3(1.000, 0.745, 1.000, 0.490),
                pattern3(0.756, 0.106, 0.793, 0.134),
                pattern3(1.000, 0.137, 1.000, 0.178),
            ],
        ),
    ];
    let mut worst = 0.0f64;
    for (rho, printed) in &cases {
        let c = make_toeplitz(*rho, 3).unwrap();
        let om = omega_normal_iid(&c);
        let computed = [
            omega_rho(&om),
            omega_phi(&om, &c).unwrap(),
            omega_gamma(&om, &c).unwrap(),
            acorr(&omega_gamma(&om, &c).unwrap()).unwrap(),
        ];
        for (name, (got, want)) in ["avar(rho)", "avar(phi)", "avar(gamma)", "acorr(gamma)"]
            .iter()
            .zip(computed.iter().zip(printed.iter()))
        {
            let dev = got.max_abs_diff(want);
            worst = worst.max(dev);
            assert!(
                dev <= 1e-3,
                "criterion 04: FAIL — {name} at rho={rho}: deviation {dev:.2e} > 1e-3"
            );
        }
    }
    println!(
        "criterion 04: closed form vs printed reference constants: max dev {worst:.2e} <= 1e-3 ok"
    );

    // clause B: simulated Omega vs closed form at T=50000, reps=200
    let mut worst_mc = 0.0f64;
    let mut at = 0.0;
    for (k, rho) in [0.0, 0.5, 0.9, 0.99].iter().enumerate() {
        let c = make_toeplitz(*rho, 3).unwrap();
        let exact = omega_normal_iid(&c);
        let mc = omega_monte_carlo(&c, 50_000, 200, 4001 + k as u64).unwrap();
        let dim = exact.dim();
        for a in 0..dim {
            for b in 0..dim {
                let dev = (mc.get(a, b) - exact.get(a, b)).abs();
                if dev > worst_mc {
                    worst_mc = dev;
                    at = *rho;
                }
            }
        }
    }
    println!("criterion 04: simulation vs closed form: max dev {worst_mc:.3} (at rho={at})");
    assert!(
        worst_mc <= 2e-2,
        "criterion 04: FAIL — simulated Omega deviates from the closed form by {worst_mc:.3} \
         (worst at rho={at}), stated tolerance 2e-2. This clause cannot hold at the stated \
         scale: a covariance entry estimated from 200 independent replications has sampling \
         error ~ entry·sqrt(2/200) ≈ 10% of the entry, i.e. ~0.1 for the unit-size entries at \
         rho=0, five times the stated tolerance regardless of T. Meeting 2e-2 with headroom \
         across all entries would need on the order of 20000 replications. The closed form \
         itself is validated independently by clause A and by unit tests at looser, \
         SE-consistent tolerances."
    );
    println!("criterion 04: PASS");
}

// ---------------------------------------------------------------- criterion 5

#[test]
fn criterion_05_equicorrelation_closed_form() {
    let mut worst_gamma = 0.0f64;
    let mut worst_rho = 0.0f64;
    let mut pairs = 0;
    for &n in &[3usize, 10, 50] {
        for &rho in &[-0.3, 0.0, 0.3, 0.7, 0.95] {
            if rho <= -1.0 / (n as f64 - 1.0) {
                continue; // not a correlation matrix at this n
            }
            pairs += 1;
            let g = equi_gamma(rho, n).unwrap();
            let c = make_equicorrelation(rho, n).unwrap();
            let direct = gamma_of_corr(&c).unwrap();
            for p in 0..direct.len() {
                worst_gamma = worst_gamma.max((direct.get(p) - g).abs());
            }
            worst_rho = worst_rho.max((equi_rho(g, n) - rho).abs());
        }
    }
    assert!(
        worst_gamma <= 1e-12,
        "criterion 05: FAIL — closed form vs direct log deviation {worst_gamma:.3e} > 1e-12"
    );
    assert!(
        worst_rho <= 1e-13,
        "criterion 05: FAIL — inverse deviation {worst_rho:.3e} > 1e-13"
    );
    println!(
        "criterion 05: PASS — {pairs} valid (rho, n) pairs (grid restricted to rho > -1/(n-1)); \
         gamma dev {worst_gamma:.2e}, inverse dev {worst_rho:.2e}"
    );
}

// ---------------------------------------------------------------- criterion 6

#[test]
fn criterion_06_rho_gamma_jacobian_matches_finite_differences() {
    let n = 4;
    let d = vecl_len(n);
    let h = 1e-4;
    let opts = SolveOptions {
        delta: Some(1e-12),
        max_iter: 500,
        x0: None,
    };
    let mut worst = 0.0f64;
    for k in 0..20u64 {
        let gamma = draw_gamma(6001, k, n, 1.0);
        let (c, _) = corr_of_gamma(&gamma, &opts).unwrap();
        let analytic = drho_dgamma(&c).unwrap();
        for p in 0..d {
            let mut up = gamma.values().to_vec();
            let mut dn = up.clone();
            up[p] += h;
            dn[p] -= h;
            let (cu, _) = corr_of_gamma(&GammaVector::new(up).unwrap(), &opts).unwrap();
            let (cd, _) = corr_of_gamma(&GammaVector::new(dn).unwrap(), &opts).unwrap();
            let ru = vecl(cu.matrix());
            let rd = vecl(cd.matrix());
            for r in 0..d {
                let fd = (ru.get(r) - rd.get(r)) / (2.0 * h);
                let an = analytic[r * d + p];
                let dev = (fd - an).abs() / an.abs().max(1.0);
                worst = worst.max(dev);
            }
        }
    }
    assert!(
        worst <= 1e-5,
        "criterion 06: FAIL — finite-difference deviation {worst:.3e} > 1e-5 relative"
    );
    println!("criterion 06: PASS — 20 instances, max relative deviation {worst:.2e}");
}

// ---------------------------------------------------------------- criterion 7

#[test]
fn criterion_07_contraction_spectrum_at_the_fixed_point() {
    let n = 5;
    let mut nu_lo = f64::INFINITY;
    let mut nu_hi = f64::NEG_INFINITY;
    let mut worst_rowsum = 0.0f64;
    let mut worst_pair = 0.0f64;
    for k in 0..100u64 {
        let gamma = draw_gamma(7001, k, n, 1.0);
        let (_, report) = solve(&gamma, 500);
        // jacobian_j builds J-tilde both from its definition and from the
        // rank-one expansion, asserting agreement at 1e-10 internally; a
        // successful return is that check.
        let analysis = jacobian_j(&gamma, &report.x_star).unwrap();
        nu_lo = nu_lo.min(analysis.nu[0]);
        nu_hi = nu_hi.max(*analysis.nu.last().unwrap());

        for i in 0..n {
            let row: f64 = (0..n).map(|j| analysis.j[i * n + j]).sum();
            worst_rowsum = worst_rowsum.max(row.abs());
        }

        // spec(J) == spec(J-tilde): push each eigenpair of J-tilde through
        // the similarity transform and measure the eigen-residual under J.
        let dec = sym_eig(&unvecl(&gamma, &report.x_star).unwrap()).unwrap();
        let delta = dec.function_diagonal(f64::exp);
        let jt = sym_eig(&analysis.j_tilde).unwrap();
        for e in 0..n {
            let nu = jt.lambda()[e];
            let mut v: Vec<f64> = (0..n).map(|i| jt.q(i, e) / delta[i].sqrt()).collect();
            let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            v.iter_mut().for_each(|x| *x /= scale);
            for i in 0..n {
                let jv: f64 = (0..n).map(|j| analysis.j[i * n + j] * v[j]).sum();
                worst_pair = worst_pair.max((jv - nu * v[i]).abs());
            }
        }
    }
    assert!(
        nu_lo >= -1e-10 && nu_hi <= 1.0 - 1e-8,
        "criterion 07: FAIL — spectrum [{nu_lo:.3e}, {nu_hi}] escapes [-1e-10, 1-1e-8]"
    );
    assert!(
        worst_rowsum <= 1e-10,
        "criterion 07: FAIL — J row sums reach {worst_rowsum:.3e} > 1e-10"
    );
    assert!(
        worst_pair <= 1e-9,
        "criterion 07: FAIL — spectra of J and J-tilde differ: eigen-residual {worst_pair:.3e} > 1e-9"
    );
    println!(
        "criterion 07: PASS — 100 instances: spectrum within [{nu_lo:.2e}, {nu_hi:.4}], \
         dual construction agreed at 1e-10, row sums <= {worst_rowsum:.2e}, \
         similarity residual <= {worst_pair:.2e}"
    );
}

// ---------------------------------------------------------------- criterion 8

#[test]
fn criterion_08_log_correlation_diagonal_is_nonpositive() {
    let mut worst = f64::NEG_INFINITY;
    for (si, &n) in [3usize, 10, 25].iter().enumerate() {
        for k in 0..100u64 {
            let gamma = draw_gamma(8001, (si as u64) * 1000 + k, n, 1.0);
            let (c, _) = solve(&gamma, 500);
            let g = sym_log(c.matrix()).unwrap();
            for i in 0..n {
                worst = worst.max(g.get(i, i));
            }
        }
    }
    assert!(
        worst <= 1e-12,
        "criterion 08: FAIL — diag(log C) reaches {worst:.3e} > 1e-12"
    );
    println!("criterion 08: PASS — 300 matrices, max diagonal of log C = {worst:.2e}");
}

// ---------------------------------------------------------------- criterion 9

#[test]
fn criterion_09_iteration_counts_scale_with_log_n() {
    // R-squared clause, through the shipped fig1 command at the reference
    // scale of 1000 random starts per dimension. This is the long pole of
    // the whole suite (~20 minutes of eigendecompositions): the fitted R^2
    // sits near 0.91 and desk-scale replications deflate it below the 0.9
    // threshold through start-noise, so the full scale is what the clause
    // actually pins down.
    let dir = workdir("criterion9");
    run_bin(
        &dir,
        &[
            "fig1", "f.csv", "--n-max", "100", "--rhos", "0.5", "--trials", "1000", "--seed",
            "314159",
        ],
    );
    let text = std::fs::read_to_string(dir.join("f.csv")).unwrap();
    let (mut sx, mut sy, mut sxx, mut sxy, mut syy, mut m) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    for line in text.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let x = f[0].parse::<f64>().unwrap().ln();
        let y: f64 = f[2].parse().unwrap();
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
        m += 1.0;
    }
    let cxx = sxx - sx * sx / m;
    let cxy = sxy - sx * sy / m;
    let cyy = syy - sy * sy / m;
    let r2 = cxy * cxy / (cxx * cyy);
    println!("criterion 09: OLS of mean iterations on log n over n=3..100: R^2 = {r2:.6}");

    // ratio clause at n=100 with the same start design
    let mut means = [0.0f64; 2];
    for (ri, &rho) in [0.5f64, 0.99].iter().enumerate() {
        let gamma = gamma_of_corr(&make_toeplitz(rho, 100).unwrap()).unwrap();
        let mut total = 0usize;
        for t in 0..100u64 {
            let mut rng = substream(314159, 1_000_000 + (ri as u64) * 100 + t);
            let x0: Vec<f64> = (0..100)
                .map(|_| negative_half_normal(&mut rng, 10.0))
                .collect();
            let (_, rep) = corr_of_gamma(
                &gamma,
                &SolveOptions {
                    delta: None,
                    max_iter: 500,
                    x0: Some(x0),
                },
            )
            .unwrap();
            total += rep.iterations;
        }
        means[ri] = total as f64 / 100.0;
    }
    let ratio = means[1] / means[0];
    println!(
        "criterion 09: iterations at n=100: rho=0.5 mean {:.1}, rho=0.99 mean {:.1}, ratio {ratio:.2}",
        means[0], means[1]
    );
    assert!(
        (3.0..=8.0).contains(&ratio),
        "criterion 09: FAIL — iteration ratio {ratio:.2} outside [3, 8]"
    );
    assert!(
        r2 > 0.9,
        "criterion 09: FAIL — R^2 = {r2:.4} is not > 0.9 (ratio clause: {ratio:.2} in [3, 8]). \
         Pinned replication: 1000 starts per dimension, seed 314159; this measured 0.910703 \
         when frozen. Start-noise deflates R^2 at smaller scales (≈0.898 at 100 starts), so \
         any regression here points at the solver or the start distribution, not at scale."
    );
    println!("criterion 09: PASS — expected R^2 0.910703 at the pinned seed");
}

// --------------------------------------------------------------- criterion 10

#[test]
fn criterion_10_iterations_track_the_contraction_constant() {
    let dir = workdir("criterion10");
    run_bin(
        &dir,
        &[
            "fig2", "f.csv", "--n", "10", "--count", "2000", "--seed", "20260815",
        ],
    );
    let text = std::fs::read_to_string(dir.join("f.csv")).unwrap();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for line in text.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f[2], "1", "all instances should converge");
        ys.push(f[1].parse::<f64>().unwrap()); // iterations
        xs.push(f[4].parse::<f64>().unwrap()); // c_l = -1/log nu_max
    }
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let cxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let cyy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let cxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let corr = cxy / (cxx * cyy).sqrt();
    assert!(
        corr > 0.9,
        "criterion 10: FAIL — corr(iterations, -1/log nu_max) = {corr:.4} is not > 0.9"
    );
    println!(
        "criterion 10: PASS — correlation {corr:.4} over {} instances at n=10",
        xs.len()
    );
}

// --------------------------------------------------------------- criterion 11

#[test]
fn criterion_11_known_diagonal_recovery() {
    let n = 5;
    let opts = SolveOptions::default();
    let mut worst_diag = 0.0f64;
    let mut worst_gamma = 0.0f64;
    let mut worst_corr = 0.0f64;
    for k in 0..50u64 {
        let mut rng = substream(11001, k);
        let gamma = random_gamma(&mut rng, n, 1.0).unwrap();
        let v: Vec<f64> = (0..n).map(|_| 0.1 + 9.9 * uniform01(&mut rng)).collect();
        let vmax = v.iter().fold(0.0f64, |m, &x| m.max(x));
        let (sigma, _) = corr_of_gamma_target_diag(&gamma, &v, &opts).unwrap();

        for i in 0..n {
            worst_diag = worst_diag.max((sigma.get(i, i) - v[i]).abs() / vmax);
        }
        // the defining property: vecl(log Sigma) = gamma
        worst_gamma = worst_gamma.max(vecl(&sym_log(&sigma).unwrap()).max_abs_diff(&gamma));

        let (c, _) = corr_of_gamma(&gamma, &opts).unwrap();
        for i in 0..n {
            for j in 0..i {
                let r = sigma.get(i, j) / (sigma.get(i, i) * sigma.get(j, j)).sqrt();
                worst_corr = worst_corr.max((r - c.get(i, j)).abs());
            }
        }
    }
    assert!(
        worst_diag <= 1e-6,
        "criterion 11: FAIL — |diag(Sigma) - v| reaches {worst_diag:.3e} x max(v) > 1e-6"
    );
    println!(
        "criterion 11: diagonal recovered to {worst_diag:.2e} x max(v); \
         vecl(log Sigma) = gamma to {worst_gamma:.2e}"
    );
    assert!(
        worst_corr <= 1e-7,
        "criterion 11: FAIL — correlation of Sigma differs from corr_of_gamma(gamma) by \
         {worst_corr:.3e} > 1e-7. This equality does not hold for the stated construction: \
         Sigma is the unique SPD matrix with vecl(log Sigma) = gamma and diag(Sigma) = v \
         (both verified above), but rescaling Sigma to unit diagonal changes the \
         off-diagonal entries of its matrix logarithm, so corr(Sigma) solves the unit-diagonal \
         problem for a different gamma whenever v is not constant. The deviation is \
         structural, not numerical — order 1e-2 for nearly-constant v and order one for \
         diagonals spanning [0.1, 10] as drawn here; the two matrices coincide exactly when \
         v is constant (covered by a library test at 1e-10)."
    );
    println!("criterion 11: PASS");
}

// --------------------------------------------------------------- criterion 12

#[test]
fn criterion_12_seeded_subcommands_are_byte_deterministic() {
    let dir = workdir("criterion12");
    std::fs::write(dir.join("g.txt"), "0.9\n-0.4\n0.7\n").unwrap();
    let jobs: [&[&str]; 3] = [
        &[
            "corr",
            "g.txt",
            "OUT",
            "--x0",
            "half-normal:10",
            "--seed",
            "9",
        ],
        &[
            "fig1", "OUT", "--n-max", "8", "--trials", "5", "--seed", "9",
        ],
        &["fig2", "OUT", "--n", "5", "--count", "10", "--seed", "9"],
    ];
    for job in jobs {
        let mut runs = Vec::new();
        for r in 0..2 {
            let name = format!("out-{r}.csv");
            let args: Vec<&str> = job
                .iter()
                .map(|a| if *a == "OUT" { name.as_str() } else { a })
                .collect();
            run_bin(&dir, &args);
            runs.push(std::fs::read(dir.join(&name)).unwrap());
        }
        assert!(
            runs[0] == runs[1],
            "criterion 12: FAIL — {} output differs between identically-seeded runs",
            job[0]
        );
    }
    println!("criterion 12: PASS — corr/fig1/fig2 reruns byte-identical under a fixed seed");
}
