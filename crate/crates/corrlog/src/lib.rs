// Index-based loops are the house style here: the numerical kernels mirror
// their textbook/EISPACK forms, where explicit indices are clearer than
// iterator chains and often index several arrays in lockstep.
#![allow(clippy::needless_range_loop)]

//! Correlation matrices under the matrix-logarithm parametrization.
//!
//! A nonsingular correlation matrix C is encoded by the strictly lower
//! triangular part of its matrix logarithm, γ(C) = vecl(log C) ∈ R^{n(n−1)/2}.
//! The map is a bijection onto all of Euclidean space: any γ corresponds to
//! exactly one correlation matrix, recovered by a globally convergent
//! fixed-point iteration on the diagonal of log C. This crate provides
//!
//! * the transformation and its inverse ([`gamma_of_corr`], [`corr_of_gamma`]),
//!   plus the known-diagonal covariance variant and a full covariance
//!   vectorization ([`cov_compress`] / [`cov_expand`]);
//! * Fréchet derivatives of the matrix exponential and the Jacobians that
//!   govern the iteration's contraction rate and the parametrization's
//!   first-order behavior ([`frechet`]);
//! * asymptotic covariance matrices of sample correlations and their
//!   transforms under i.i.d. Gaussian sampling, in closed form and by Monte
//!   Carlo ([`avar`]);
//! * closed forms and checks for structured (equicorrelation, block,
//!   Toeplitz) matrices ([`structured`]);
//! * deterministic sampling utilities and simple CSV I/O for the
//!   command-line driver ([`sampling`], [`io`]).
//!
//! # Example
//!
//! ```
//! use corrlog::{corr_of_gamma, gamma_of_corr, GammaVector, SolveOptions};
//!
//! // n = 3: three free parameters, any values whatsoever
//! let gamma = GammaVector::new(vec![0.8, -0.3, 1.1]).unwrap();
//! let (c, report) = corr_of_gamma(&gamma, &SolveOptions::default()).unwrap();
//! assert!(report.converged);
//!
//! // round trip
//! let back = gamma_of_corr(&c).unwrap();
//! assert!(back.max_abs_diff(&gamma) < 1e-7);
//! ```

pub mod avar;
pub mod correlation;
pub mod eigen;
pub mod error;
pub mod frechet;
pub mod io;
pub mod matfun;
pub mod sampling;
pub mod structured;
pub mod sym;
pub mod transform;

pub use avar::{
    acorr, dc_diagonal, omega_gamma, omega_monte_carlo, omega_normal_iid, omega_phi, omega_rho,
    DcDiagonal, OmegaMatrix,
};
pub use correlation::{validate_correlation, CorrelationMatrix};
pub use eigen::{sym_eig, EigenDecomposition};
pub use error::{Error, Result, ValidationIssue};
pub use io::{
    format_matrix, format_vector, parse_matrix, parse_vector, read_matrix, read_vector,
    write_matrix, write_text, write_vector,
};
pub use matfun::{sym_exp, sym_log, sym_pow};
pub use structured::{
    check_bisymmetry, check_block_preservation, equi_gamma, equi_rho, make_block,
    make_equicorrelation, make_toeplitz, BlockPartition, BlockReport, SymmetryReport,
};
pub use sym::{unvecl, vecl, vecl_dim, vecl_len, vecl_pos, GammaVector, SymMatrix, VeclVector};
pub use transform::{
    corr_of_gamma, corr_of_gamma_target_diag, cov_compress, cov_expand, fisher, fisher_inv, g_step,
    gamma_of_corr, matrix_power, ConvergenceReport, CovarianceVector, SolveOptions,
};
