//! Deterministic sampling utilities.
//!
//! Everything stochastic in this crate flows through [`substream`]: a
//! ChaCha stream keyed by the user seed, with the stream counter set to a
//! task index (trial number, replication number). Substreams are mutually
//! independent and order-free, so a parallel schedule, a resumed run, or a
//! reordered loop can never change results — determinism is a function of
//! (seed, index) alone.
//!
//! Uniforms take the top 53 bits of the generator word; normals come from
//! Box–Muller. Both are pinned here rather than pulled from a distributions
//! crate so that byte-identical output is a property of this code base, not
//! of an upstream version.

use crate::error::Result;
use crate::sym::{vecl_len, GammaVector};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The generator for task `index` under `seed`.
pub fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform on [0, 1) with 53-bit resolution.
pub fn uniform01(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform on [−b, b].
pub fn uniform_symmetric(rng: &mut impl RngCore, b: f64) -> f64 {
    b * (2.0 * uniform01(rng) - 1.0)
}

/// Two independent standard normals (Box–Muller; u₁ is reflected into
/// (0, 1] so the logarithm is always finite).
pub fn standard_normal_pair(rng: &mut impl RngCore) -> (f64, f64) {
    let u1 = 1.0 - uniform01(rng);
    let u2 = uniform01(rng);
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = std::f64::consts::TAU * u2;
    (r * theta.cos(), r * theta.sin())
}

/// Fill a slice with standard normals, consuming the generator in a fixed
/// left-to-right order (the spare of a trailing odd pair is discarded).
pub fn fill_standard_normals(rng: &mut impl RngCore, out: &mut [f64]) {
    let mut chunks = out.chunks_exact_mut(2);
    for pair in &mut chunks {
        let (a, b) = standard_normal_pair(rng);
        pair[0] = a;
        pair[1] = b;
    }
    if let [last] = chunks.into_remainder() {
        *last = standard_normal_pair(rng).0;
    }
}

/// −|σZ| with Z standard normal: a draw from the negative half-normal.
pub fn negative_half_normal(rng: &mut impl RngCore, scale: f64) -> f64 {
    -(scale * standard_normal_pair(rng).0).abs()
}

/// A γ vector for dimension n with independent U[−b, b] entries.
pub fn random_gamma(rng: &mut impl RngCore, n: usize, b: f64) -> Result<GammaVector> {
    let v = (0..vecl_len(n))
        .map(|_| uniform_symmetric(rng, b))
        .collect();
    GammaVector::new(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn substreams_are_reproducible_and_distinct() {
        let a: Vec<u64> = {
            let mut r = substream(7, 3);
            (0..5).map(|_| r.next_u64()).collect()
        };
        let b: Vec<u64> = {
            let mut r = substream(7, 3);
            (0..5).map(|_| r.next_u64()).collect()
        };
        let c: Vec<u64> = {
            let mut r = substream(7, 4);
            (0..5).map(|_| r.next_u64()).collect()
        };
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn uniforms_live_in_the_unit_interval() {
        let mut r = substream(1, 0);
        let mut sum = 0.0;
        for _ in 0..10_000 {
            let u = uniform01(&mut r);
            assert!((0.0..1.0).contains(&u));
            sum += u;
        }
        assert!((sum / 10_000.0 - 0.5).abs() < 0.02);
    }

    #[test]
    fn normals_have_sane_moments() {
        let mut r = substream(2, 0);
        let mut buf = vec![0.0; 10_001]; // odd length exercises the remainder
        fill_standard_normals(&mut r, &mut buf);
        let m = buf.iter().sum::<f64>() / buf.len() as f64;
        let v = buf.iter().map(|z| (z - m) * (z - m)).sum::<f64>() / buf.len() as f64;
        assert!(m.abs() < 0.05, "mean {m}");
        assert!((v - 1.0).abs() < 0.05, "variance {v}");
        assert!(buf.iter().all(|z| z.is_finite()));
    }

    #[test]
    fn half_normal_is_nonpositive_and_scales() {
        let mut r = substream(3, 0);
        for _ in 0..1000 {
            let x = negative_half_normal(&mut r, 10.0);
            assert!(x <= 0.0);
            assert!(x > -100.0); // 10 sigma
        }
    }

    #[test]
    fn random_gamma_respects_bounds_and_length() {
        let mut r = substream(4, 9);
        let g = random_gamma(&mut r, 6, 0.7).unwrap();
        assert_eq!(g.len(), 15);
        assert_eq!(g.n(), 6);
        assert!(g.values().iter().all(|v| v.abs() <= 0.7));

        let empty = random_gamma(&mut r, 1, 0.5).unwrap();
        assert_eq!(empty.len(), 0);
    }
}
