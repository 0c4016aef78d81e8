//! Seeded sampling of points in the region used by the verification suites:
//! `‖X‖ ≤ 0.9`, `|w^k| ≤ 2`, `|φ̃| ≤ 2`, `ρ ∈ [0.5, 4]`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::PointBarN;

pub const X_RADIUS: f64 = 0.9;
pub const W_RADIUS: f64 = 2.0;
pub const PHI_BOUND: f64 = 2.0;
pub const RHO_RANGE: (f64, f64) = (0.5, 4.0);

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point of the closed real ball of radius `r` in ℝ^{2m}, as `m` complex numbers.
fn ball(rng: &mut impl Rng, m: usize, r: f64) -> Vec<Complex64> {
    if m == 0 {
        return Vec::new();
    }
    loop {
        let v: Vec<f64> = (0..2 * m).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let s: f64 = v.iter().map(|t| t * t).sum();
        if s <= 1.0 {
            return v.chunks(2).map(|c| Complex64::new(r * c[0], r * c[1])).collect();
        }
    }
}

/// A point with the given `ρ` and random `(X, w, φ̃)`.
pub fn fiber_point(rng: &mut impl Rng, n: usize, rho: f64) -> PointBarN {
    let x = ball(rng, n - 1, X_RADIUS);
    let w = (0..n).map(|_| ball(rng, 1, W_RADIUS)[0]).collect();
    let phi = rng.random_range(-PHI_BOUND..=PHI_BOUND);
    PointBarN { x, w, phi, rho }
}

pub fn point(rng: &mut impl Rng, n: usize) -> PointBarN {
    let rho = rng.random_range(RHO_RANGE.0..=RHO_RANGE.1);
    fiber_point(rng, n, rho)
}

pub fn points(seed: u64, n: usize, count: usize) -> Vec<PointBarN> {
    let mut r = rng(seed);
    (0..count).map(|_| point(&mut r, n)).collect()
}
