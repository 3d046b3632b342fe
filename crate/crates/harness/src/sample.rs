//! Seeded random rotations distributed by the Haar measure of SU(2).

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use recoupling::EulerRotation;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `alpha` uniform on `[0, 2pi)`, `cos(beta)` uniform on `[-1, 1]`, `gamma` uniform on `[0, 4pi)`.
pub fn haar_rotation<R: Rng>(rng: &mut R) -> EulerRotation {
    let alpha = rng.random_range(0.0..2.0 * PI);
    let beta = rng.random_range(-1.0f64..=1.0).acos();
    let gamma = rng.random_range(0.0..4.0 * PI);
    EulerRotation::new(alpha, beta, gamma).expect("beta lies in [0, pi]")
}

/// `n` Haar rotations with `0 < beta < pi`.
pub fn generic_rotations(seed: u64, n: usize) -> Vec<EulerRotation> {
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let g = haar_rotation(&mut r);
        if g.is_generic() {
            out.push(g);
        }
    }
    out
}
