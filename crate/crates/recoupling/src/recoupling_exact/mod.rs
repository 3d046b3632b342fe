//! Oracle-grade evaluation from the finite sums.
//!
//! All selection rules use exact integer arithmetic on twice-spins. The
//! alternating sums are carried out over exact big integers and only the
//! square-root prefactors and final quotient are rounded, at the working
//! [`Precision`](crate::Precision), before a single rounding to `f64`.

mod haar;
mod threej;
mod wigner;

pub use haar::{haar_triple_integral, HaarRule};
pub use threej::{threej_exact, threej_ext};
pub use wigner::{
    character_closed_form, character_exact_sum, wigner_D_exact, wigner_small_d_exact, wigner_small_d_ext,
};

use num_bigint::BigUint;
use num_traits::One;

/// Binomial coefficient `C(n, k)`; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut c = BigUint::one();
    for i in 0..k {
        c = c * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    c
}

pub fn factorial(n: u64) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}
