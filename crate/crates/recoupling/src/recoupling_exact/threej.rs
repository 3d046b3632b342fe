use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use super::{binomial, factorial};
use crate::{ExtReal, HalfInt, Precision, Spin};

/// Integer data of a 3j symbol that passes every selection rule.
pub(crate) struct ThreeJData {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub total: u64,
    /// `j_i - m_i` and `j_i + m_i`.
    pub minus: [u64; 3],
    pub plus: [u64; 3],
}

/// Selection rules: projections admissible, `sum M = 0`, triangle, integer `J1 + J2 + J3`.
pub(crate) fn threej_data(j: [Spin; 3], m: [HalfInt; 3]) -> Option<ThreeJData> {
    if (0..3).any(|i| !j[i].admits(m[i])) {
        return None;
    }
    if m.iter().map(|x| x.twice()).sum::<i64>() != 0 {
        return None;
    }
    let t = j.map(|x| x.twice() as i64);
    let (a2, b2, c2) = (t[0] + t[1] - t[2], t[0] - t[1] + t[2], -t[0] + t[1] + t[2]);
    if a2 < 0 || b2 < 0 || c2 < 0 || (t[0] + t[1] + t[2]) % 2 != 0 {
        return None;
    }
    let minus = [0, 1, 2].map(|i| ((t[i] - m[i].twice()) / 2) as u64);
    let plus = [0, 1, 2].map(|i| ((t[i] + m[i].twice()) / 2) as u64);
    Some(ThreeJData {
        a: (a2 / 2) as u64,
        b: (b2 / 2) as u64,
        c: (c2 / 2) as u64,
        total: ((t[0] + t[1] + t[2]) / 2) as u64,
        minus,
        plus,
    })
}

/// Wigner 3j symbol to the requested precision (Condon–Shortley phase).
///
/// Racah's single sum in binomial form,
/// `(-1)^{j1-j2-m3} sqrt(prod (j+-m)! / ((J+1)! a! b! c!)) sum_k (-1)^k C(a,k) C(b, j1-m1-k) C(c, j2+m2-k)`,
/// where `a = j1+j2-j3`, `b = j1-j2+j3`, `c = -j1+j2+j3`, `J = j1+j2+j3`.
/// The sum is exact; only the square root and the final quotient are rounded.
pub fn threej_ext(j: [Spin; 3], m: [HalfInt; 3], prec: Precision) -> ExtReal {
    let Some(d) = threej_data(j, m) else {
        return ExtReal::zero();
    };
    let p = d.minus[0]; // j1 - m1
    let q = d.plus[1]; // j2 + m2
    let k_lo = [0i64, p as i64 - d.b as i64, q as i64 - d.c as i64].into_iter().max().unwrap() as u64;
    let k_hi = d.a.min(p).min(q);
    let mut sum = BigInt::zero();
    for k in k_lo..=k_hi {
        let term = BigInt::from(binomial(d.a, k) * binomial(d.b, p - k) * binomial(d.c, q - k));
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    if sum.is_zero() {
        return ExtReal::zero();
    }
    let num: BigUint = d.minus.iter().chain(d.plus.iter()).map(|&n| factorial(n)).product();
    let den = factorial(d.total + 1) * factorial(d.a) * factorial(d.b) * factorial(d.c);
    let root = ExtReal::from_ratio(&num, &den, prec).sqrt(prec).unwrap();
    let v = (&ExtReal::from_int(sum) * &root).round(prec);
    // j1 - j2 - m3 is an integer once the selection rules hold.
    let phase = (j[0].twice() as i64 - j[1].twice() as i64 - m[2].twice()) / 2;
    if phase.rem_euclid(2) == 1 {
        -v
    } else {
        v
    }
}

/// Wigner 3j symbol rounded to double. Selection-rule violations give 0.
pub fn threej_exact(j: [Spin; 3], m: [HalfInt; 3]) -> f64 {
    threej_ext(j, m, Precision::DEFAULT).to_f64()
}
