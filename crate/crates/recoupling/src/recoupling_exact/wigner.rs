use core::f64::consts::PI;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use super::binomial;
use crate::{Complex, Error, EulerRotation, ExtReal, HalfInt, MagneticPair, Precision, Spin};

/// `X = cos^2(beta/2)` and `Y = sin^2(beta/2)` as dyadic rationals with `X + Y = 1` exactly.
///
/// The smaller of the two is rounded from double precision and the other is
/// its exact complement, so both keep full relative accuracy. Exact
/// complementarity matters: the alternating sum is a polynomial whose terms
/// only cancel on the circle `X + Y = 1`.
pub(crate) fn half_angle_squares(beta: f64) -> (ExtReal, ExtReal) {
    let c = libm::cos(0.5 * beta);
    let s = libm::sin(0.5 * beta);
    let one = ExtReal::one();
    if c >= s {
        let y = ExtReal::from_f64(s * s).unwrap();
        (&one - &y, y)
    } else {
        let x = ExtReal::from_f64(c * c).unwrap();
        let y = &one - &x;
        (x, y)
    }
}

/// `d^J_{M M'}(beta)` to the requested precision.
pub fn wigner_small_d_ext(
    j: Spin,
    m: HalfInt,
    mp: HalfInt,
    beta: f64,
    prec: Precision,
) -> Result<ExtReal, Error> {
    let pair = MagneticPair::new(j, m, mp)?;
    if !(0.0..=PI).contains(&beta) {
        return Err(Error::DomainError);
    }
    let (x, y) = half_angle_squares(beta);
    Ok(small_d_from_squares(&pair, &x, &y, prec))
}

pub(crate) fn small_d_from_squares(
    pair: &MagneticPair,
    x: &ExtReal,
    y: &ExtReal,
    prec: Precision,
) -> ExtReal {
    let (jpm, jmm, jpmp, jmmp) = pair.offsets();
    let (jpm, jmm, jpmp, jmmp) = (jpm as i64, jmm as i64, jpmp as i64, jmmp as i64);
    let t_min = (jpm - jpmp).max(0);
    let t_max = jpm.min(jmmp);
    // xi^{a(t)} eta^{b(t)} with a(t) = 2J + M - M' - 2t and b(t) = 2t - M + M'.
    let a_low = (jpm + jmmp - 2 * t_max) as u64;
    let b_low = (2 * t_min - (jpm - jpmp)) as u64;
    let n = (t_max - t_min) as u64;

    // Write X = xm / 2^k and Y = ym / 2^k with a common k.
    let (xm, xe) = x.parts();
    let (ym, ye) = y.parts();
    let k = [0, -xe, -ye].into_iter().max().unwrap();
    let xm: BigInt = xm << (k + xe) as u64;
    let ym: BigInt = ym << (k + ye) as u64;

    // Homogeneous Horner pass over sum_t (-1)^t C(J+M, t) C(J-M, J-M'-t) X^{t_max-t} Y^{t-t_min}.
    let mut c1 = binomial(jpm as u64, t_min as u64);
    let mut r = (jmmp - t_min) as u64;
    let mut c2 = binomial(jmm as u64, r);
    let mut acc = BigInt::zero();
    let mut ypow = BigInt::one();
    for i in 0..=n {
        let t = t_min as u64 + i;
        let coeff = BigInt::from(&c1 * &c2);
        if i > 0 {
            ypow *= &ym;
            acc *= &xm;
        }
        if t % 2 == 0 {
            acc += coeff * &ypow;
        } else {
            acc -= coeff * &ypow;
        }
        if i < n {
            c1 = c1 * BigUint::from(jpm as u64 - t) / BigUint::from(t + 1);
            c2 = c2 * BigUint::from(r) / BigUint::from(jmm as u64 - r + 1);
            r -= 1;
        }
    }
    if acc.is_zero() {
        return ExtReal::zero();
    }
    let sum = ExtReal::from_parts(acc, -k * n as i64).round(prec);

    let two_j = pair.j.twice() as u64;
    let ratio = ExtReal::from_ratio(&binomial(two_j, jpm as u64), &binomial(two_j, jpmp as u64), prec);
    let mut radicand = ratio;
    if a_low % 2 == 1 {
        radicand = (&radicand * x).round(prec);
    }
    if b_low % 2 == 1 {
        radicand = (&radicand * y).round(prec);
    }
    let root = radicand.sqrt(prec).unwrap();
    let xp = x.powi(a_low / 2, prec);
    let yp = y.powi(b_low / 2, prec);
    let v = (&(&sum * &root).round(prec) * &(&xp * &yp).round(prec)).round(prec);
    v
}

/// Wigner small-d matrix element `d^J_{M M'}(beta)` rounded to double.
pub fn wigner_small_d_exact(j: Spin, m: HalfInt, mp: HalfInt, beta: f64) -> Result<f64, Error> {
    Ok(wigner_small_d_ext(j, m, mp, beta, Precision::DEFAULT)?.to_f64())
}

/// `D^J_{M M'}(g) = e^{-i alpha M} d^J_{M M'}(beta) e^{-i gamma M'}`.
#[allow(non_snake_case)]
pub fn wigner_D_exact(j: Spin, m: HalfInt, mp: HalfInt, g: &EulerRotation) -> Result<Complex, Error> {
    let d = wigner_small_d_exact(j, m, mp, g.beta)?;
    Ok(Complex::from_polar(d, -(g.alpha * m.value() + g.gamma * mp.value())))
}

/// Trace of the spin-`J` representation matrix, summed term by term.
pub fn character_exact_sum(j: Spin, g: &EulerRotation) -> Complex {
    let (x, y) = half_angle_squares(g.beta);
    let prec = Precision::DEFAULT;
    j.projections()
        .map(|m| {
            let pair = MagneticPair { j, m, mp: m };
            let d = small_d_from_squares(&pair, &x, &y, prec).to_f64();
            Complex::from_polar(d, -(g.alpha + g.gamma) * m.value())
        })
        .sum()
}

/// `sin((J + 1/2) theta) / sin(theta / 2)`, with a Taylor fallback near `theta = 0 mod 2pi`.
pub fn character_closed_form(j: Spin, theta: f64) -> f64 {
    let half = libm::sin(0.5 * theta);
    if half.abs() >= 1e-8 {
        return libm::sin((j.value() + 0.5) * theta) / half;
    }
    // chi(delta + 2pi k) = (-1)^{2Jk} chi(delta); expand chi(delta) = sum_M cos(M delta).
    let k = libm::round(theta / (2.0 * PI));
    let delta = theta - 2.0 * PI * k;
    let jv = j.value();
    let n = 2.0 * jv + 1.0;
    let m2 = jv * (jv + 1.0) * n / 3.0;
    let m4 = n * jv * (jv + 1.0) * (3.0 * jv * jv + 3.0 * jv - 1.0) / 15.0;
    let d2 = delta * delta;
    let chi = n - 0.5 * d2 * m2 + d2 * d2 / 24.0 * m4;
    if j.is_half_integer() && (k as i64) % 2 != 0 {
        -chi
    } else {
        chi
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: u32) -> Spin {
        Spin::from_twice(t)
    }
    fn h(t: i64) -> HalfInt {
        HalfInt::from_twice(t)
    }

    #[test]
    fn spin_half_diagonal() {
        for &b in &[0.0, 0.3, 1.0, 2.0, PI] {
            let d = wigner_small_d_exact(s(1), h(1), h(1), b).unwrap();
            assert!((d - libm::cos(b / 2.0)).abs() < 1e-15);
            let off = wigner_small_d_exact(s(1), h(1), h(-1), b).unwrap();
            assert!((off + libm::sin(b / 2.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn spin_one_centre() {
        for &b in &[0.0, 0.4, 1.3, 2.9] {
            let d = wigner_small_d_exact(s(2), h(0), h(0), b).unwrap();
            assert!((d - libm::cos(b)).abs() < 1e-15);
        }
    }

    #[test]
    fn highest_weight_is_power() {
        for tj in [3u32, 10, 41, 200] {
            let b = 0.9;
            let d = wigner_small_d_exact(s(tj), h(tj as i64), h(tj as i64), b).unwrap();
            let expect = libm::pow(libm::cos(b / 2.0), tj as f64);
            assert!((d - expect).abs() <= 1e-14 * expect.abs().max(1e-300), "{d} {expect}");
        }
    }

    #[test]
    fn rejects_bad_magnetic() {
        assert_eq!(wigner_small_d_exact(s(2), h(1), h(0), 1.0), Err(Error::InvalidMagnetic));
        assert_eq!(wigner_small_d_exact(s(2), h(4), h(0), 1.0), Err(Error::InvalidMagnetic));
    }

    #[test]
    fn big_d_phases() {
        let g = EulerRotation::new(0.7, 1.1, -0.4).unwrap();
        let j = s(6);
        let v = wigner_D_exact(j, h(6), h(6), &g).unwrap();
        let expect = Complex::from_polar(libm::pow(g.xi, 6.0), -(g.alpha + g.gamma) * 3.0);
        assert!((v - expect).norm() < 1e-14);
        let flat = EulerRotation::beta_only(1.1).unwrap();
        let v0 = wigner_D_exact(j, h(2), h(-4), &flat).unwrap();
        assert_eq!(v0.im, 0.0);
        assert_eq!(v0.re, wigner_small_d_exact(j, h(2), h(-4), 1.1).unwrap());
    }

    #[test]
    fn row_unitarity_spin_two() {
        let g = EulerRotation::new(0.2, 1.1, 0.5).unwrap();
        let j = s(4);
        for m in j.projections() {
            let n: f64 = j.projections().map(|mp| wigner_D_exact(j, m, mp, &g).unwrap().norm_sqr()).sum();
            assert!((n - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn identity_character() {
        for t in 0..12 {
            let chi = character_exact_sum(s(t), &EulerRotation::IDENTITY);
            assert_eq!(chi, Complex::new(t as f64 + 1.0, 0.0));
            assert_eq!(character_closed_form(s(t), 0.0), t as f64 + 1.0);
        }
    }

    #[test]
    fn closed_form_special_values() {
        assert!(character_closed_form(s(1), PI).abs() < 1e-15);
        let g = EulerRotation::beta_only(0.7).unwrap();
        let chi = character_exact_sum(s(6), &g);
        assert!((chi.re - character_closed_form(s(6), 0.7)).abs() < 1e-13);
        let half = character_exact_sum(s(1), &EulerRotation::beta_only(1.9).unwrap());
        assert!((half.re - 2.0 * libm::cos(0.95)).abs() < 1e-15);
    }

    #[test]
    fn closed_form_series_is_continuous() {
        for t in [1u32, 4, 7, 30] {
            for &theta in &[1e-9, 2.0 * PI - 1e-9, 2.0 * PI, 4.0 * PI - 3e-9] {
                let series = character_closed_form(s(t), theta);
                let a = theta + 2e-8;
                let direct = libm::sin((t as f64 / 2.0 + 0.5) * a) / libm::sin(a / 2.0);
                assert!((series - direct).abs() < 1e-6 * (t as f64 + 1.0), "{t} {theta} {series} {direct}");
            }
        }
    }
}
