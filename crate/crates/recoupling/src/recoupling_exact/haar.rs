use alloc::vec::Vec;
use core::f64::consts::PI;

use super::wigner::{half_angle_squares, small_d_from_squares};
use crate::quadrature::{gauss_legendre, trapezoid_periodic};
use crate::{Complex, Error, ExtReal, HalfInt, MagneticPair, Precision, Spin};

/// Tensor-product rule for the normalised Haar measure on SU(2).
///
/// `alpha` uses `resolution` trapezoid points on `[0, 2pi)`. `gamma` runs over
/// the full double-cover period `[0, 4pi)` with `2 * resolution` points, which
/// makes half-integer total projections integrate to zero. `beta` uses
/// Gauss–Legendre in `cos(beta)` with `resolution / 2` nodes.
#[derive(Clone, Debug)]
pub struct HaarRule {
    resolution: usize,
    alphas: Vec<f64>,
    gammas: Vec<f64>,
    /// `(X, Y)` half-angle squares at each polar node.
    polar: Vec<(ExtReal, ExtReal)>,
    /// Gauss weights divided by two, so they sum to one.
    polar_weights: Vec<f64>,
}

impl HaarRule {
    pub fn new(resolution: usize) -> Self {
        let (nodes, weights) = gauss_legendre(resolution / 2);
        HaarRule {
            resolution,
            alphas: trapezoid_periodic(resolution, 2.0 * PI).collect(),
            gammas: trapezoid_periodic(2 * resolution, 4.0 * PI).collect(),
            polar: nodes.iter().map(|&c| half_angle_squares(libm::acos(c))).collect(),
            polar_weights: weights.iter().map(|w| 0.5 * w).collect(),
        }
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    /// Smallest admissible resolution for spins with `J1 + J2 + J3 = total`.
    pub fn min_resolution(j: [Spin; 3]) -> usize {
        let twice: u32 = j.iter().map(|s| s.twice()).sum();
        2 * twice as usize + 8
    }

    /// `int dg D^{J1}_{M1 M1'}(g) D^{J2}_{M2 M2'}(g) D^{J3}_{M3 M3'}(g)`.
    pub fn integrate(&self, j: [Spin; 3], m: [HalfInt; 3], mp: [HalfInt; 3]) -> Result<Complex, Error> {
        let pairs = [0, 1, 2].map(|i| MagneticPair::new(j[i], m[i], mp[i]));
        let pairs = [pairs[0]?, pairs[1]?, pairs[2]?];
        if self.resolution < Self::min_resolution(j) {
            return Err(Error::ResolutionTooLow);
        }
        // The integrand is e^{-i alpha sum M} e^{-i gamma sum M'} prod d(beta);
        // the tensor sum factorises exactly into three one-dimensional sums.
        let sm: f64 = m.iter().map(|x| x.value()).sum();
        let smp: f64 = mp.iter().map(|x| x.value()).sum();
        let a: Complex = self.alphas.iter().map(|&al| Complex::from_polar(1.0, -al * sm)).sum::<Complex>()
            / self.alphas.len() as f64;
        let g: Complex = self.gammas.iter().map(|&ga| Complex::from_polar(1.0, -ga * smp)).sum::<Complex>()
            / self.gammas.len() as f64;
        let prec = Precision::DEFAULT;
        let b: f64 = self
            .polar
            .iter()
            .zip(&self.polar_weights)
            .map(|((x, y), w)| {
                w * pairs.iter().map(|p| small_d_from_squares(p, x, y, prec).to_f64()).product::<f64>()
            })
            .sum();
        Ok(a * g * b)
    }
}

/// Haar integral of a product of three Wigner matrix elements.
///
/// `resolution` is the number of `alpha` points and must be at least
/// `4 (J1 + J2 + J3) + 8`; the polar rule then has at least `2 (J1 + J2 + J3) + 4` nodes.
pub fn haar_triple_integral(
    j: [Spin; 3],
    m: [HalfInt; 3],
    mp: [HalfInt; 3],
    resolution: usize,
) -> Result<Complex, Error> {
    if resolution < HaarRule::min_resolution(j) {
        return Err(Error::ResolutionTooLow);
    }
    HaarRule::new(resolution).integrate(j, m, mp)
}
