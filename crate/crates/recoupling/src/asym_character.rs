//! Characters from their class angle, and the saddle points of the diagonal sum.

use crate::recoupling_exact::character_closed_form;
use crate::{Error, EulerRotation, Spin};

/// Rotation angle `theta` of an SU(2) element, `cos(theta/2) = xi cos((alpha+gamma)/2)`.
///
/// Takes values in the closed interval `[0, 2pi]`: SU(2) class functions are
/// `4pi`-periodic, so `theta = 2pi` (the element `-1`) is kept distinct from `0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassAngle {
    pub theta: f64,
}

impl ClassAngle {
    pub fn half_sin(self) -> f64 {
        libm::sin(0.5 * self.theta)
    }
}

/// `sin^2(theta/2) = eta^2 + xi^2 sin^2 s` with `s = (alpha + gamma)/2`, formed without cancellation.
fn half_angle(g: &EulerRotation) -> (f64, f64) {
    let s = 0.5 * (g.alpha + g.gamma);
    let c = g.xi * libm::cos(s);
    let sn = libm::sqrt(g.eta * g.eta + g.xi * g.xi * libm::sin(s) * libm::sin(s));
    (sn, c)
}

pub fn theta_of_euler(g: &EulerRotation) -> ClassAngle {
    let (sn, c) = half_angle(g);
    ClassAngle { theta: 2.0 * libm::atan2(sn, c) }
}

/// `sin((J + 1/2) theta) / sin(theta/2)`, with the series limit near `sin(theta/2) = 0`.
pub fn character_asym(j: Spin, g: &EulerRotation) -> f64 {
    character_closed_form(j, theta_of_euler(g).theta)
}

/// The two stationary points `x1 = -xi sin((alpha+gamma)/2) / sin(theta/2)` and `x2 = -x1`
/// of the diagonal sum in the variable `x = M/J`.
pub fn char_saddles(g: &EulerRotation) -> Result<(f64, f64), Error> {
    if !g.is_generic() {
        return Err(Error::NonGeneric);
    }
    let (sn, _) = half_angle(g);
    if sn < 1e-12 {
        return Err(Error::Degenerate);
    }
    let x1 = -g.xi * libm::sin(0.5 * (g.alpha + g.gamma)) / sn;
    Ok((x1, -x1))
}
