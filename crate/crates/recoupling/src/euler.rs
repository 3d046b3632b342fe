use core::f64::consts::PI;

use crate::Error;

/// A rotation in `(alpha, beta, gamma)` Euler angles with cached half-angle data.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EulerRotation {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// `cos(beta/2)`
    pub xi: f64,
    /// `sin(beta/2)`
    pub eta: f64,
}

impl EulerRotation {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self, Error> {
        if !(0.0..=PI).contains(&beta) || !alpha.is_finite() || !gamma.is_finite() {
            return Err(Error::DomainError);
        }
        Ok(EulerRotation {
            alpha,
            beta,
            gamma,
            xi: libm::cos(0.5 * beta),
            eta: libm::sin(0.5 * beta),
        })
    }

    pub const IDENTITY: EulerRotation =
        EulerRotation { alpha: 0.0, beta: 0.0, gamma: 0.0, xi: 1.0, eta: 0.0 };

    /// Pure `beta` rotation.
    pub fn beta_only(beta: f64) -> Result<Self, Error> {
        Self::new(0.0, beta, 0.0)
    }

    /// Rotation whose half-angle cosine squared is `xi2`.
    pub fn from_xi2(alpha: f64, xi2: f64, gamma: f64) -> Result<Self, Error> {
        if !(0.0..=1.0).contains(&xi2) {
            return Err(Error::DomainError);
        }
        Self::new(alpha, 2.0 * libm::acos(libm::sqrt(xi2)), gamma)
    }

    pub fn xi2(&self) -> f64 {
        self.xi * self.xi
    }

    /// `0 < xi^2 < 1`, i.e. beta is not a multiple of pi.
    ///
    /// `beta == PI` counts as non-generic even though `cos(PI/2)` rounds to `6e-17`.
    pub fn is_generic(&self) -> bool {
        self.beta > 0.0 && self.beta < PI && self.xi2() < 1.0
    }

    /// The rotation `(-gamma, beta, -alpha)`, inverse of `self`.
    pub fn inverse(&self) -> Self {
        EulerRotation { alpha: -self.gamma, gamma: -self.alpha, ..*self }
    }
}
