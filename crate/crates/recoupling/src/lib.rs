//! Exact and large-spin asymptotic evaluation of SU(2) recoupling quantities.
//!
//! The exact side ([`recoupling_exact`]) evaluates Wigner matrix elements,
//! characters and 3j symbols from their finite sums with exact integer
//! arithmetic. The asymptotic side ([`asym_wigner`], [`asym_character`],
//! [`asym_threej`]) implements the saddle-point estimates for large spins.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod asym_character;
pub mod asym_threej;
pub mod asym_wigner;
mod euler;
pub mod ext;
pub mod quadrature;
pub mod recoupling_exact;
mod spin;
pub mod vec3;

pub use euler::EulerRotation;
pub use ext::{ExtReal, Precision};
pub use spin::{HalfInt, MagneticPair, Spin};

use core::fmt;

pub type Complex = num_complex::Complex64;

/// Failure modes shared by every module.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Error {
    /// `|M| > J` or `M` has the wrong parity for `J`.
    InvalidMagnetic,
    /// The Haar quadrature grid is too coarse for the integrand degree.
    ResolutionTooLow,
    /// `xi^2` is 0 or 1; asymptotic formulas need a generic rotation.
    NonGeneric,
    /// The asymptotic formula was called outside its region.
    WrongRegion,
    /// A logarithm in the action is evaluated at its branch point.
    BranchPoint,
    NotOscillatory,
    NotSuppressed,
    /// A logarithm argument is zero or not finite.
    LogDomain,
    /// Arguments outside the documented open domain.
    DomainError,
    /// The class angle is too close to 0 or 2pi for the saddle formula.
    Degenerate,
    /// The perpendicular components do not close a real triangle.
    ClassicallyForbidden,
    /// Triangle inequality or `M1 + M2 + M3 = 0` fails.
    SelectionRule,
    /// Some momentum vector is parallel to the projection axis.
    DegenerateAxis,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Error::InvalidMagnetic => "magnetic number out of range or of wrong parity",
            Error::ResolutionTooLow => "quadrature resolution too low for these spins",
            Error::NonGeneric => "rotation is not generic (xi^2 must lie in (0, 1))",
            Error::WrongRegion => "point lies outside the region of this estimate",
            Error::BranchPoint => "logarithm evaluated at a branch point",
            Error::NotOscillatory => "discriminant is negative",
            Error::NotSuppressed => "discriminant is non-negative",
            Error::LogDomain => "logarithm argument is zero or not finite",
            Error::DomainError => "argument outside the open unit domain",
            Error::Degenerate => "class angle too close to 0 or 2pi",
            Error::ClassicallyForbidden => "projections do not close a real triangle",
            Error::SelectionRule => "selection rule violated",
            Error::DegenerateAxis => "momentum vector parallel to the projection axis",
        };
        f.write_str(s)
    }
}

impl core::error::Error for Error {}
