//! Half-integer bookkeeping. Every quantity is stored as twice its value.

use core::fmt;

use crate::Error;

/// An angular momentum `J`, stored as `2J`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Spin {
    twice: u32,
}

impl Spin {
    pub const fn from_twice(twice: u32) -> Self {
        Spin { twice }
    }

    /// Parses a float that must be an integer or half-integer.
    pub fn from_f64(j: f64) -> Option<Self> {
        let t = libm::round(2.0 * j);
        if j < 0.0 || !j.is_finite() || (2.0 * j - t).abs() > 1e-9 || t > u32::MAX as f64 {
            return None;
        }
        Some(Spin { twice: t as u32 })
    }

    pub const fn twice(self) -> u32 {
        self.twice
    }

    pub fn value(self) -> f64 {
        self.twice as f64 * 0.5
    }

    pub const fn is_half_integer(self) -> bool {
        self.twice % 2 == 1
    }

    /// Dimension `2J + 1` of the representation.
    pub const fn dim(self) -> u32 {
        self.twice + 1
    }

    /// Iterates `M = -J, -J+1, ..., J`.
    pub fn projections(self) -> impl Iterator<Item = HalfInt> + Clone {
        let t = self.twice as i64;
        (0..=self.twice as i64).map(move |k| HalfInt::from_twice(2 * k - t))
    }

    /// Whether `m` is an admissible projection for this spin.
    pub fn admits(self, m: HalfInt) -> bool {
        m.twice.unsigned_abs() <= self.twice as u64 && (m.twice - self.twice as i64) % 2 == 0
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_twice(self.twice as i64, f)
    }
}

/// A signed integer or half-integer such as a magnetic number `M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt {
    twice: i64,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice: 0 };

    pub const fn from_twice(twice: i64) -> Self {
        HalfInt { twice }
    }

    pub fn from_f64(m: f64) -> Option<Self> {
        let t = libm::round(2.0 * m);
        if !m.is_finite() || (2.0 * m - t).abs() > 1e-9 || t.abs() > i64::MAX as f64 / 4.0 {
            return None;
        }
        Some(HalfInt { twice: t as i64 })
    }

    pub const fn twice(self) -> i64 {
        self.twice
    }

    pub fn value(self) -> f64 {
        self.twice as f64 * 0.5
    }

    pub const fn neg(self) -> Self {
        HalfInt { twice: -self.twice }
    }
}

impl core::ops::Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt { twice: self.twice + rhs.twice }
    }
}

impl core::ops::Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt { twice: self.twice - rhs.twice }
    }
}

impl core::ops::Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt { twice: -self.twice }
    }
}

impl From<Spin> for HalfInt {
    fn from(j: Spin) -> Self {
        HalfInt { twice: j.twice as i64 }
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_twice(self.twice, f)
    }
}

fn fmt_twice(t: i64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if t % 2 == 0 {
        write!(f, "{}", t / 2)
    } else {
        write!(f, "{}/2", t)
    }
}

/// A validated `(J, M, M')` triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MagneticPair {
    pub j: Spin,
    pub m: HalfInt,
    pub mp: HalfInt,
}

impl MagneticPair {
    pub fn new(j: Spin, m: HalfInt, mp: HalfInt) -> Result<Self, Error> {
        if j.admits(m) && j.admits(mp) {
            Ok(MagneticPair { j, m, mp })
        } else {
            Err(Error::InvalidMagnetic)
        }
    }

    /// `J + M`, `J - M`, `J + M'`, `J - M'` as non-negative integers.
    pub(crate) fn offsets(&self) -> (u64, u64, u64, u64) {
        let j = self.j.twice as i64;
        (
            ((j + self.m.twice) / 2) as u64,
            ((j - self.m.twice) / 2) as u64,
            ((j + self.mp.twice) / 2) as u64,
            ((j - self.mp.twice) / 2) as u64,
        )
    }

    /// Reduced coordinates `x = M/J`, `y = M'/J`. Undefined for `J = 0`.
    pub fn reduced(&self) -> (f64, f64) {
        let j = self.j.twice as f64;
        (self.m.twice as f64 / j, self.mp.twice as f64 / j)
    }
}
