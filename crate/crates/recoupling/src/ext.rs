//! Binary floating point with an arbitrary-length integer mantissa.
//!
//! An [`ExtReal`] is `mant * 2^exp`. Addition and multiplication are exact;
//! division, square roots and explicit rounding work to a [`Precision`].

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt::Write;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Working precision in decimal digits (at least 30).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Precision {
    digits: u32,
}

impl Precision {
    pub const MIN_DIGITS: u32 = 30;
    pub const MAX_DIGITS: u32 = 100_000;
    pub const DEFAULT: Precision = Precision { digits: 40 };

    pub fn from_digits(digits: u32) -> Option<Self> {
        (Self::MIN_DIGITS..=Self::MAX_DIGITS)
            .contains(&digits)
            .then_some(Precision { digits })
    }

    pub fn digits(self) -> u32 {
        self.digits
    }

    /// Mantissa bits, including a few guard bits.
    pub fn bits(self) -> u64 {
        (self.digits as f64 * core::f64::consts::LOG2_10) as u64 + 8
    }
}

impl Default for Precision {
    fn default() -> Self {
        Self::DEFAULT
    }
}

#[derive(Clone, Debug)]
pub struct ExtReal {
    mant: BigInt,
    exp: i64,
}

impl ExtReal {
    pub fn zero() -> Self {
        ExtReal { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        ExtReal { mant: BigInt::one(), exp: 0 }
    }

    /// `mant * 2^exp`, normalised so the mantissa is odd (or zero).
    pub fn from_parts(mant: BigInt, exp: i64) -> Self {
        ExtReal { mant, exp }.normalized()
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Self::from_parts(n.into(), 0)
    }

    /// Exact conversion; `None` for NaN and infinities.
    pub fn from_f64(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        if x == 0.0 {
            return Some(Self::zero());
        }
        let bits = x.to_bits();
        let neg = bits >> 63 == 1;
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if biased == 0 { (frac, -1074) } else { (frac | (1u64 << 52), biased - 1075) };
        let mant = BigInt::from(m);
        Some(Self::from_parts(if neg { -mant } else { mant }, e))
    }

    /// Exact ratio `num / den` rounded to `prec`.
    pub fn from_ratio(num: &BigUint, den: &BigUint, prec: Precision) -> Self {
        Self::from_int(BigInt::from(num.clone())).div(&Self::from_int(BigInt::from(den.clone())), prec)
    }

    fn normalized(mut self) -> Self {
        if self.mant.is_zero() {
            self.exp = 0;
            return self;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
        self
    }

    /// `(mantissa, exponent)` with the value `mantissa * 2^exponent`.
    pub fn parts(&self) -> (&BigInt, i64) {
        (&self.mant, self.exp)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        ExtReal { mant: self.mant.abs(), exp: self.exp }
    }

    /// Multiply by `2^k`.
    pub fn ldexp(&self, k: i64) -> Self {
        ExtReal { mant: self.mant.clone(), exp: self.exp + k }
    }

    /// Bit length of the mantissa.
    pub fn mantissa_bits(&self) -> u64 {
        self.mant.bits()
    }

    /// `floor(log2 |x|)`; `None` for zero.
    pub fn log2_floor(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.mant.bits() as i64 - 1 + self.exp)
    }

    /// Round to nearest, ties to even, keeping `prec.bits()` mantissa bits.
    pub fn round(&self, prec: Precision) -> Self {
        self.round_bits(prec.bits())
    }

    fn round_bits(&self, bits: u64) -> Self {
        let len = self.mant.bits();
        if len <= bits {
            return self.clone();
        }
        let shift = len - bits;
        let (sign, mag) = (self.mant.sign(), self.mant.magnitude());
        let mut q: BigUint = mag >> shift;
        let half = BigUint::one() << (shift - 1);
        let rem = mag - (&q << shift);
        let round_up = match rem.cmp(&half) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => q.bit(0),
        };
        if round_up {
            q += 1u32;
        }
        Self::from_parts(BigInt::from_biguint(sign, q), self.exp + shift as i64)
    }

    /// Quotient rounded to `prec`. Panics on division by zero.
    pub fn div(&self, rhs: &Self, prec: Precision) -> Self {
        assert!(!rhs.is_zero(), "ExtReal division by zero");
        if self.is_zero() {
            return Self::zero();
        }
        let want = prec.bits() + 2;
        let shift = (want + rhs.mant.bits()).saturating_sub(self.mant.bits()) + 1;
        let q = (&self.mant << shift) / &rhs.mant;
        Self::from_parts(q, self.exp - rhs.exp - shift as i64).round(prec)
    }

    /// Square root rounded to `prec`. Returns `None` for negative input.
    pub fn sqrt(&self, prec: Precision) -> Option<Self> {
        match self.mant.sign() {
            Sign::Minus => return None,
            Sign::NoSign => return Some(Self::zero()),
            Sign::Plus => {}
        }
        let want = 2 * (prec.bits() + 2);
        let mut shift = want.saturating_sub(self.mant.bits()) as i64;
        if (self.exp - shift) % 2 != 0 {
            shift += 1;
        }
        let m = self.mant.magnitude() << shift as u64;
        let r = m.sqrt();
        Some(Self::from_parts(BigInt::from(r), (self.exp - shift) / 2).round(prec))
    }

    /// `self^n`, rounding intermediate products to `prec`.
    pub fn powi(&self, mut n: u64, prec: Precision) -> Self {
        let bits = prec.bits() + 16;
        let mut base = self.round_bits(bits);
        let mut acc = Self::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = (&acc * &base).round_bits(bits);
            }
            n >>= 1;
            if n > 0 {
                base = (&base * &base).round_bits(bits);
            }
        }
        acc.round(prec)
    }

    /// Nearest double (ties to even up to a final subnormal rounding).
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let r = self.round_bits(53);
        let top = r.log2_floor().unwrap();
        if top > 1024 {
            return if r.signum() < 0 { f64::NEG_INFINITY } else { f64::INFINITY };
        }
        if top < -1080 {
            return if r.signum() < 0 { -0.0 } else { 0.0 };
        }
        let m = r.mant.magnitude().to_u64().unwrap() as f64;
        let v = scale2(m, r.exp);
        if r.signum() < 0 {
            -v
        } else {
            v
        }
    }

    /// Scientific notation with `digits` significant digits, e.g. `-1.2345e-7`.
    pub fn to_sci_string(&self, digits: u32) -> String {
        let digits = digits.max(1);
        let mut out = String::new();
        if self.is_zero() {
            out.push('0');
            return out;
        }
        if self.signum() < 0 {
            out.push('-');
        }
        let mag = self.mant.magnitude();
        // value = mag * 2^exp; estimate the decimal exponent from the binary one.
        let top = self.log2_floor().unwrap() as f64;
        let mut e10 = libm::floor(top * core::f64::consts::LOG10_2) as i64;
        let digit_str = loop {
            let n = scaled_digits(mag, self.exp, digits as i64 - 1 - e10);
            let s = n.to_str_radix(10);
            let len = s.len() as i64;
            if len > digits as i64 {
                e10 += len - digits as i64;
            } else if len < digits as i64 {
                e10 -= digits as i64 - len;
            } else {
                break s;
            }
        };
        let bytes: Vec<char> = digit_str.chars().collect();
        out.push(bytes[0]);
        if bytes.len() > 1 {
            out.push('.');
            out.extend(&bytes[1..]);
        }
        let _ = write!(out, "e{}", e10);
        out
    }
}

/// `round(mag * 2^exp * 10^p)` as an integer.
fn scaled_digits(mag: &BigUint, exp: i64, p: i64) -> BigUint {
    let ten = BigUint::from(10u32);
    let mut num = mag.clone();
    let mut den = BigUint::one();
    if p >= 0 {
        num *= ten.pow(p as u32);
    } else {
        den *= ten.pow((-p) as u32);
    }
    if exp >= 0 {
        num <<= exp as u64;
    } else {
        den <<= (-exp) as u64;
    }
    (num * 2u32 + &den) / (den * 2u32)
}

fn scale2(m: f64, e: i64) -> f64 {
    libm::scalbn(m, e.clamp(-2200, 2200) as i32)
}

impl PartialEq for ExtReal {
    fn eq(&self, other: &Self) -> bool {
        self.mant == other.mant && self.exp == other.exp
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some((self - other).signum().cmp(&0))
    }
}

impl<'a> Add<&'a ExtReal> for &'a ExtReal {
    type Output = ExtReal;
    fn add(self, rhs: &ExtReal) -> ExtReal {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(rhs.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &rhs.mant << (rhs.exp - e) as u64;
        ExtReal::from_parts(a + b, e)
    }
}

impl<'a> Sub<&'a ExtReal> for &'a ExtReal {
    type Output = ExtReal;
    fn sub(self, rhs: &ExtReal) -> ExtReal {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a ExtReal> for &'a ExtReal {
    type Output = ExtReal;
    fn mul(self, rhs: &ExtReal) -> ExtReal {
        ExtReal::from_parts(&self.mant * &rhs.mant, self.exp + rhs.exp)
    }
}

impl Neg for &ExtReal {
    type Output = ExtReal;
    fn neg(self) -> ExtReal {
        ExtReal { mant: -&self.mant, exp: self.exp }
    }
}

impl Neg for ExtReal {
    type Output = ExtReal;
    fn neg(self) -> ExtReal {
        ExtReal { mant: -self.mant, exp: self.exp }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Precision {
        Precision::DEFAULT
    }

    #[test]
    fn precision_bounds() {
        assert!(Precision::from_digits(29).is_none());
        assert!(Precision::from_digits(30).unwrap().bits() >= 100);
    }

    #[test]
    fn f64_round_trip_is_exact() {
        for &x in &[1.0, -0.1, 3.0e-310, 1.7e308, 2.0f64.powi(-1074), 123456.789, -5e-324] {
            assert_eq!(ExtReal::from_f64(x).unwrap().to_f64(), x);
        }
        assert!(ExtReal::from_f64(f64::NAN).is_none());
    }

    #[test]
    fn exact_add_and_cancel() {
        let big = ExtReal::from_f64(1e30).unwrap();
        let tiny = ExtReal::from_f64(1e-30).unwrap();
        let s = &(&big + &tiny) - &big;
        assert_eq!(s, tiny);
    }

    #[test]
    fn sqrt_and_div() {
        let two = ExtReal::from_int(2);
        let r = two.sqrt(p()).unwrap();
        let back = (&r * &r).round(p());
        let err = (&back - &two).abs();
        assert!(err.is_zero() || err.log2_floor().unwrap() < -(p().bits() as i64) + 4);
        assert_eq!(r.to_f64(), core::f64::consts::SQRT_2);
        let third = ExtReal::one().div(&ExtReal::from_int(3), p());
        assert_eq!(third.to_f64(), 1.0 / 3.0);
        assert!(ExtReal::from_int(-1).sqrt(p()).is_none());
    }

    #[test]
    fn powers() {
        let x = ExtReal::from_f64(0.75).unwrap();
        assert_eq!(x.powi(3, p()).to_f64(), 0.421875);
        let tiny = ExtReal::from_f64(1e-10).unwrap().powi(40, p());
        assert_eq!(tiny.to_f64(), 0.0);
        assert_eq!(tiny.log2_floor().unwrap(), (-400.0 * core::f64::consts::LOG2_10) as i64 - 1);
    }

    #[test]
    fn scientific_strings() {
        assert_eq!(ExtReal::from_f64(0.125).unwrap().to_sci_string(3), "1.25e-1");
        assert_eq!(ExtReal::from_int(-1000).to_sci_string(2), "-1.0e3");
        let third = ExtReal::one().div(&ExtReal::from_int(3), p());
        assert_eq!(third.to_sci_string(35), alloc::format!("3.{}e-1", "3".repeat(34)));
    }
}
