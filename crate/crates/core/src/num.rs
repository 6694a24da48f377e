//! Arbitrary-precision scalars.
//!
//! `BigReal` and `BigComplex` are MPFR/MPC values from `rug`. A [`Precision`]
//! is stated in decimal digits; the working precision adds
//! [`GUARD_DIGITS`] plus a few spare bits.

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float, Rational};

pub type BigReal = Float;
pub type BigComplex = Complex;

/// Guard digits carried on top of the requested precision.
pub const GUARD_DIGITS: u32 = 10;

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Requested decimal precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Precision {
    digits: u32,
}

impl Precision {
    pub const fn digits(digits: u32) -> Self {
        Self { digits }
    }

    pub fn requested(&self) -> u32 {
        self.digits
    }

    /// Digits actually carried, guard included.
    pub fn working_digits(&self) -> u32 {
        self.digits + GUARD_DIGITS
    }

    /// Mantissa bits of every working value.
    pub fn bits(&self) -> u32 {
        (f64::from(self.working_digits()) * LOG2_10).ceil() as u32 + 16
    }

    /// Pass threshold `10^(-P+10)` used by the verifiers.
    pub fn tolerance(&self) -> Float {
        pow10(self.bits(), -(self.digits as i32) + 10)
    }

    /// Target accuracy for quadrature and series: `10^-(P+5)`.
    pub fn target(&self) -> Float {
        pow10(self.bits(), -(self.digits as i32) - 5)
    }

    pub fn doubled(&self) -> Self {
        Self::digits(self.digits * 2)
    }
}

pub fn real(bits: u32, v: impl Into<f64>) -> Float {
    Float::with_val(bits, v.into())
}

pub fn int(bits: u32, v: i64) -> Float {
    Float::with_val(bits, v)
}

pub fn from_rational(bits: u32, q: &Rational) -> Float {
    Float::with_val(bits, q)
}

pub fn ratio(bits: u32, p: i64, q: i64) -> Float {
    Float::with_val(bits, Rational::from((p, q)))
}

pub fn pow10(bits: u32, e: i32) -> Float {
    let ten = Float::with_val(bits, 10);
    ten.pow(e)
}

pub fn ln2(bits: u32) -> Float {
    Float::with_val(bits, Constant::Log2)
}

pub fn pi(bits: u32) -> Float {
    Float::with_val(bits, Constant::Pi)
}

/// `log10 |v|`, or `-inf` for zero. Cheap magnitude report for residuals.
pub fn log10_abs(v: &Float) -> f64 {
    if v.is_zero() {
        return f64::NEG_INFINITY;
    }
    let a = Float::with_val(64, v.abs_ref());
    a.log10().to_f64()
}

/// Scientific-notation rendering with `digits` significant digits.
pub fn fmt_sci(v: &Float, digits: usize) -> String {
    v.to_string_radix(10, Some(digits.max(2)))
}

/// Decimal digits a value of `bits` mantissa bits was requested at.
pub fn digits_of_bits(bits: u32) -> usize {
    let d = (f64::from(bits.saturating_sub(16)) / LOG2_10).floor() as u32;
    d.saturating_sub(GUARD_DIGITS).max(2) as usize
}

/// Serializes a float as a decimal string at its requested precision.
pub fn serialize_float<S: serde::Serializer>(v: &Float, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_sci(v, digits_of_bits(v.prec())))
}

pub fn complex(bits: u32, re: &Float, im: &Float) -> Complex {
    Complex::with_val(bits, (re, im))
}

pub fn complex_abs(z: &Complex) -> Float {
    let bits = z.real().prec();
    Float::with_val(bits, z.abs_ref())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn working_bits_cover_guard_digits() {
        let p = Precision::digits(50);
        assert_eq!(p.working_digits(), 60);
        assert!(p.bits() >= 200);
        assert!(log10_abs(&p.tolerance()) > -40.5 && log10_abs(&p.tolerance()) < -39.5);
    }

    #[test]
    fn ratio_is_exact_to_working_bits() {
        let q = ratio(200, 1, 3);
        let back = Float::with_val(200, &q * 3u32);
        assert!((back - 1u32).abs() < pow10(200, -58));
    }
}
