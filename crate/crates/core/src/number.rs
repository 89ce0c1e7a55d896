//! Scalar abstraction shared by exact (rational) and floating point lifts.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact coordinate type used throughout the crate.
pub type Rational = BigRational;

/// Arithmetic needed by piecewise-linear lifts.
///
/// `f64` comparisons use a small absolute slack in [`Coord::approx_eq`];
/// rationals compare exactly.
pub trait Coord:
    Clone
    + Debug
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    fn from_int(i: i64) -> Self;
    fn floor(&self) -> Self;
    fn as_f64(&self) -> f64;
    fn approx_eq(&self, other: &Self) -> bool;
    fn is_exact() -> bool;

    fn half() -> Self {
        Self::from_int(1) / Self::from_int(2)
    }

    /// Representative in `[0, 1)`.
    fn frac(&self) -> Self {
        self.clone() - self.floor()
    }
}

const FLOAT_SLACK: f64 = 1e-13;

impl Coord for f64 {
    fn from_int(i: i64) -> Self {
        i as f64
    }
    fn floor(&self) -> Self {
        f64::floor(*self)
    }
    fn as_f64(&self) -> f64 {
        *self
    }
    fn approx_eq(&self, other: &Self) -> bool {
        (self - other).abs() <= FLOAT_SLACK * (1.0 + self.abs().max(other.abs()))
    }
    fn is_exact() -> bool {
        false
    }
    fn frac(&self) -> Self {
        let f = self - f64::floor(*self);
        // rounding can produce exactly 1.0 for tiny negative inputs
        if f >= 1.0 {
            0.0
        } else {
            f
        }
    }
}

impl Coord for Rational {
    fn from_int(i: i64) -> Self {
        Rational::from_integer(BigInt::from(i))
    }
    fn floor(&self) -> Self {
        Rational::floor(self)
    }
    fn as_f64(&self) -> f64 {
        ratio_to_f64(self)
    }
    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }
    fn is_exact() -> bool {
        true
    }
}

/// Converts a rational to the nearest representable float.
pub fn ratio_to_f64(r: &Rational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // huge numerators/denominators: scale down before dividing
    let n = r.numer();
    let d = r.denom();
    let shift = n.bits().max(d.bits()).saturating_sub(900);
    let n = n >> shift;
    let d = d >> shift;
    match (n.to_f64(), d.to_f64()) {
        (Some(a), Some(b)) if b != 0.0 => a / b,
        _ => 0.0,
    }
}

pub fn int(i: i64) -> Rational {
    Rational::from_integer(BigInt::from(i))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Exact rational with the same shortest decimal expansion as `x`.
///
/// `0.1` becomes `1/10`, not the binary fraction nearest to it.
pub fn rational_from_f64(x: f64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    parse_rational(&format!("{x}")).ok()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse {0:?} as a rational number")]
pub struct ParseRationalError(pub String);

/// Parses `"p/q"`, integers and plain or scientific decimals.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let t = s.trim();
    if let Some((p, q)) = t.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| err())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| err())?),
        None => (t, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (ip, fp) = body.split_once('.').unwrap_or((body, ""));
    if ip.is_empty() && fp.is_empty() {
        return Err(err());
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let digits = format!("{ip}{fp}");
    let mut num = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| err())?;
    if neg {
        num = -num;
    }
    let scale = exp - fp.len() as i32;
    let ten = BigInt::from(10);
    let r = if scale >= 0 {
        Rational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(r)
}

/// `"p/q"`, or `"p"` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}
