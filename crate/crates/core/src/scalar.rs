//! Scalar abstraction over the two computation backends: exact rationals
//! (arbitrary precision) and binary64 floats with a relative tolerance.
//!
//! Every algorithm in this crate is generic over [`Scalar`]. The exact
//! backend is the primary verification path; the float backend mirrors it
//! and uses scaled zero tests everywhere a sign or rank decision is made.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::bigint::Sign;
use num::{BigInt, BigRational, FromPrimitive, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg;

/// Default relative tolerance of the float backend.
pub const TAU_REL: f64 = 9.094947017729282e-13; // 2^-40

/// Exact rational scalar, stored in lowest terms with positive denominator
/// (invariants maintained by `num_rational`).
pub type Rational = BigRational;

pub trait Scalar:
    Clone
    + PartialEq
    + PartialOrd
    + Debug
    + Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// True for backends where equality and sign tests are exact.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn from_f64(v: f64) -> Self;

    /// Zero test against a caller-supplied scale. The exact backend uses
    /// literal equality; the float backend tests `|v| <= TAU_REL * |scale|`.
    fn is_zero_scaled(&self, scale: &Self) -> bool;

    fn is_zero(&self) -> bool {
        self.is_zero_scaled(&Self::one())
    }

    fn abs(&self) -> Self;

    /// -1, 0 or +1. Exact on the rational backend; the float backend
    /// reports the IEEE sign without tolerance.
    fn signum(&self) -> i8;

    fn to_f64(&self) -> f64;

    /// The value as a small integer, if it is one.
    fn as_integer(&self) -> Option<i64>;

    fn powi(&self, n: i32) -> Self;

    /// Real power with a possibly non-integer exponent. Returns `None`
    /// when the backend cannot represent the result (exact backend with
    /// fractional exponent).
    fn powf(&self, exponent: &Self) -> Option<Self>;

    fn parse(s: &str) -> Result<Self>;

    fn to_json(&self) -> serde_json::Value;
    fn from_json(v: &serde_json::Value) -> Result<Self>;

    /// Total bits in the representation; used for growth statistics.
    fn bit_size(&self) -> u64;

    /// Determinant of a small square matrix. The float backend uses
    /// Gaussian elimination with partial pivoting; the exact backend
    /// overrides this with fraction-free (Bareiss) elimination.
    fn det(rows: Vec<Vec<Self>>) -> Self {
        linalg::gauss_det(rows)
    }

    /// Solve `a x = b`; `None` when the system is singular under the
    /// backend's zero test.
    fn solve(a: Vec<Vec<Self>>, b: Vec<Self>) -> Option<Vec<Self>> {
        linalg::gauss_solve(a, b)
    }
}

pub fn factorial<S: Scalar>(n: usize) -> S {
    let mut acc = S::one();
    for k in 2..=n {
        acc = acc * S::from_int(k as i64);
    }
    acc
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn zero() -> Self {
        num::Zero::zero()
    }

    fn one() -> Self {
        num::One::one()
    }

    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_f64(v: f64) -> Self {
        <BigRational as FromPrimitive>::from_f64(v).expect("finite float")
    }

    fn is_zero_scaled(&self, _scale: &Self) -> bool {
        num::Zero::is_zero(self)
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn signum(&self) -> i8 {
        match self.numer().sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(self.numer(), self.denom())
    }

    fn as_integer(&self) -> Option<i64> {
        if self.denom().is_one() {
            self.numer().to_i64()
        } else {
            None
        }
    }

    fn powi(&self, n: i32) -> Self {
        if n == 0 {
            return Scalar::one();
        }
        let p = num::pow::pow(self.clone(), n.unsigned_abs() as usize);
        if n < 0 {
            p.recip()
        } else {
            p
        }
    }

    fn powf(&self, exponent: &Self) -> Option<Self> {
        let e = Scalar::as_integer(exponent)?;
        let e32 = i32::try_from(e).ok()?;
        Some(Scalar::powi(self, e32))
    }

    fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        if let Ok(r) = t.parse::<BigRational>() {
            return Ok(r);
        }
        // Accept plain decimals like "0.125" for convenience.
        if let Ok(v) = t.parse::<f64>() {
            if v.is_finite() {
                return decimal_str_to_rational(t)
                    .ok_or_else(|| Error::Parse(format!("bad rational literal {t:?}")));
            }
        }
        Err(Error::Parse(format!("bad rational literal {t:?}")))
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(self.to_string())
    }

    fn from_json(v: &serde_json::Value) -> Result<Self> {
        match v {
            serde_json::Value::String(s) => Scalar::parse(s.as_str()),
            serde_json::Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(Scalar::from_int(i))
                } else {
                    Err(Error::Parse(format!(
                        "exact backend cannot read float {n} losslessly; use a \"p/q\" string"
                    )))
                }
            }
            other => Err(Error::Parse(format!("expected rational, got {other}"))),
        }
    }

    fn bit_size(&self) -> u64 {
        self.numer().bits() + self.denom().bits()
    }

    fn det(rows: Vec<Vec<Self>>) -> Self {
        linalg::bareiss_det_rational(rows)
    }

    fn solve(a: Vec<Vec<Self>>, b: Vec<Self>) -> Option<Vec<Self>> {
        linalg::bareiss_solve_rational(a, b)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn from_int(n: i64) -> Self {
        n as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_f64(v: f64) -> Self {
        v
    }

    fn is_zero_scaled(&self, scale: &Self) -> bool {
        f64::abs(*self) <= TAU_REL * f64::abs(*scale)
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn signum(&self) -> i8 {
        if *self > 0.0 {
            1
        } else if *self < 0.0 {
            -1
        } else {
            0
        }
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn as_integer(&self) -> Option<i64> {
        if self.fract() == 0.0 && f64::abs(*self) < 2f64.powi(53) {
            Some(*self as i64)
        } else {
            None
        }
    }

    fn powi(&self, n: i32) -> Self {
        f64::powi(*self, n)
    }

    fn powf(&self, exponent: &Self) -> Option<Self> {
        Some(f64::powf(*self, *exponent))
    }

    fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        if let Ok(v) = t.parse::<f64>() {
            return Ok(v);
        }
        if let Some((n, d)) = t.split_once('/') {
            let n: f64 = n
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad float literal {t:?}")))?;
            let d: f64 = d
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad float literal {t:?}")))?;
            if d != 0.0 {
                return Ok(n / d);
            }
        }
        Err(Error::Parse(format!("bad float literal {t:?}")))
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::json!(self)
    }

    fn from_json(v: &serde_json::Value) -> Result<Self> {
        match v {
            serde_json::Value::Number(n) => n
                .as_f64()
                .ok_or_else(|| Error::Parse(format!("bad number {n}"))),
            serde_json::Value::String(s) => Scalar::parse(s.as_str()),
            other => Err(Error::Parse(format!("expected number, got {other}"))),
        }
    }

    fn bit_size(&self) -> u64 {
        64
    }
}

/// Convert a big-integer fraction to `f64` without overflowing: both parts
/// are shifted down together when they exceed the exponent range.
pub fn rational_to_f64(numer: &BigInt, denom: &BigInt) -> f64 {
    if numer.is_zero() {
        return 0.0;
    }
    let nb = numer.bits() as i64;
    let db = denom.bits() as i64;
    // Keep ~80 significant bits of each operand.
    let shift_n = (nb - 80).max(0);
    let shift_d = (db - 80).max(0);
    let n = (numer >> shift_n).to_f64().unwrap_or(f64::NAN);
    let d = (denom >> shift_d).to_f64().unwrap_or(f64::NAN);
    let q = n / d;
    let e = shift_n - shift_d;
    if e > 1100 {
        return if q >= 0.0 { f64::INFINITY } else { f64::NEG_INFINITY };
    }
    if e < -1100 {
        return 0.0;
    }
    q * 2f64.powi(e as i32)
}

fn decimal_str_to_rational(t: &str) -> Option<BigRational> {
    let (sign, rest) = match t.strip_prefix('-') {
        Some(r) => (-1i64, r),
        None => (1, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int_part, frac_part) = match rest.split_once('.') {
        Some((i, f)) => (i, f),
        None => (rest, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let digits: String = format!("{int_part}{frac_part}");
    let numer: BigInt = digits.parse().ok()?;
    let denom = num::pow::pow(BigInt::from(10), frac_part.len());
    Some(BigRational::new(numer * BigInt::from(sign), denom))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rational {
        Scalar::from_ratio(n, d)
    }

    #[test]
    fn rational_invariants() {
        let r = rat(4, -6);
        assert_eq!(r.numer(), &BigInt::from(-2));
        assert_eq!(r.denom(), &BigInt::from(3));
        assert_eq!(r.to_string(), "-2/3");
    }

    #[test]
    fn zero_tests() {
        assert!(Scalar::is_zero(&rat(0, 5)));
        assert!(!Scalar::is_zero(&rat(1, 1_000_000)));
        let tiny = 1e-14f64;
        assert!(tiny.is_zero_scaled(&1.0));
        assert!(!tiny.is_zero_scaled(&1e-3));
    }

    #[test]
    fn parse_round_trip() {
        let r: Rational = Scalar::parse("-7/12").unwrap();
        assert_eq!(r, rat(-7, 12));
        let r: Rational = Scalar::parse("0.125").unwrap();
        assert_eq!(r, rat(1, 8));
        let f: f64 = Scalar::parse("3/4").unwrap();
        assert_eq!(f, 0.75);
    }

    #[test]
    fn huge_fraction_to_f64() {
        let n = BigInt::from(3) << 5000;
        let d = BigInt::from(7) << 5001;
        let v = rational_to_f64(&n, &d);
        assert!((v - 3.0 / 14.0).abs() < 1e-12);
    }

    #[test]
    fn factorial_values() {
        assert_eq!(factorial::<Rational>(5), rat(120, 1));
        assert_eq!(factorial::<f64>(0), 1.0);
    }
}
