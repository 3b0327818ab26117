//! Ordered-field scalars.
//!
//! Two realizations are provided: [`Rational`] (arbitrary precision, no
//! rounding, the reference semantics) and `f64`. Zero tests go through
//! [`Scalar::is_negligible`], which is a literal comparison for rationals and
//! a relative test against a [`Tolerance`] for floats.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num::bigint::BigInt;
use num::traits::{Signed, ToPrimitive};
use num::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Relative tolerance used only for zero tests in floating mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance(pub f64);

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance(1e-9)
    }
}

/// Arithmetic mode of a coordinate set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Rational,
    Float,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rational" => Ok(Mode::Rational),
            "float" => Ok(Mode::Float),
            other => Err(Error::Parse(format!("unknown mode {other:?}"))),
        }
    }
}

/// A face sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn value(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_value(v: i64) -> Result<Self> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(Error::Parse(format!("sign must be 1 or -1, got {other}"))),
        }
    }

    pub fn apply<S: Scalar>(self, x: S) -> S {
        match self {
            Sign::Plus => x,
            Sign::Minus => -x,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl std::ops::Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl Serialize for Sign {
    fn serialize<Se: serde::Serializer>(&self, s: Se) -> std::result::Result<Se::Ok, Se::Error> {
        s.serialize_i32(self.value())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = i64::deserialize(d)?;
        Sign::from_value(v).map_err(serde::de::Error::custom)
    }
}

pub trait Scalar:
    Signed + Clone + PartialOrd + Debug + Display + Send + Sync + 'static
{
    const MODE: Mode;

    fn from_i64(n: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    /// Rational mode: `self == 0`. Float mode: `|self| <= tol * scale`.
    fn is_negligible(&self, scale: &Self, tol: Tolerance) -> bool;

    fn to_f64(&self) -> f64;

    /// Nearest representable value of a finite float.
    fn from_f64(x: f64) -> Self;

    /// Exact square root when it exists in the field.
    fn sqrt_exact(&self) -> Option<Self>;

    /// `"p/q"` for rationals, 17 significant digits for floats.
    fn to_repr(&self) -> String;

    fn parse_repr(s: &str) -> Result<Self>;

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(self.to_repr())
    }

    fn from_json(v: &serde_json::Value) -> Result<Self> {
        match v {
            serde_json::Value::String(s) => Self::parse_repr(s),
            serde_json::Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(Self::from_i64(i))
                } else {
                    let x = n
                        .as_f64()
                        .ok_or_else(|| Error::Parse(format!("bad number {n}")))?;
                    Ok(Self::from_f64(x))
                }
            }
            other => Err(Error::Parse(format!("expected scalar, got {other}"))),
        }
    }

    /// Sign of a value that is known to be non-zero.
    fn sign(&self) -> Sign {
        if self.is_negative() {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }
}

impl Scalar for Rational {
    const MODE: Mode = Mode::Rational;

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn is_negligible(&self, _scale: &Self, _tol: Tolerance) -> bool {
        num::Zero::is_zero(self)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).unwrap_or_else(|| num::Zero::zero())
    }

    fn sqrt_exact(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        if &n * &n == *self.numer() && &d * &d == *self.denom() {
            Some(BigRational::new(n, d))
        } else {
            None
        }
    }

    fn to_repr(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }

    fn parse_repr(s: &str) -> Result<Self> {
        let s = s.trim();
        let parsed = match s.split_once('/') {
            Some((n, d)) => {
                let n = BigInt::from_str(n.trim()).map_err(|e| Error::Parse(e.to_string()))?;
                let d = BigInt::from_str(d.trim()).map_err(|e| Error::Parse(e.to_string()))?;
                if num::Zero::is_zero(&d) {
                    return Err(Error::Parse(format!("zero denominator in {s:?}")));
                }
                BigRational::new(n, d)
            }
            None => match BigInt::from_str(s) {
                Ok(n) => BigRational::from_integer(n),
                Err(_) => parse_decimal(s)?,
            },
        };
        Ok(parsed)
    }
}

/// Exact value of a finite decimal literal such as `"1.25"` or `"-3e-2"`.
fn parse_decimal(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("not a rational literal: {s:?}"));
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits = format!("{int_part}{frac_part}");
    let n = BigInt::from_str(&digits).map_err(|_| bad())?;
    let shift = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let scale = num::pow(ten, shift.unsigned_abs() as usize);
    Ok(if shift >= 0 {
        BigRational::from_integer(n * scale)
    } else {
        BigRational::new(n, scale)
    })
}

impl Scalar for f64 {
    const MODE: Mode = Mode::Float;

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn is_negligible(&self, scale: &Self, tol: Tolerance) -> bool {
        self.abs() <= tol.0 * scale.abs()
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_f64(x: f64) -> Self {
        x
    }

    fn sqrt_exact(&self) -> Option<Self> {
        (*self >= 0.0).then(|| self.sqrt())
    }

    fn to_repr(&self) -> String {
        format!("{:.16e}", self)
    }

    fn parse_repr(s: &str) -> Result<Self> {
        if let Some((n, d)) = s.split_once('/') {
            let n: f64 = n.trim().parse().map_err(|_| Error::Parse(s.to_string()))?;
            let d: f64 = d.trim().parse().map_err(|_| Error::Parse(s.to_string()))?;
            return Ok(n / d);
        }
        s.trim().parse().map_err(|_| Error::Parse(s.to_string()))
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Number::from_f64(*self)
            .map(serde_json::Value::Number)
            .unwrap_or(serde_json::Value::Null)
    }
}
