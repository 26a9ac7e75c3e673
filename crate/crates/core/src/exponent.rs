//! Exact rational exponents and their extension by `±∞`.
//!
//! Every action value, bar endpoint and Novikov exponent in the crate is an
//! [`Exponent`]; nothing on the algebraic side ever touches floating point.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse `{input}` as an exact rational: {reason}")]
pub struct ParseExponentError {
    pub input: String,
    pub reason: &'static str,
}

/// An exact rational number, always stored in lowest terms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Exponent(BigRational);

impl Exponent {
    pub fn zero() -> Self {
        Exponent(BigRational::zero())
    }

    pub fn one() -> Self {
        Exponent(BigRational::one())
    }

    pub fn from_integer(n: i64) -> Self {
        Exponent(BigRational::from_integer(BigInt::from(n)))
    }

    /// `numer / denom`; panics on a zero denominator.
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Exponent(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn from_big(value: BigRational) -> Self {
        Exponent(value)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    pub fn into_big(self) -> BigRational {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Exponent(self.0.abs())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// Smallest integer `n` with `n >= self`.
    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Exact conversion of a finite `f64`; used for parsing sample tables.
    pub fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(Exponent)
    }

    pub fn checked_div(&self, other: &Exponent) -> Option<Exponent> {
        if other.is_zero() {
            None
        } else {
            Some(Exponent(&self.0 / &other.0))
        }
    }

    /// Decimal rendering rounded half away from zero to `digits` places.
    pub fn to_decimal(&self, digits: usize) -> String {
        let scale = BigInt::from(10u32).pow(digits as u32);
        let scaled = &self.0 * BigRational::from_integer(scale.clone());
        let rounded = scaled.round().to_integer();
        let negative = rounded.is_negative();
        let magnitude = rounded.abs();
        let (whole, frac) = magnitude.div_rem(&scale);
        let sign = if negative { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{whole}")
        } else {
            format!("{sign}{whole}.{:0>width$}", frac.to_string(), width = digits)
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Exponent {
    type Err = ParseExponentError;

    /// Accepts `n`, `p/q` and plain decimals such as `-0.125`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason| ParseExponentError {
            input: s.to_string(),
            reason,
        };
        let t = s.trim();
        if t.is_empty() {
            return Err(err("empty string"));
        }
        if let Some((n, d)) = t.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| err("bad numerator"))?;
            let d: BigInt = d.trim().parse().map_err(|_| err("bad denominator"))?;
            if d.is_zero() {
                return Err(err("zero denominator"));
            }
            return Ok(Exponent(BigRational::new(n, d)));
        }
        if let Some((whole, frac)) = t.split_once('.') {
            let negative = whole.starts_with('-');
            let whole_digits = whole.trim_start_matches(['-', '+']);
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(err("bad decimal fraction"));
            }
            if !whole_digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(err("bad decimal integer part"));
            }
            let digits = format!("{whole_digits}{frac}");
            let n: BigInt = if digits.is_empty() {
                BigInt::zero()
            } else {
                digits.parse().map_err(|_| err("bad decimal"))?
            };
            let d = BigInt::from(10u32).pow(frac.len() as u32);
            let value = BigRational::new(n, d);
            return Ok(Exponent(if negative { -value } else { value }));
        }
        let n: BigInt = t.parse().map_err(|_| err("not a number"))?;
        Ok(Exponent(BigRational::from_integer(n)))
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Exponent {
    fn from(n: i64) -> Self {
        Exponent::from_integer(n)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Exponent> for &Exponent {
            type Output = Exponent;
            fn $method(self, rhs: &Exponent) -> Exponent {
                Exponent((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Exponent> for Exponent {
            type Output = Exponent;
            fn $method(self, rhs: Exponent) -> Exponent {
                Exponent(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Exponent> for Exponent {
            type Output = Exponent;
            fn $method(self, rhs: &Exponent) -> Exponent {
                Exponent(self.0.$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for Exponent {
    type Output = Exponent;
    fn neg(self) -> Exponent {
        Exponent(-self.0)
    }
}

impl Neg for &Exponent {
    type Output = Exponent;
    fn neg(self) -> Exponent {
        Exponent(-&self.0)
    }
}

/// A point of the extended line `{−∞} ∪ ℚ ∪ {+∞}`.
///
/// Variant order gives the total order, so `derive(Ord)` is correct.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    NegInf,
    Finite(Exponent),
    PosInf,
}

impl Level {
    pub fn finite(value: impl Into<Exponent>) -> Self {
        Level::Finite(value.into())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Level::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&Exponent> {
        match self {
            Level::Finite(e) => Some(e),
            _ => None,
        }
    }

    /// Sum on the extended line. `−∞ + x = −∞` for every `x ≠ +∞` and
    /// `+∞ + x = +∞` for every `x ≠ −∞`; the undefined `−∞ + ∞` is `None`.
    pub fn checked_add(&self, other: &Level) -> Option<Level> {
        match (self, other) {
            (Level::NegInf, Level::PosInf) | (Level::PosInf, Level::NegInf) => None,
            (Level::NegInf, _) | (_, Level::NegInf) => Some(Level::NegInf),
            (Level::PosInf, _) | (_, Level::PosInf) => Some(Level::PosInf),
            (Level::Finite(a), Level::Finite(b)) => Some(Level::Finite(a + b)),
        }
    }

    pub fn negate(&self) -> Level {
        match self {
            Level::NegInf => Level::PosInf,
            Level::PosInf => Level::NegInf,
            Level::Finite(e) => Level::Finite(-e),
        }
    }

    pub fn render(&self, decimal: Option<usize>) -> String {
        match (self, decimal) {
            (Level::Finite(e), Some(d)) => e.to_decimal(d),
            _ => self.to_string(),
        }
    }
}

impl From<Exponent> for Level {
    fn from(e: Exponent) -> Self {
        Level::Finite(e)
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::NegInf => f.write_str("-inf"),
            Level::PosInf => f.write_str("inf"),
            Level::Finite(e) => fmt::Display::fmt(e, f),
        }
    }
}

impl fmt::Debug for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Level {
    type Err = ParseExponentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "-inf" | "-∞" | "-infinity" => Ok(Level::NegInf),
            "inf" | "+inf" | "∞" | "infinity" | "+infinity" => Ok(Level::PosInf),
            other => other.parse().map(Level::Finite),
        }
    }
}

impl Serialize for Level {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Level {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rationals_in_lowest_terms() {
        let e: Exponent = "6/4".parse().unwrap();
        assert_eq!(e.to_string(), "3/2");
        assert_eq!("-0.25".parse::<Exponent>().unwrap(), Exponent::new(-1, 4));
        assert_eq!(".5".parse::<Exponent>().unwrap(), Exponent::new(1, 2));
        assert_eq!("7".parse::<Exponent>().unwrap(), Exponent::from_integer(7));
        assert!("1/0".parse::<Exponent>().is_err());
        assert!("abc".parse::<Exponent>().is_err());
        assert!("1.2.3".parse::<Exponent>().is_err());
    }

    #[test]
    fn level_order_and_arithmetic() {
        let a = Level::finite(3);
        assert!(Level::NegInf < a && a < Level::PosInf);
        assert_eq!(Level::NegInf.checked_add(&a), Some(Level::NegInf));
        assert_eq!(Level::NegInf.checked_add(&Level::PosInf), None);
        assert_eq!(a.checked_add(&Level::finite(-5)), Some(Level::finite(-2)));
        assert_eq!("-inf".parse::<Level>().unwrap(), Level::NegInf);
        assert_eq!(Level::PosInf.to_string(), "inf");
    }

    #[test]
    fn ceiling_and_decimal_rendering() {
        assert_eq!(Exponent::new(3, 2).ceil(), BigInt::from(2));
        assert_eq!(Exponent::new(-1, 2).ceil(), BigInt::from(0));
        assert_eq!(Exponent::new(2, 3).to_decimal(3), "0.667");
        assert_eq!(Exponent::new(-1, 8).to_decimal(2), "-0.13");
        assert_eq!(Exponent::from_integer(5).to_decimal(0), "5");
    }
}
