//! Exact real numbers of the form `q₀ + Σ qᵢ·√rᵢ` with rational `qᵢ`.
//!
//! Maxima of linear functions over spherical cells are norms of rational
//! vectors, so they live in this field extension rather than in ℚ.
//!
//! Invariant: radicands are > 1, pairwise in distinct square classes
//! (`rᵢ·rⱼ` is never a perfect square) and carry nonzero coefficients. Square
//! roots of distinct square-free integers are linearly independent over ℚ,
//! so a value is zero iff it has no terms, and comparison reduces to the
//! sign of a nonzero number, decided by interval refinement.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exponent::Exponent;

/// Square factors of primes below this bound are pulled out of radicands;
/// the rest is handled by the square-class merge, so this only affects
/// how values print.
const SMALL_PRIME_BOUND: u32 = 1000;

#[derive(Clone, Default)]
pub struct Real {
    rational: BigRational,
    surds: Vec<(BigUint, BigRational)>,
}

fn perfect_sqrt(n: &BigUint) -> Option<BigUint> {
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Writes `n = f²·m` with the square part of small primes moved into `f`.
fn extract_square(n: &BigUint) -> (BigUint, BigUint) {
    let mut m = n.clone();
    let mut f = BigUint::one();
    if let Some(r) = perfect_sqrt(&m) {
        return (r, BigUint::one());
    }
    let mut p = 2u32;
    while p < SMALL_PRIME_BOUND {
        let pp = BigUint::from(p * p);
        while (&m % &pp).is_zero() {
            m /= &pp;
            f *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if let Some(r) = perfect_sqrt(&m) {
        return (f * r, BigUint::one());
    }
    (f, m)
}

fn big_uint(x: &BigInt) -> BigUint {
    x.magnitude().clone()
}

impl Real {
    pub fn zero() -> Self {
        Real::default()
    }

    pub fn from_rational(q: BigRational) -> Self {
        Real {
            rational: q,
            surds: Vec::new(),
        }
    }

    pub fn from_exponent(e: &Exponent) -> Self {
        Real::from_rational(e.as_big().clone())
    }

    pub fn from_integer(n: i64) -> Self {
        Real::from_rational(BigRational::from_integer(n.into()))
    }

    /// `√q` for rational `q ≥ 0`; `None` for negative input.
    pub fn sqrt(q: &BigRational) -> Option<Self> {
        if q.is_negative() {
            return None;
        }
        // √(p/d) = √(p·d) / d.
        let d = big_uint(q.denom());
        let radicand = big_uint(q.numer()) * &d;
        let mut out = Real::zero();
        out.push_surd(radicand, BigRational::new(1.into(), BigInt::from(d)));
        Some(out)
    }

    fn push_surd(&mut self, radicand: BigUint, coeff: BigRational) {
        if coeff.is_zero() || radicand.is_zero() {
            return;
        }
        let (f, m) = extract_square(&radicand);
        let coeff = coeff * BigRational::from_integer(BigInt::from(f));
        if m.is_one() {
            self.rational += coeff;
            return;
        }
        for i in 0..self.surds.len() {
            let s = &self.surds[i].0;
            if let Some(root) = perfect_sqrt(&(&m * s)) {
                // √m = (√(m·s) / s)·√s.
                let ratio = BigRational::new(BigInt::from(root), BigInt::from(s.clone()));
                self.surds[i].1 += coeff * ratio;
                if self.surds[i].1.is_zero() {
                    self.surds.remove(i);
                }
                return;
            }
        }
        let at = self.surds.partition_point(|(r, _)| *r < m);
        self.surds.insert(at, (m, coeff));
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.surds.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.surds.is_empty()
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.rational.clone())
    }

    pub fn to_exponent(&self) -> Option<Exponent> {
        self.to_rational().map(Exponent::from_big)
    }

    pub fn scale(&self, q: &BigRational) -> Real {
        if q.is_zero() {
            return Real::zero();
        }
        Real {
            rational: &self.rational * q,
            surds: self.surds.iter().map(|(r, c)| (r.clone(), c * q)).collect(),
        }
    }

    /// Enclosure `[lo, hi]` of the value with each surd bracketed to
    /// `2^-bits`.
    fn enclosure(&self, bits: u32) -> (BigRational, BigRational) {
        let mut lo = self.rational.clone();
        let mut hi = self.rational.clone();
        let scale = BigUint::one() << (2 * bits as usize);
        let denom = BigInt::one() << bits as usize;
        for (r, c) in &self.surds {
            let a = BigInt::from((r * &scale).sqrt());
            let below = BigRational::new(a.clone(), denom.clone());
            let above = BigRational::new(a + 1, denom.clone());
            if c.is_positive() {
                lo += c * &below;
                hi += c * &above;
            } else {
                lo += c * &above;
                hi += c * &below;
            }
        }
        (lo, hi)
    }

    pub fn signum(&self) -> Ordering {
        if self.surds.is_empty() {
            return self.rational.cmp(&BigRational::zero());
        }
        let mut bits = 32;
        loop {
            let (lo, hi) = self.enclosure(bits);
            if lo.is_positive() {
                return Ordering::Greater;
            }
            if hi.is_negative() {
                return Ordering::Less;
            }
            bits *= 2;
        }
    }

    pub fn to_f64(&self) -> f64 {
        let mut x = self.rational.to_f64().unwrap_or(f64::NAN);
        for (r, c) in &self.surds {
            x += c.to_f64().unwrap_or(f64::NAN) * r.to_f64().unwrap_or(f64::NAN).sqrt();
        }
        x
    }

    /// A rational within `10^-digits / 4` of the value.
    pub fn approximate(&self, digits: usize) -> BigRational {
        if self.surds.is_empty() {
            return self.rational.clone();
        }
        let target = BigRational::new(1.into(), BigInt::from(10u32).pow(digits as u32) * 4);
        let mut bits = 32;
        loop {
            let (lo, hi) = self.enclosure(bits);
            if &hi - &lo < target {
                return (lo + hi) / BigRational::from_integer(2.into());
            }
            bits *= 2;
        }
    }

    pub fn to_decimal(&self, digits: usize) -> String {
        Exponent::from_big(self.approximate(digits + 2)).to_decimal(digits)
    }

    pub fn max(self, other: Real) -> Real {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Real) -> Real {
        if other < self {
            other
        } else {
            self
        }
    }
}

impl From<Exponent> for Real {
    fn from(e: Exponent) -> Self {
        Real::from_rational(e.into_big())
    }
}

impl From<i64> for Real {
    fn from(n: i64) -> Self {
        Real::from_integer(n)
    }
}

impl Add<&Real> for &Real {
    type Output = Real;
    fn add(self, rhs: &Real) -> Real {
        let mut out = self.clone();
        out.rational += &rhs.rational;
        for (r, c) in &rhs.surds {
            out.push_surd(r.clone(), c.clone());
        }
        out
    }
}

impl Add for Real {
    type Output = Real;
    fn add(self, rhs: Real) -> Real {
        &self + &rhs
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real {
            rational: -&self.rational,
            surds: self.surds.iter().map(|(r, c)| (r.clone(), -c)).collect(),
        }
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        -&self
    }
}

impl Sub<&Real> for &Real {
    type Output = Real;
    fn sub(self, rhs: &Real) -> Real {
        self + &(-rhs)
    }
}

impl Sub for Real {
    type Output = Real;
    fn sub(self, rhs: Real) -> Real {
        &self - &rhs
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }
}

impl Eq for Real {}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Real {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

fn write_sign(f: &mut fmt::Formatter<'_>, c: &BigRational, first: bool) -> fmt::Result {
    match (first, c.is_negative()) {
        (true, true) => f.write_str("-"),
        (true, false) => Ok(()),
        (false, true) => f.write_str(" - "),
        (false, false) => f.write_str(" + "),
    }
}

impl fmt::Display for Real {
    /// Exact rendering, e.g. `1/2 + 3√2 - (2/5)√7`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        if !self.rational.is_zero() || self.surds.is_empty() {
            write!(f, "{}", Exponent::from_big(self.rational.clone()))?;
            first = false;
        }
        for (r, c) in &self.surds {
            write_sign(f, c, first)?;
            first = false;
            let m = c.abs();
            if m.is_one() {
                // Unit coefficient prints as a bare root.
            } else if m.is_integer() {
                write!(f, "{}", m.numer())?;
            } else {
                write!(f, "({}/{})", m.numer(), m.denom())?;
            }
            write!(f, "√{r}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn root(n: i64) -> Real {
        Real::sqrt(&q(n, 1)).unwrap()
    }

    #[test]
    fn perfect_squares_are_rational() {
        assert_eq!(root(25), Real::from_integer(5));
        assert_eq!(Real::sqrt(&q(9, 4)).unwrap().to_rational(), Some(q(3, 2)));
        assert!(Real::sqrt(&q(-1, 1)).is_none());
    }

    #[test]
    fn equal_square_classes_merge() {
        // √8 = 2√2 and √(1/2) = √2/2.
        let x = &root(8) - &(&root(2) + &root(2));
        assert!(x.is_zero());
        let half = Real::sqrt(&q(1, 2)).unwrap();
        assert_eq!(half.scale(&q(2, 1)), root(2));
        // Square factor of a prime beyond the trial bound.
        let big = 1_000_003i64;
        let r = Real::sqrt(&q(2 * big * big, 1)).unwrap();
        assert_eq!(r, root(2).scale(&q(big, 1)));
    }

    #[test]
    fn comparison_is_exact() {
        assert!(root(2) + root(3) < root(10));
        assert!(root(2) + root(3) > Real::from(Exponent::new(314, 100)));
        assert!(root(2) + root(3) < Real::from(Exponent::new(315, 100)));
        assert!(root(50) - root(49) > Real::zero());
        let tight = &root(1_000_001) - &Real::from_integer(1000);
        assert!(tight > Real::zero() && tight < Real::from(Exponent::new(1, 1999)));
    }

    #[test]
    fn rendering() {
        assert_eq!(root(2).to_string(), "√2");
        assert_eq!((Real::from(Exponent::new(1, 2)) - root(12)).to_string(), "1/2 - 2√3");
        assert_eq!(Real::sqrt(&q(2, 9)).unwrap().to_string(), "(1/3)√2");
        assert_eq!(Real::zero().to_string(), "0");
        assert_eq!(root(2).to_decimal(6), "1.414214");
    }

    proptest! {
        #[test]
        fn order_matches_floating_point_when_separated(a in 0i64..200, b in 0i64..200, c in 0i64..200, s in -5i64..5) {
            let x = &(&root(a) + &root(b).scale(&q(s, 1))) - &root(c);
            let f = (a as f64).sqrt() + s as f64 * (b as f64).sqrt() - (c as f64).sqrt();
            if f.abs() > 1e-9 {
                prop_assert_eq!(x.signum(), if f > 0.0 { Ordering::Greater } else { Ordering::Less });
            }
            prop_assert!((x.to_f64() - f).abs() < 1e-9);
        }

        #[test]
        fn addition_is_a_group(a in 0i64..100, b in 0i64..100, n in -9i64..9) {
            let x = &root(a) + &Real::from_integer(n);
            let y = root(b);
            prop_assert_eq!(&(&x + &y) - &y, x.clone());
            prop_assert!((&x - &x).is_zero());
            prop_assert_eq!(&x + &y, &y + &x);
        }
    }
}
