//! Finite-support elements of the universal Novikov field over `Z/2`.
//!
//! An element is a finite sum `τ^{a_1} + … + τ^{a_m}` with exact rational
//! exponents. Addition is the symmetric difference of supports and
//! multiplication is discrete convolution mod 2. Inverses of non-monomials
//! are infinite series; [`NovikovScalar::div_window`] truncates them.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::exponent::{Exponent, Level};

/// Default truncation window for Novikov division.
pub const DEFAULT_WINDOW: i64 = 64;

/// Environment variable that overrides [`DEFAULT_WINDOW`].
pub const WINDOW_ENV: &str = "ETERNALBAR_WINDOW";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NovikovError {
    #[error("division by the zero element")]
    DivisionByZero,
    #[error("division window must be positive, got {0}")]
    NonPositiveWindow(Exponent),
}

/// Reads the division window from `ETERNALBAR_WINDOW`, falling back to the
/// default when unset or unparsable.
pub fn window_from_env() -> Exponent {
    std::env::var(WINDOW_ENV)
        .ok()
        .and_then(|s| s.parse::<Exponent>().ok())
        .filter(Exponent::is_positive)
        .unwrap_or_else(|| Exponent::from_integer(DEFAULT_WINDOW))
}

/// `Σ τ^{a_i}` with strictly increasing exponents.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct NovikovScalar {
    support: Vec<Exponent>,
}

impl NovikovScalar {
    pub fn zero() -> Self {
        NovikovScalar { support: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(Exponent::zero())
    }

    /// `τ^a`.
    pub fn monomial(a: Exponent) -> Self {
        NovikovScalar { support: vec![a] }
    }

    /// Builds an element from any list of exponents; repeated exponents
    /// cancel in pairs.
    pub fn from_exponents<I: IntoIterator<Item = Exponent>>(exponents: I) -> Self {
        let mut parity: BTreeMap<Exponent, bool> = BTreeMap::new();
        for e in exponents {
            let slot = parity.entry(e).or_insert(false);
            *slot = !*slot;
        }
        NovikovScalar {
            support: parity.into_iter().filter(|(_, odd)| *odd).map(|(e, _)| e).collect(),
        }
    }

    pub fn support(&self) -> &[Exponent] {
        &self.support
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.support.len() == 1
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// Minimum exponent of the support; `+∞` for zero.
    pub fn valuation(&self) -> Level {
        match self.support.first() {
            Some(e) => Level::Finite(e.clone()),
            None => Level::PosInf,
        }
    }

    pub fn leading_exponent(&self) -> Option<&Exponent> {
        self.support.first()
    }

    /// Multiplies by `τ^a`.
    pub fn shift(&self, a: &Exponent) -> Self {
        NovikovScalar {
            support: self.support.iter().map(|e| e + a).collect(),
        }
    }

    /// Drops every term with exponent strictly greater than `bound`.
    pub fn truncate_above(&self, bound: &Exponent) -> Self {
        NovikovScalar {
            support: self.support.iter().filter(|e| *e <= bound).cloned().collect(),
        }
    }

    /// Characteristic-2 sum: the symmetric difference of supports.
    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = (&self.support, &other.support);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        NovikovScalar { support: out }
    }

    /// Discrete convolution mod 2.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.is_monomial() {
            return other.shift(&self.support[0]);
        }
        if other.is_monomial() {
            return self.shift(&other.support[0]);
        }
        let mut sums = Vec::with_capacity(self.len() * other.len());
        for a in &self.support {
            for b in &other.support {
                sums.push(a + b);
            }
        }
        sums.sort_unstable();
        let mut out = Vec::new();
        let mut k = 0;
        while k < sums.len() {
            let mut run = 1;
            while k + run < sums.len() && sums[k + run] == sums[k] {
                run += 1;
            }
            if run % 2 == 1 {
                out.push(sums[k].clone());
            }
            k += run;
        }
        NovikovScalar { support: out }
    }

    /// Windowed division by iterated leading-term cancellation.
    ///
    /// Returns `q` with `val(self − q·divisor) > val(self) + window`. Every
    /// exponent of `q` is at most `val(self) − val(divisor) + window`.
    pub fn div_window(&self, divisor: &Self, window: &Exponent) -> Result<Self, NovikovError> {
        if divisor.is_zero() {
            return Err(NovikovError::DivisionByZero);
        }
        if !window.is_positive() {
            return Err(NovikovError::NonPositiveWindow(window.clone()));
        }
        let Some(start) = self.leading_exponent() else {
            return Ok(Self::zero());
        };
        let lead = divisor.support[0].clone();
        let target = start + window;
        if divisor.is_monomial() {
            return Ok(self.truncate_above(&target).shift(&-lead));
        }
        let mut quotient = Vec::new();
        // Terms above the target never feed back into lower leading terms.
        let mut remainder = self.truncate_above(&target);
        while let Some(v) = remainder.leading_exponent() {
            let step = v - &lead;
            remainder = remainder.add(&divisor.shift(&step).truncate_above(&target));
            quotient.push(step);
        }
        Ok(NovikovScalar { support: quotient })
    }

    /// Sorted list of exponent strings, e.g. `["0","3/2","5"]`.
    pub fn to_strings(&self) -> Vec<String> {
        self.support.iter().map(ToString::to_string).collect()
    }
}

impl Add for &NovikovScalar {
    type Output = NovikovScalar;
    fn add(self, rhs: &NovikovScalar) -> NovikovScalar {
        NovikovScalar::add(self, rhs)
    }
}

impl Mul for &NovikovScalar {
    type Output = NovikovScalar;
    fn mul(self, rhs: &NovikovScalar) -> NovikovScalar {
        NovikovScalar::mul(self, rhs)
    }
}

impl fmt::Display for NovikovScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.support.is_empty() {
            return f.write_str("0");
        }
        for (i, e) in self.support.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "τ^{e}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for NovikovScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for NovikovScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.support.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for NovikovScalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let exponents = Vec::<Exponent>::deserialize(deserializer)?;
        Ok(NovikovScalar::from_exponents(exponents))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(a: i64) -> NovikovScalar {
        NovikovScalar::monomial(Exponent::from_integer(a))
    }

    fn poly(exps: &[i64]) -> NovikovScalar {
        NovikovScalar::from_exponents(exps.iter().map(|&e| Exponent::from_integer(e)))
    }

    #[test]
    fn addition_examples() {
        assert!((&t(0) + &t(0)).is_zero());
        assert_eq!(&poly(&[0, 1]) + &poly(&[1, 2]), poly(&[0, 2]));
        let x = poly(&[-3, 0, 4]);
        assert_eq!(&x + &NovikovScalar::zero(), x);
    }

    #[test]
    fn multiplication_examples() {
        let a = Exponent::new(3, 2);
        let x = NovikovScalar::from_exponents([Exponent::zero(), a.clone()]);
        let expected = NovikovScalar::from_exponents([Exponent::zero(), &a + &a]);
        assert_eq!(&x * &x, expected);
        assert_eq!(&t(2) * &t(3), t(5));
        // (1 + τ)(1 + τ²) expanded by hand.
        assert_eq!(&poly(&[0, 1]) * &poly(&[0, 2]), poly(&[0, 1, 2, 3]));
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(poly(&[3, 5]).valuation(), Level::finite(3));
        assert_eq!(NovikovScalar::zero().valuation(), Level::PosInf);
    }

    #[test]
    fn division_examples() {
        let w = Exponent::from_integer(10);
        assert_eq!(t(2).div_window(&t(1), &w).unwrap(), t(1));
        assert!(NovikovScalar::zero().div_window(&poly(&[0, 1]), &w).unwrap().is_zero());
        assert_eq!(
            t(1).div_window(&NovikovScalar::zero(), &w),
            Err(NovikovError::DivisionByZero)
        );
        assert!(matches!(
            t(1).div_window(&t(0), &Exponent::zero()),
            Err(NovikovError::NonPositiveWindow(_))
        ));
    }

    #[test]
    fn geometric_series_division() {
        let window = Exponent::from_integer(3);
        let y = poly(&[0, 1]);
        let q = t(0).div_window(&y, &window).unwrap();
        // The residual τ^4 has valuation 4 > 0 + 3.
        assert_eq!(q, poly(&[0, 1, 2, 3]));
        let residual = &t(0) + &(&q * &y);
        assert_eq!(residual, t(4));
        // Stopping one term earlier leaves τ^3, which is not beyond the window.
        let short = poly(&[0, 1, 2]);
        assert_eq!((&t(0) + &(&short * &y)).valuation(), Level::finite(3));
    }

    #[test]
    fn serialization_is_sorted_exponent_strings() {
        let x = NovikovScalar::from_exponents([Exponent::from_integer(5), Exponent::new(3, 2), Exponent::zero()]);
        assert_eq!(serde_json::to_string(&x).unwrap(), r#"["0","3/2","5"]"#);
        let back: NovikovScalar = serde_json::from_str(r#"["5","0","3/2","1","1"]"#).unwrap();
        assert_eq!(back, x);
    }

    fn arb_scalar() -> impl Strategy<Value = NovikovScalar> {
        prop::collection::vec((-6i64..6, 1i64..4), 0..5)
            .prop_map(|terms| NovikovScalar::from_exponents(terms.into_iter().map(|(n, d)| Exponent::new(n, d))))
    }

    proptest! {
        #[test]
        fn ring_axioms(x in arb_scalar(), y in arb_scalar(), z in arb_scalar()) {
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert!((&x + &x).is_zero());
        }

        #[test]
        fn valuation_is_multiplicative(x in arb_scalar(), y in arb_scalar()) {
            prop_assume!(!x.is_zero() && !y.is_zero());
            let lhs = (&x * &y).valuation();
            let rhs = x.valuation().checked_add(&y.valuation()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn division_residual_is_beyond_window(x in arb_scalar(), y in arb_scalar(), w in 1i64..8) {
            prop_assume!(!x.is_zero() && !y.is_zero());
            let window = Exponent::from_integer(w);
            let q = x.div_window(&y, &window).unwrap();
            let residual = &x + &(&q * &y);
            let bound = x.valuation().checked_add(&Level::Finite(window.clone())).unwrap();
            prop_assert!(residual.valuation() > bound);
            let cap = x.leading_exponent().unwrap() - y.leading_exponent().unwrap() + window;
            prop_assert!(q.support().iter().all(|e| *e <= cap));
        }
    }
}
