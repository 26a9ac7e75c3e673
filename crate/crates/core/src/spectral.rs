//! Spectral invariants of colimit classes and verifiers for persistence
//! algebras.
//!
//! A persistence algebra is a finite family of barcodes indexed by the
//! elements of a (partial) monoid of labels, a unit class in the identity
//! label's colimit, and a product table on colimit basis bars. Products must
//! respect filtration additivity: the output of `in₁·in₂` is born no later
//! than `birth(in₁) + birth(in₂)`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exponent::{Exponent, Level};
use crate::persistence::{Bar, Barcode, ColimitClass, PersistenceError};

/// `c(ζ)`: the largest birth among the half-infinite bars of `ζ`, or `−∞`
/// when `ζ` uses only fully infinite bars.
pub fn spectral_invariant(b: &Barcode, zeta: &ColimitClass) -> Result<Level, PersistenceError> {
    b.check_class(zeta)?;
    if zeta.is_zero() {
        return Err(PersistenceError::ZeroClass);
    }
    Ok(zeta
        .indices()
        .map(|i| b.bars[i].birth.clone())
        .max()
        .expect("nonzero class"))
}

/// `⌈c(ζ) / period⌉`, the least number of loop iterations reaching `ζ`.
pub fn integer_invariant_of(b: &Barcode, zeta: &ColimitClass, period: &Exponent) -> Result<BigInt, AlgebraError> {
    if !period.is_positive() {
        return Err(AlgebraError::NonPositivePeriod(period.clone()));
    }
    match spectral_invariant(b, zeta)? {
        Level::Finite(c) => Ok(c.checked_div(period).expect("period is positive").ceil()),
        _ => Err(AlgebraError::EternalClass),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("malformed algebra: {0}")]
    Malformed(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("product entry {entry} violates the shift rule: {detail}")]
    ShiftRule { entry: usize, detail: String },
    #[error("product entry {entry} contradicts the unit: {detail}")]
    UnitViolation { entry: usize, detail: String },
    #[error("label `{0}` has no inverse in the label set")]
    MissingInverse(String),
    #[error("label `{0}` has no unit class")]
    MissingUnit(String),
    #[error("the class is eternal, so the infimum is -inf")]
    EternalClass,
    #[error("loop period must be positive, got {0}")]
    NonPositivePeriod(Exponent),
    #[error(transparent)]
    Persistence(#[from] PersistenceError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleDoc {
    pub bars: Vec<Bar>,
    /// Unit class of this label as bar indices; the identity label may
    /// instead use the top-level `unit`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductEntry {
    pub g: String,
    pub h: String,
    pub in1: usize,
    pub in2: usize,
    pub out: Vec<usize>,
}

/// Declares that `to` is a relabeling of `from`: bar `i` of `from`
/// corresponds to bar `bars[i]` of `to`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conjugation {
    pub from: String,
    pub to: String,
    pub bars: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraDoc {
    pub labels: Vec<String>,
    pub identity: String,
    /// Partial composition table `(g, h, gh)`.
    #[serde(default)]
    pub compose: Vec<(String, String, String)>,
    #[serde(default)]
    pub inverse: BTreeMap<String, String>,
    pub modules: BTreeMap<String, ModuleDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<usize>,
    #[serde(default)]
    pub products: Vec<ProductEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub conjugations: Vec<Conjugation>,
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Invalid(#[from] AlgebraError),
}

#[derive(Debug, Clone)]
pub struct PersistenceAlgebra {
    doc: AlgebraDoc,
    barcodes: BTreeMap<String, Barcode>,
    units: BTreeMap<String, ColimitClass>,
    compose: HashMap<(String, String), String>,
}

/// Outcome of a verifier: the number of items inspected and the first
/// violation in table order, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub check: &'static str,
    pub checked: usize,
    pub violation: Option<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.violation {
            None => write!(f, "{}: pass ({} checked)", self.check, self.checked),
            Some(v) => write!(f, "{}: FAIL {}", self.check, v),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitEternal {
    pub eternal: bool,
    pub unit: ColimitClass,
    pub witness: String,
    /// Power-trick consistency check, present when the table contains the
    /// unit's self-product.
    pub cross_check: Option<Report>,
}

/// Powers checked by the unit cross-check.
const UNIT_POWERS: i64 = 8;

impl PersistenceAlgebra {
    pub fn load(text: &str) -> Result<Self, LoadError> {
        let doc: AlgebraDoc = serde_json::from_str(text)?;
        Ok(PersistenceAlgebra::from_doc(doc)?)
    }

    pub fn from_doc(doc: AlgebraDoc) -> Result<Self, AlgebraError> {
        let malformed = |m: String| AlgebraError::Malformed(m);
        let labels: BTreeSet<&String> = doc.labels.iter().collect();
        if labels.len() != doc.labels.len() {
            return Err(malformed("duplicate labels".into()));
        }
        let known = |l: &String| -> Result<(), AlgebraError> {
            if labels.contains(l) {
                Ok(())
            } else {
                Err(AlgebraError::UnknownLabel(l.clone()))
            }
        };
        known(&doc.identity)?;

        let mut compose = HashMap::new();
        for (g, h, gh) in &doc.compose {
            known(g)?;
            known(h)?;
            known(gh)?;
            if let Some(prev) = compose.insert((g.clone(), h.clone()), gh.clone()) {
                if prev != *gh {
                    return Err(malformed(format!("composition {g}·{h} defined twice")));
                }
            }
        }
        for (g, inv) in &doc.inverse {
            known(g)?;
            known(inv)?;
        }

        let mut barcodes = BTreeMap::new();
        let mut units = BTreeMap::new();
        for (label, module) in &doc.modules {
            known(label)?;
            let barcode = Barcode::new(module.bars.clone())?;
            let unit = match (&module.unit, label == &doc.identity, doc.unit) {
                (Some(u), _, _) => Some(ColimitClass::from_indices(u.iter().copied())),
                (None, true, Some(u)) => Some(ColimitClass::basis(u)),
                _ => None,
            };
            if let Some(u) = unit {
                barcode.check_class(&u)?;
                if u.is_zero() {
                    return Err(malformed(format!("unit of `{label}` is zero")));
                }
                units.insert(label.clone(), u);
            }
            barcodes.insert(label.clone(), barcode);
        }
        for label in &doc.labels {
            if !barcodes.contains_key(label) {
                return Err(malformed(format!("label `{label}` has no module")));
            }
        }
        if !units.contains_key(&doc.identity) {
            return Err(AlgebraError::MissingUnit(doc.identity.clone()));
        }

        let algebra = PersistenceAlgebra {
            doc,
            barcodes,
            units,
            compose,
        };
        algebra.validate_products()?;
        algebra.validate_conjugations()?;
        Ok(algebra)
    }

    fn validate_products(&self) -> Result<(), AlgebraError> {
        let identity = &self.doc.identity;
        let unit_bar = self.single_bar_unit(identity);
        for (n, e) in self.doc.products.iter().enumerate() {
            let gh = self.compose(&e.g, &e.h).ok_or_else(|| {
                AlgebraError::Malformed(format!("product entry {n}: composition {}·{} is undefined", e.g, e.h))
            })?;
            let (bg, bh, bgh) = (self.barcode(&e.g)?, self.barcode(&e.h)?, self.barcode(gh)?);
            bg.check_class(&ColimitClass::basis(e.in1))?;
            bh.check_class(&ColimitClass::basis(e.in2))?;
            let out = ColimitClass::from_indices(e.out.iter().copied());
            bgh.check_class(&out)?;

            // Entries with an eternal input are left to the ideal and
            // subadditivity verifiers.
            if let (Level::Finite(a), Level::Finite(b)) = (&bg.bars[e.in1].birth, &bh.bars[e.in2].birth) {
                let bound = Level::Finite(a + b);
                for i in out.indices() {
                    if bgh.bars[i].birth > bound {
                        return Err(AlgebraError::ShiftRule {
                            entry: n,
                            detail: format!("output bar {i} born at {} exceeds {a} + {b}", bgh.bars[i].birth),
                        });
                    }
                }
            }

            if let Some(u) = unit_bar {
                let expect = if e.g == *identity && e.in1 == u {
                    Some(ColimitClass::basis(e.in2))
                } else if e.h == *identity && e.in2 == u {
                    Some(ColimitClass::basis(e.in1))
                } else {
                    None
                };
                if let Some(expect) = expect {
                    if out != expect {
                        return Err(AlgebraError::UnitViolation {
                            entry: n,
                            detail: format!("unit product gives {out}, expected {expect}"),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    fn validate_conjugations(&self) -> Result<(), AlgebraError> {
        for c in &self.doc.conjugations {
            let (a, b) = (self.barcode(&c.from)?, self.barcode(&c.to)?);
            let image: BTreeSet<usize> = c.bars.iter().copied().collect();
            if c.bars.len() != a.len() || image.len() != b.len() || image.iter().any(|&i| i >= b.len()) {
                return Err(AlgebraError::Malformed(format!(
                    "conjugation {} -> {} is not a bijection of bars",
                    c.from, c.to
                )));
            }
        }
        Ok(())
    }

    fn single_bar_unit(&self, label: &str) -> Option<usize> {
        let u = self.units.get(label)?;
        (u.len() == 1).then(|| u.indices().next().expect("one index"))
    }

    pub fn doc(&self) -> &AlgebraDoc {
        &self.doc
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.doc).expect("algebra serializes")
    }

    pub fn labels(&self) -> &[String] {
        &self.doc.labels
    }

    pub fn identity(&self) -> &str {
        &self.doc.identity
    }

    pub fn barcode(&self, label: &str) -> Result<&Barcode, AlgebraError> {
        self.barcodes
            .get(label)
            .ok_or_else(|| AlgebraError::UnknownLabel(label.to_string()))
    }

    pub fn unit(&self, label: &str) -> Result<&ColimitClass, AlgebraError> {
        self.barcode(label)?;
        self.units
            .get(label)
            .ok_or_else(|| AlgebraError::MissingUnit(label.to_string()))
    }

    pub fn compose(&self, g: &str, h: &str) -> Option<&String> {
        self.compose.get(&(g.to_string(), h.to_string()))
    }

    pub fn inverse(&self, g: &str) -> Result<&String, AlgebraError> {
        self.barcode(g)?;
        self.doc
            .inverse
            .get(g)
            .ok_or_else(|| AlgebraError::MissingInverse(g.to_string()))
    }

    pub fn products(&self) -> &[ProductEntry] {
        &self.doc.products
    }

    pub fn spectral(&self, label: &str, zeta: &ColimitClass) -> Result<Level, AlgebraError> {
        Ok(spectral_invariant(self.barcode(label)?, zeta)?)
    }

    /// `c(1; g)`.
    pub fn unit_spectral(&self, label: &str) -> Result<Level, AlgebraError> {
        self.spectral(label, self.unit(label)?)
    }

    fn unit_pair(&self, g: &str) -> Result<(Level, Level), AlgebraError> {
        let inv = self.inverse(g)?.clone();
        Ok((self.unit_spectral(g)?, self.unit_spectral(&inv)?))
    }

    /// `γ(g) = c(1; g) + c(1; g⁻¹)`.
    pub fn oscillation(&self, g: &str) -> Result<Level, AlgebraError> {
        let (a, b) = self.unit_pair(g)?;
        Ok(a.checked_add(&b).expect("unit invariants are never +inf"))
    }

    /// `ν(g) = max(c(1; g), c(1; g⁻¹))`.
    pub fn pseudo_norm(&self, g: &str) -> Result<Level, AlgebraError> {
        let (a, b) = self.unit_pair(g)?;
        Ok(a.max(b))
    }

    pub fn integer_invariant(&self, g: &str, zeta: &ColimitClass, period: &Exponent) -> Result<BigInt, AlgebraError> {
        integer_invariant_of(self.barcode(g)?, zeta, period)
    }

    fn describe(&self, n: usize, e: &ProductEntry) -> String {
        let bar = |label: &str, i: usize| self.barcodes[label].bars[i].to_string();
        format!(
            "entry {n}: {}[{}]={} · {}[{}]={} -> {:?}",
            e.g,
            e.in1,
            bar(&e.g, e.in1),
            e.h,
            e.in2,
            bar(&e.h, e.in2),
            e.out
        )
    }

    /// `c(ζ₀ζ₁; gh) ≤ c(ζ₀; g) + c(ζ₁; h)` on every table entry.
    pub fn check_subadditivity(&self) -> Report {
        let mut report = Report {
            check: "subadditivity",
            checked: 0,
            violation: None,
        };
        for (n, e) in self.doc.products.iter().enumerate() {
            report.checked += 1;
            let out = ColimitClass::from_indices(e.out.iter().copied());
            if out.is_zero() {
                continue;
            }
            let gh = &self.compose[&(e.g.clone(), e.h.clone())];
            let lhs = spectral_invariant(&self.barcodes[gh], &out).expect("validated at load");
            let rhs = self.barcodes[&e.g].bars[e.in1]
                .birth
                .checked_add(&self.barcodes[&e.h].bars[e.in2].birth)
                .expect("births are never +inf");
            if lhs > rhs {
                report.violation = Some(format!("{}: c(out)={lhs} > {rhs}", self.describe(n, e)));
                return report;
            }
        }
        report
    }

    /// Products with an eternal input have eternal output.
    pub fn check_ideal(&self) -> Report {
        let mut report = Report {
            check: "ideal",
            checked: 0,
            violation: None,
        };
        for (n, e) in self.doc.products.iter().enumerate() {
            report.checked += 1;
            let eternal_input = self.barcodes[&e.g].bars[e.in1].is_full() || self.barcodes[&e.h].bars[e.in2].is_full();
            if !eternal_input {
                continue;
            }
            let gh = &self.compose[&(e.g.clone(), e.h.clone())];
            if let Some(&i) = e.out.iter().find(|&&i| !self.barcodes[gh].bars[i].is_full()) {
                report.violation = Some(format!(
                    "{}: eternal input but output bar {i}={} is not eternal",
                    self.describe(n, e),
                    self.barcodes[gh].bars[i]
                ));
                return report;
            }
        }
        report
    }

    /// Whether the unit lies in the eternal span, with the power-trick
    /// cross-check: if `1·1 = 1` is in the table and `1` is hit at some
    /// negative level `−ε`, it must be hit at `−kε` for every `k`.
    pub fn unit_eternal_criterion(&self) -> UnitEternal {
        let id = self.identity().to_string();
        let barcode = &self.barcodes[&id];
        let unit = self.units[&id].clone();
        let eternal = barcode.is_eternal(&unit).expect("validated at load");
        let witness = unit
            .indices()
            .map(|i| format!("bar {i}={}", barcode.bars[i]))
            .collect::<Vec<_>>()
            .join(" + ");

        let u = self.single_bar_unit(&id);
        let squares = self.doc.products.iter().any(|e| {
            e.g == id && e.h == id && Some(e.in1) == u && Some(e.in2) == u && e.out.len() == 1 && Some(e.out[0]) == u
        });
        let cross_check = squares.then(|| {
            let mut report = Report {
                check: "unit-power",
                checked: 0,
                violation: None,
            };
            let eps = match barcode.bars[u.expect("self-product found")].birth.clone() {
                Level::Finite(c) if c.is_negative() => -c,
                Level::NegInf => Exponent::one(),
                _ => return report,
            };
            for k in 1..=UNIT_POWERS {
                report.checked += 1;
                let s = Level::Finite(-(&eps * &Exponent::from_integer(k)));
                if !barcode.hits_at(&unit, &s).expect("validated at load") {
                    report.violation = Some(format!("unit hit at -{eps} but not at {s}"));
                    break;
                }
            }
            report
        });
        UnitEternal {
            eternal,
            unit,
            witness,
            cross_check,
        }
    }

    /// Declared relabelings preserve bars exactly and hence every integer
    /// invariant of a non-eternal basis bar.
    pub fn check_conjugations(&self, period: &Exponent) -> Report {
        let mut report = Report {
            check: "conjugation",
            checked: 0,
            violation: None,
        };
        for c in &self.doc.conjugations {
            let (a, b) = (&self.barcodes[&c.from], &self.barcodes[&c.to]);
            for (i, &j) in c.bars.iter().enumerate() {
                report.checked += 1;
                if a.bars[i] != b.bars[j] {
                    report.violation = Some(format!(
                        "{} -> {}: bar {i}={} maps to bar {j}={}",
                        c.from, c.to, a.bars[i], b.bars[j]
                    ));
                    return report;
                }
                if a.bars[i].is_right_infinite() && !a.bars[i].is_full() {
                    let x = integer_invariant_of(a, &ColimitClass::basis(i), period);
                    let y = integer_invariant_of(b, &ColimitClass::basis(j), period);
                    if x != y {
                        report.violation =
                            Some(format!("{} -> {}: integer invariant of bar {i} changes", c.from, c.to));
                        return report;
                    }
                }
            }
        }
        report
    }

    /// `γ ≥ 0` and `ν ≥ γ/2` on every label with an inverse and units,
    /// under the hypotheses that make `ν` a pseudo-norm.
    pub fn check_oscillation(&self) -> Report {
        let mut report = Report {
            check: "oscillation",
            checked: 0,
            violation: None,
        };
        let hypotheses = !self.unit_eternal_criterion().eternal
            && self.check_subadditivity().passed()
            && self.unit_spectral(self.identity()) == Ok(Level::finite(0));
        for g in &self.doc.labels {
            let (Ok(gamma), Ok(nu)) = (self.oscillation(g), self.pseudo_norm(g)) else {
                continue;
            };
            report.checked += 1;
            if hypotheses && gamma < Level::finite(0) {
                report.violation = Some(format!("gamma({g}) = {gamma} < 0"));
                return report;
            }
            let twice = nu.checked_add(&nu).expect("finite or -inf");
            if twice < gamma {
                report.violation = Some(format!("nu({g}) = {nu} < gamma/2 with gamma = {gamma}"));
                return report;
            }
        }
        report
    }

    /// All verifiers, in output order.
    pub fn verify(&self, period: &Exponent) -> Vec<Report> {
        let mut reports = vec![self.check_subadditivity(), self.check_ideal()];
        if let Some(cross) = self.unit_eternal_criterion().cross_check {
            reports.push(cross);
        }
        reports.push(self.check_conjugations(period));
        reports.push(self.check_oscillation());
        reports
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::persistence::Bar;

    fn barcode(bars: Vec<Bar>) -> Barcode {
        Barcode::new(bars).unwrap()
    }

    fn module(bars: Vec<Bar>, unit: Option<Vec<usize>>) -> ModuleDoc {
        ModuleDoc { bars, unit }
    }

    fn entry(g: &str, h: &str, in1: usize, in2: usize, out: &[usize]) -> ProductEntry {
        ProductEntry {
            g: g.into(),
            h: h.into(),
            in1,
            in2,
            out: out.to_vec(),
        }
    }

    fn one_label(bars: Vec<Bar>, products: Vec<ProductEntry>) -> AlgebraDoc {
        AlgebraDoc {
            labels: vec!["id".into()],
            identity: "id".into(),
            compose: vec![("id".into(), "id".into(), "id".into())],
            inverse: [("id".to_string(), "id".to_string())].into(),
            modules: [("id".to_string(), module(bars, None))].into(),
            unit: Some(0),
            products,
            conjugations: vec![],
        }
    }

    /// Unit `ℝ` with `1·1 = 1`.
    pub(crate) fn odd_euler_fixture() -> AlgebraDoc {
        one_label(vec![Bar::full()], vec![entry("id", "id", 0, 0, &[0])])
    }

    /// An eternal bar times a half-infinite bar lands on a half-infinite bar.
    pub(crate) fn ideal_violation_fixture() -> AlgebraDoc {
        one_label(
            vec![Bar::from(0), Bar::full(), Bar::from(1)],
            vec![entry("id", "id", 0, 0, &[0]), entry("id", "id", 1, 2, &[2])],
        )
    }

    /// `[1,∞)·[1,∞) → [3,∞)` breaks `3 ≤ 1 + 1`.
    pub(crate) fn shift_violation_fixture() -> AlgebraDoc {
        one_label(
            vec![Bar::from(0), Bar::from(1), Bar::from(3)],
            vec![entry("id", "id", 1, 1, &[2])],
        )
    }

    #[test]
    fn spectral_invariant_examples() {
        let b = barcode(vec![Bar::from(2)]);
        assert_eq!(spectral_invariant(&b, &ColimitClass::basis(0)), Ok(Level::finite(2)));
        let full = barcode(vec![Bar::full(), Bar::full()]);
        assert_eq!(
            spectral_invariant(&full, &ColimitClass::from_indices([0, 1])),
            Ok(Level::NegInf)
        );
        let mixed = barcode(vec![Bar::from(1), Bar::from(3), Bar::full()]);
        assert_eq!(
            spectral_invariant(&mixed, &ColimitClass::from_indices([0, 1, 2])),
            Ok(Level::finite(3))
        );
        assert_eq!(
            spectral_invariant(&mixed, &ColimitClass::zero()),
            Err(PersistenceError::ZeroClass)
        );
    }

    #[test]
    fn integer_invariant_examples() {
        let one = Exponent::one();
        for (birth, expect) in [
            (Exponent::one(), 1),
            (Exponent::new(3, 2), 2),
            (Exponent::new(-1, 2), 0),
        ] {
            let b = barcode(vec![Bar::from(birth)]);
            assert_eq!(
                integer_invariant_of(&b, &ColimitClass::basis(0), &one),
                Ok(BigInt::from(expect))
            );
        }
        let b = barcode(vec![Bar::full()]);
        assert_eq!(
            integer_invariant_of(&b, &ColimitClass::basis(0), &one),
            Err(AlgebraError::EternalClass)
        );
        assert!(matches!(
            integer_invariant_of(&b, &ColimitClass::basis(0), &Exponent::zero()),
            Err(AlgebraError::NonPositivePeriod(_))
        ));
    }

    #[test]
    fn shift_rule_is_enforced_at_load() {
        let err = PersistenceAlgebra::from_doc(shift_violation_fixture()).unwrap_err();
        assert!(matches!(err, AlgebraError::ShiftRule { entry: 0, .. }), "{err}");
    }

    #[test]
    fn unit_must_act_as_unit() {
        let doc = one_label(vec![Bar::from(0), Bar::from(1)], vec![entry("id", "id", 0, 1, &[0])]);
        assert!(matches!(
            PersistenceAlgebra::from_doc(doc),
            Err(AlgebraError::UnitViolation { entry: 0, .. })
        ));
    }

    #[test]
    fn trivial_algebra_passes_vacuously() {
        let a = PersistenceAlgebra::from_doc(one_label(vec![Bar::from(0)], vec![])).unwrap();
        assert!(a.check_subadditivity().passed());
        assert_eq!(a.check_subadditivity().checked, 0);
        assert_eq!(a.oscillation("id"), Ok(Level::finite(0)));
        assert_eq!(a.pseudo_norm("id"), Ok(Level::finite(0)));
    }

    #[test]
    fn unit_eternal_examples() {
        let full = PersistenceAlgebra::from_doc(odd_euler_fixture()).unwrap();
        let verdict = full.unit_eternal_criterion();
        assert!(verdict.eternal);
        assert!(verdict.cross_check.unwrap().passed());
        assert!(full.check_ideal().passed());

        let half =
            PersistenceAlgebra::from_doc(one_label(vec![Bar::from(0)], vec![entry("id", "id", 0, 0, &[0])])).unwrap();
        let verdict = half.unit_eternal_criterion();
        assert!(!verdict.eternal);
        assert!(verdict.cross_check.unwrap().passed());
    }

    #[test]
    fn planted_ideal_violation_is_reported() {
        let a = PersistenceAlgebra::from_doc(ideal_violation_fixture()).unwrap();
        let report = a.check_ideal();
        let v = report.violation.expect("planted violation");
        assert!(v.starts_with("entry 1:"), "{v}");
        assert!(!a.check_subadditivity().passed());
    }

    #[test]
    fn missing_inverse() {
        let mut doc = one_label(vec![Bar::from(0)], vec![]);
        doc.inverse.clear();
        let a = PersistenceAlgebra::from_doc(doc).unwrap();
        assert_eq!(a.oscillation("id"), Err(AlgebraError::MissingInverse("id".into())));
    }

    #[test]
    fn conjugation_preserves_integer_invariants() {
        let mut doc = one_label(vec![Bar::from(0)], vec![]);
        doc.labels.extend(["a".to_string(), "b".to_string()]);
        doc.modules.insert(
            "a".into(),
            module(vec![Bar::from(Exponent::new(3, 2)), Bar::full()], None),
        );
        doc.modules.insert(
            "b".into(),
            module(vec![Bar::full(), Bar::from(Exponent::new(3, 2))], None),
        );
        doc.conjugations.push(Conjugation {
            from: "a".into(),
            to: "b".into(),
            bars: vec![1, 0],
        });
        let a = PersistenceAlgebra::from_doc(doc.clone()).unwrap();
        assert!(a.check_conjugations(&Exponent::one()).passed());
        doc.conjugations[0].bars = vec![0, 1];
        let bad = PersistenceAlgebra::from_doc(doc).unwrap();
        assert!(!bad.check_conjugations(&Exponent::one()).passed());
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"labels":["id"],"identity":"id","compose":[["id","id","id"]],"inverse":{"id":"id"},
            "modules":{"id":{"bars":[{"birth":"-inf","death":"inf"}]}},"unit":0,
            "products":[{"g":"id","h":"id","in1":0,"in2":0,"out":[0]}]}"#;
        let a = PersistenceAlgebra::load(text).unwrap();
        let again = PersistenceAlgebra::load(&a.to_json()).unwrap();
        assert_eq!(a.doc(), again.doc());
        assert!(matches!(PersistenceAlgebra::load("{"), Err(LoadError::Json(_))));
    }
}
