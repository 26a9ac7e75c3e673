//! One-parameter persistence modules over `Z/2`.
//!
//! A module is given by a finite presentation: generators born at some
//! level (possibly `−∞`) and relations imposed at a level (`+∞` means the
//! relation is absent). Its barcode is computed by the standard column
//! reduction, pairing each relation with the youngest generator left in its
//! reduced support.
//!
//! Bars are half-open `[birth, death)`. Bars with `death = +∞` form a basis
//! of the colimit; those that also have `birth = −∞` span the eternal
//! subspace, the image of the limit.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exponent::{Exponent, Level};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PersistenceError {
    #[error("malformed presentation: {0}")]
    MalformedPresentation(String),
    #[error("malformed barcode: {0}")]
    MalformedBarcode(String),
    #[error("class references bar {0}, which is not a right-infinite bar of this barcode")]
    BasisMismatch(usize),
    #[error("the zero class has no spectral invariant")]
    ZeroClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationGenerator {
    pub id: String,
    pub birth: Level,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub level: Level,
    /// Z/2 combination of generator ids; repeated ids cancel.
    pub support: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct Presentation {
    pub generators: Vec<PresentationGenerator>,
    #[serde(default)]
    pub relations: Vec<Relation>,
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bar {
    pub birth: Level,
    pub death: Level,
}

impl Bar {
    pub fn new(birth: Level, death: Level) -> Self {
        Bar { birth, death }
    }

    /// The fully infinite bar `ℝ`.
    pub fn full() -> Self {
        Bar::new(Level::NegInf, Level::PosInf)
    }

    /// `[a, ∞)`.
    pub fn from(a: impl Into<Exponent>) -> Self {
        Bar::new(Level::Finite(a.into()), Level::PosInf)
    }

    pub fn finite(b: impl Into<Exponent>, d: impl Into<Exponent>) -> Self {
        Bar::new(Level::Finite(b.into()), Level::Finite(d.into()))
    }

    pub fn is_right_infinite(&self) -> bool {
        self.death == Level::PosInf
    }

    pub fn is_left_infinite(&self) -> bool {
        self.birth == Level::NegInf
    }

    pub fn is_full(&self) -> bool {
        self.is_left_infinite() && self.is_right_infinite()
    }

    pub fn contains(&self, s: &Level) -> bool {
        self.birth <= *s && *s < self.death
    }

    /// Whether the bar contains the whole interval `[s, t]`.
    pub fn contains_interval(&self, s: &Level, t: &Level) -> bool {
        self.birth <= *s && *t < self.death
    }

    fn validate(&self) -> Result<(), String> {
        if self.birth == Level::PosInf || self.death == Level::NegInf {
            return Err(format!("bar {self:?} has an infinite endpoint on the wrong side"));
        }
        if self.birth >= self.death {
            return Err(format!("bar {self:?} is empty (birth must be below death)"));
        }
        Ok(())
    }
}

impl fmt::Debug for Bar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.birth, &self.death) {
            (Level::NegInf, Level::PosInf) => f.write_str("ℝ"),
            (Level::NegInf, d) => write!(f, "(-inf,{d})"),
            (b, d) => write!(f, "[{b},{d})"),
        }
    }
}

impl fmt::Display for Bar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct Barcode {
    pub bars: Vec<Bar>,
}

/// A Z/2 combination of right-infinite bars of one barcode, by bar index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct ColimitClass {
    bars: BTreeSet<usize>,
}

impl ColimitClass {
    pub fn zero() -> Self {
        ColimitClass::default()
    }

    pub fn basis(index: usize) -> Self {
        ColimitClass::from_indices([index])
    }

    /// Repeated indices cancel.
    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        let mut bars = BTreeSet::new();
        for i in indices {
            if !bars.remove(&i) {
                bars.insert(i);
            }
        }
        ColimitClass { bars }
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.bars.iter().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.bars.is_empty()
    }

    pub fn len(&self) -> usize {
        self.bars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    pub fn add(&self, other: &ColimitClass) -> ColimitClass {
        ColimitClass {
            bars: self.bars.symmetric_difference(&other.bars).copied().collect(),
        }
    }

    /// Parses `0,2,3` into a class.
    pub fn parse_spec(spec: &str) -> Result<ColimitClass, String> {
        let mut out = Vec::new();
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            out.push(
                part.parse::<usize>()
                    .map_err(|_| format!("`{part}` is not a bar index"))?,
            );
        }
        Ok(ColimitClass::from_indices(out))
    }
}

impl fmt::Display for ColimitClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.bars.iter().map(|i| i.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Barcode together with, for each right-infinite bar, the generator whose
/// class spans it in the colimit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub barcode: Barcode,
    pub representatives: Vec<Option<usize>>,
}

impl Presentation {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn validate(&self) -> Result<(), PersistenceError> {
        let bad = |m: String| Err(PersistenceError::MalformedPresentation(m));
        let mut index: HashMap<&str, usize> = HashMap::new();
        for (i, g) in self.generators.iter().enumerate() {
            if index.insert(g.id.as_str(), i).is_some() {
                return bad(format!("duplicate generator id `{}`", g.id));
            }
            if g.birth == Level::PosInf {
                return bad(format!("generator `{}` is born at +inf", g.id));
            }
        }
        for (r, rel) in self.relations.iter().enumerate() {
            if rel.level == Level::NegInf {
                return bad(format!("relation {r} is imposed at -inf"));
            }
            let mut live = BTreeSet::new();
            for id in &rel.support {
                let Some(&g) = index.get(id.as_str()) else {
                    return bad(format!("relation {r} names unknown generator `{id}`"));
                };
                if !live.remove(&g) {
                    live.insert(g);
                }
            }
            if live.is_empty() {
                return bad(format!("relation {r} has empty support"));
            }
            for &g in &live {
                if rel.level < self.generators[g].birth {
                    return bad(format!(
                        "relation {r} at level {} precedes the birth {} of `{}`",
                        rel.level, self.generators[g].birth, self.generators[g].id
                    ));
                }
            }
        }
        Ok(())
    }

    /// Generator indices of a relation's support, with cancellation.
    fn support_indices(&self, rel: &Relation) -> BTreeSet<usize> {
        let index: HashMap<&str, usize> = self
            .generators
            .iter()
            .enumerate()
            .map(|(i, g)| (g.id.as_str(), i))
            .collect();
        let mut live = BTreeSet::new();
        for id in &rel.support {
            let g = index[id.as_str()];
            if !live.remove(&g) {
                live.insert(g);
            }
        }
        live
    }

    pub fn barcode(&self) -> Result<Barcode, PersistenceError> {
        Ok(self.decompose()?.barcode)
    }

    pub fn decompose(&self) -> Result<Decomposition, PersistenceError> {
        self.validate()?;
        let n = self.generators.len();
        // Generators ordered by (birth, input index); a larger rank is younger.
        let mut by_age: Vec<usize> = (0..n).collect();
        by_age.sort_by(|&a, &b| self.generators[a].birth.cmp(&self.generators[b].birth).then(a.cmp(&b)));
        let mut rank_of = vec![0; n];
        for (rank, &g) in by_age.iter().enumerate() {
            rank_of[g] = rank;
        }

        let mut relations: Vec<usize> = (0..self.relations.len())
            .filter(|&r| self.relations[r].level != Level::PosInf)
            .collect();
        relations.sort_by(|&a, &b| self.relations[a].level.cmp(&self.relations[b].level).then(a.cmp(&b)));

        let mut owner: HashMap<usize, BTreeSet<usize>> = HashMap::new();
        let mut death: Vec<Option<Level>> = vec![None; n];
        for r in relations {
            let mut column: BTreeSet<usize> = self
                .support_indices(&self.relations[r])
                .iter()
                .map(|&g| rank_of[g])
                .collect();
            while let Some(&pivot) = column.iter().next_back() {
                match owner.get(&pivot) {
                    Some(other) => column = column.symmetric_difference(other).copied().collect(),
                    None => break,
                }
            }
            if let Some(&pivot) = column.iter().next_back() {
                death[by_age[pivot]] = Some(self.relations[r].level.clone());
                owner.insert(pivot, column);
            }
        }

        let mut bars: Vec<(Bar, Option<usize>)> = Vec::new();
        for &g in &by_age {
            let birth = self.generators[g].birth.clone();
            match &death[g] {
                Some(d) if *d > birth => bars.push((Bar::new(birth, d.clone()), None)),
                Some(_) => {}
                None => bars.push((Bar::new(birth, Level::PosInf), Some(g))),
            }
        }
        // Stable sort keeps the generator age order among equal bars.
        bars.sort_by(|a, b| a.0.birth.cmp(&b.0.birth).then(a.0.death.cmp(&b.0.death)));
        let (bars, representatives) = bars.into_iter().unzip();
        Ok(Decomposition {
            barcode: Barcode { bars },
            representatives,
        })
    }
}

impl Barcode {
    pub fn new(bars: Vec<Bar>) -> Result<Self, PersistenceError> {
        let b = Barcode { bars };
        b.validate()?;
        Ok(b)
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("barcode serializes")
    }

    pub fn validate(&self) -> Result<(), PersistenceError> {
        for bar in &self.bars {
            bar.validate().map_err(PersistenceError::MalformedBarcode)?;
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.bars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    /// Disjoint union.
    pub fn union(&self, other: &Barcode) -> Barcode {
        Barcode {
            bars: self.bars.iter().chain(&other.bars).cloned().collect(),
        }
    }

    /// Number of bars containing `s`, i.e. the pointwise dimension.
    pub fn rank_at(&self, s: &Level) -> usize {
        self.bars.iter().filter(|b| b.contains(s)).count()
    }

    /// Indices of the right-infinite bars, ordered by birth then position.
    pub fn colim_basis(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.bars.len())
            .filter(|&i| self.bars[i].is_right_infinite())
            .collect();
        idx.sort_by(|&a, &b| self.bars[a].birth.cmp(&self.bars[b].birth).then(a.cmp(&b)));
        idx
    }

    /// Indices of the fully infinite bars.
    pub fn eternal_subspace(&self) -> Vec<usize> {
        self.colim_basis()
            .into_iter()
            .filter(|&i| self.bars[i].is_full())
            .collect()
    }

    pub fn check_class(&self, zeta: &ColimitClass) -> Result<(), PersistenceError> {
        for i in zeta.indices() {
            match self.bars.get(i) {
                Some(bar) if bar.is_right_infinite() => {}
                _ => return Err(PersistenceError::BasisMismatch(i)),
            }
        }
        Ok(())
    }

    /// Whether `ζ` lies in the image of `V_s → colim`.
    pub fn hits_at(&self, zeta: &ColimitClass, s: &Level) -> Result<bool, PersistenceError> {
        self.check_class(zeta)?;
        Ok(zeta.indices().all(|i| self.bars[i].birth <= *s))
    }

    pub fn is_eternal(&self, zeta: &ColimitClass) -> Result<bool, PersistenceError> {
        self.check_class(zeta)?;
        Ok(zeta.indices().all(|i| self.bars[i].is_full()))
    }

    /// Rank of the cone of `lim → colim`: one per bar `[a, ∞)` or `(−∞, d)`
    /// with `a`, `d` finite.
    pub fn rfh_rank(&self) -> usize {
        self.bars
            .iter()
            .filter(|b| b.is_right_infinite() != b.is_left_infinite())
            .count()
    }

    /// Every finite endpoint, sorted and deduplicated.
    pub fn critical_values(&self) -> Vec<Exponent> {
        let mut v: Vec<Exponent> = self
            .bars
            .iter()
            .flat_map(|b| [b.birth.as_finite().cloned(), b.death.as_finite().cloned()])
            .flatten()
            .collect();
        v.sort();
        v.dedup();
        v
    }

    /// ASCII rendering in the style of a barcode plot: fully infinite bars
    /// run edge to edge, half-infinite bars carry one endpoint.
    pub fn render(&self, width: usize) -> String {
        let width = width.max(16);
        let crit = self.critical_values();
        let (lo, hi) = match (crit.first(), crit.last()) {
            (Some(a), Some(b)) if a < b => (a.to_f64(), b.to_f64()),
            (Some(a), _) => (a.to_f64() - 1.0, a.to_f64() + 1.0),
            _ => (-1.0, 1.0),
        };
        let inner = width - 4;
        let column = |e: &Exponent| -> usize {
            let t = (e.to_f64() - lo) / (hi - lo);
            2 + (t * (inner - 1) as f64).round() as usize
        };
        let mut lines = Vec::new();
        let mut order: Vec<usize> = (0..self.bars.len()).collect();
        order.sort_by(|&a, &b| {
            let (x, y) = (&self.bars[a], &self.bars[b]);
            y.is_full()
                .cmp(&x.is_full())
                .then(x.birth.cmp(&y.birth))
                .then(x.death.cmp(&y.death))
                .then(a.cmp(&b))
        });
        for i in order {
            let bar = &self.bars[i];
            let mut row = vec![b' '; width];
            let start = match &bar.birth {
                Level::Finite(b) => column(b),
                _ => 0,
            };
            let end = match &bar.death {
                Level::Finite(d) => column(d),
                _ => width - 1,
            };
            for cell in row.iter_mut().take(end + 1).skip(start) {
                *cell = b'-';
            }
            row[start] = if bar.is_left_infinite() { b'<' } else { b'[' };
            row[end] = if bar.is_right_infinite() { b'>' } else { b')' };
            let mut line = String::from_utf8(row).expect("ascii");
            line.push_str(&format!("  {i}: {bar}"));
            if bar.is_full() {
                line.push_str(" (eternal)");
            }
            lines.push(line);
        }
        let axis = format!(
            "{:<w$}{}",
            format!("  {}", crit.first().map(|e| e.to_string()).unwrap_or_default()),
            crit.last().map(|e| e.to_string()).unwrap_or_default(),
            w = width - 2
        );
        lines.push(axis);
        lines.join("\n")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gen(id: &str, birth: Level) -> PresentationGenerator {
        PresentationGenerator { id: id.into(), birth }
    }

    fn rel(level: i64, support: &[&str]) -> Relation {
        Relation {
            level: Level::finite(level),
            support: support.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub(crate) fn three_eternal() -> Barcode {
        Barcode::new(vec![
            Bar::full(),
            Bar::full(),
            Bar::full(),
            Bar::finite(-4, 0),
            Bar::finite(2, 5),
        ])
        .unwrap()
    }

    #[test]
    fn free_rank_one_module() {
        let p = Presentation {
            generators: vec![gen("g", Level::finite(0))],
            relations: vec![],
        };
        assert_eq!(p.barcode().unwrap().bars, vec![Bar::from(0)]);
    }

    #[test]
    fn relation_kills_the_younger_generator() {
        let p = Presentation {
            generators: vec![gen("g1", Level::finite(0)), gen("g2", Level::finite(1))],
            relations: vec![rel(3, &["g1", "g2"])],
        };
        assert_eq!(p.barcode().unwrap().bars, vec![Bar::from(0), Bar::finite(1, 3)]);
    }

    #[test]
    fn constant_module_is_a_full_bar() {
        let p = Presentation {
            generators: vec![gen("e", Level::NegInf)],
            relations: vec![],
        };
        assert_eq!(p.barcode().unwrap().bars, vec![Bar::full()]);
    }

    #[test]
    fn malformed_presentations_are_rejected() {
        let early = Presentation {
            generators: vec![gen("g", Level::finite(2))],
            relations: vec![rel(1, &["g"])],
        };
        assert!(matches!(
            early.barcode(),
            Err(PersistenceError::MalformedPresentation(_))
        ));
        let cancelled = Presentation {
            generators: vec![gen("g", Level::finite(0))],
            relations: vec![rel(1, &["g", "g"])],
        };
        assert!(cancelled.barcode().is_err());
        let unknown = Presentation {
            generators: vec![gen("g", Level::finite(0))],
            relations: vec![rel(1, &["h"])],
        };
        assert!(unknown.barcode().is_err());
    }

    #[test]
    fn redundant_and_absent_relations_produce_no_bars() {
        let p = Presentation {
            generators: vec![gen("g", Level::finite(0))],
            relations: vec![
                rel(1, &["g"]),
                rel(2, &["g"]),
                Relation {
                    level: Level::PosInf,
                    support: vec!["g".into()],
                },
            ],
        };
        assert_eq!(p.barcode().unwrap().bars, vec![Bar::finite(0, 1)]);
        let instant = Presentation {
            generators: vec![gen("g", Level::finite(1))],
            relations: vec![rel(1, &["g"])],
        };
        assert!(instant.barcode().unwrap().is_empty());
    }

    #[test]
    fn colimit_basis_examples() {
        let b = Barcode::new(vec![Bar::full(), Bar::from(0), Bar::finite(1, 3)]).unwrap();
        assert_eq!(b.colim_basis(), vec![0, 1]);
        assert!(Barcode::default().colim_basis().is_empty());
        assert_eq!(three_eternal().colim_basis().len(), 3);
    }

    #[test]
    fn eternal_subspace_examples() {
        let b = three_eternal();
        assert_eq!(b.eternal_subspace().len(), 3);
        let sum = ColimitClass::from_indices([0, 1, 2]);
        assert!(b.is_eternal(&sum).unwrap());
        assert!(Barcode::new(vec![Bar::from(0)]).unwrap().eternal_subspace().is_empty());
        assert_eq!(
            Barcode::new(vec![Bar::full(), Bar::full()])
                .unwrap()
                .eternal_subspace()
                .len(),
            2
        );
    }

    #[test]
    fn hits_at_examples() {
        let b = Barcode::new(vec![Bar::from(2), Bar::full(), Bar::finite(0, 1)]).unwrap();
        let half = ColimitClass::basis(0);
        assert!(b.hits_at(&half, &Level::finite(3)).unwrap());
        assert!(!b.hits_at(&half, &Level::finite(1)).unwrap());
        let full = ColimitClass::basis(1);
        for s in [-100, 0, 100] {
            assert!(b.hits_at(&full, &Level::finite(s)).unwrap());
        }
        assert_eq!(
            b.hits_at(&ColimitClass::basis(2), &Level::finite(0)),
            Err(PersistenceError::BasisMismatch(2))
        );
        assert_eq!(
            b.hits_at(&ColimitClass::basis(9), &Level::finite(0)),
            Err(PersistenceError::BasisMismatch(9))
        );
    }

    #[test]
    fn rfh_rank_examples() {
        assert_eq!(Barcode::new(vec![Bar::full()]).unwrap().rfh_rank(), 0);
        assert_eq!(Barcode::new(vec![Bar::from(0)]).unwrap().rfh_rank(), 1);
        let dual = Barcode::new(vec![Bar::new(Level::NegInf, Level::finite(3))]).unwrap();
        assert_eq!(dual.rfh_rank(), 1);
        assert_eq!(three_eternal().rfh_rank(), 0);
    }

    #[test]
    fn invalid_bars_are_rejected() {
        assert!(Barcode::new(vec![Bar::finite(3, 3)]).is_err());
        assert!(Barcode::new(vec![Bar::new(Level::PosInf, Level::PosInf)]).is_err());
        let parsed = Barcode::from_json(r#"{"bars":[{"birth":"2","death":"1"}]}"#).unwrap();
        assert!(parsed.validate().is_err());
    }

    #[test]
    fn json_interfaces() {
        let text = r#"{"generators":[{"id":"g1","birth":"0"},{"id":"g2","birth":"1"},{"id":"e1","birth":"-inf"}],
            "relations":[{"level":"3","support":["g1","g2"]}]}"#;
        let p = Presentation::from_json(text).unwrap();
        let b = p.barcode().unwrap();
        assert_eq!(
            b.to_json(),
            r#"{"bars":[{"birth":"-inf","death":"inf"},{"birth":"0","death":"inf"},{"birth":"1","death":"3"}]}"#
        );
        assert_eq!(Barcode::from_json(&b.to_json()).unwrap(), b);
    }

    #[test]
    fn render_marks_full_and_half_bars() {
        let text = three_eternal().render(40);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.iter().filter(|l| l.contains("(eternal)")).count(), 3);
        assert!(lines[0].starts_with('<') && lines[0].contains('>'));
        assert!(lines.iter().any(|l| l.contains("[-4,0)")));
    }

    fn arb_presentation() -> impl Strategy<Value = Presentation> {
        (
            1usize..6,
            prop::collection::vec((0i64..6, 0u8..64), 0..6),
            prop::collection::vec(-1i64..5, 6),
        )
            .prop_map(|(n, rels, births)| {
                let generators: Vec<_> = (0..n)
                    .map(|i| {
                        gen(
                            &format!("g{i}"),
                            if births[i] < 0 {
                                Level::NegInf
                            } else {
                                Level::finite(births[i])
                            },
                        )
                    })
                    .collect();
                let relations = rels
                    .into_iter()
                    .filter_map(|(lvl, mask)| {
                        let support: Vec<String> = (0..n)
                            .filter(|i| mask >> i & 1 == 1)
                            .map(|i| generators[i].id.clone())
                            .collect();
                        let max_birth = support
                            .iter()
                            .map(|id| generators.iter().find(|g| &g.id == id).unwrap().birth.clone())
                            .max()?;
                        let level = match max_birth {
                            Level::Finite(b) => Level::Finite(b + Exponent::from_integer(lvl)),
                            _ => Level::finite(lvl),
                        };
                        Some(Relation { level, support })
                    })
                    .collect();
                Presentation { generators, relations }
            })
    }

    fn sorted(b: &Barcode) -> Vec<Bar> {
        let mut v = b.bars.clone();
        v.sort_by(|a, b| a.birth.cmp(&b.birth).then(a.death.cmp(&b.death)));
        v
    }

    proptest! {
        #[test]
        fn barcode_is_invariant_under_permutation(p in arb_presentation(), seed in 0u64..1000) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut q = p.clone();
            q.generators.shuffle(&mut rng);
            q.relations.shuffle(&mut rng);
            prop_assert_eq!(sorted(&p.barcode().unwrap()), sorted(&q.barcode().unwrap()));
        }

        #[test]
        fn rfh_rank_is_additive(p in arb_presentation(), q in arb_presentation()) {
            let (a, b) = (p.barcode().unwrap(), q.barcode().unwrap());
            prop_assert_eq!(a.union(&b).rfh_rank(), a.rfh_rank() + b.rfh_rank());
        }
    }
}
