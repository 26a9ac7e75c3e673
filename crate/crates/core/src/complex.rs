//! Filtered chain complexes over the Novikov field.
//!
//! A complex is a finite set of generators, each with an action value and a
//! free-homotopy label, and a differential `d(y) = Σ τ^{area} x`. The
//! non-archimedean filtration of a chain is
//! `ℓ(Σ τ^{b_i} x_i) = −min_i (b_i + action(x_i))`, with `ℓ(0) = −∞`.
//!
//! Linear algebra over the field is done fraction-free: elimination steps
//! replace `v` by `c_b·v + c_v·b`, which never needs an inverse, so ranks,
//! kernels and span membership are exact. The minimal filtration level of a
//! class uses an orthogonal basis of the boundary space, built by cancelling
//! leading monomials; windowed division only appears when a representative
//! realising the minimum is written back with finite coefficients.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exponent::{Exponent, Level};
use crate::novikov::{self, NovikovScalar};

/// Free homotopy label of a generator; `"0"` is the contractible class.
pub type HomotopyLabel = String;

pub const CONTRACTIBLE: &str = "0";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub id: String,
    pub action: Exponent,
    #[serde(default = "contractible")]
    pub hclass: HomotopyLabel,
    /// Conley–Zehnder style metadata; carried, never interpreted.
    #[serde(default)]
    pub grading: Option<i64>,
}

fn contractible() -> HomotopyLabel {
    CONTRACTIBLE.to_string()
}

impl Generator {
    pub fn new(id: impl Into<String>, action: Exponent) -> Self {
        Generator {
            id: id.into(),
            action,
            hclass: contractible(),
            grading: None,
        }
    }

    pub fn with_class(mut self, hclass: impl Into<String>) -> Self {
        self.hclass = hclass.into();
        self
    }
}

/// A complex as read from its JSON document. Construction does not validate;
/// [`FilteredComplex::verify`] reports the first violated invariant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilteredComplex {
    generators: Vec<Generator>,
    /// Source id to `(target id, area)` entries. Repeated entries cancel.
    #[serde(default)]
    boundary: BTreeMap<String, Vec<(String, Exponent)>>,
}

/// A finite combination `Σ λ_x · x` with nonzero Novikov coefficients.
#[derive(Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Chain {
    terms: BTreeMap<String, NovikovScalar>,
}

impl Chain {
    pub fn zero() -> Self {
        Chain::default()
    }

    /// `τ^a · id`.
    pub fn monomial(id: impl Into<String>, a: Exponent) -> Self {
        let mut c = Chain::zero();
        c.add_term(id, &NovikovScalar::monomial(a));
        c
    }

    pub fn add_term(&mut self, id: impl Into<String>, coefficient: &NovikovScalar) {
        let id = id.into();
        let next = match self.terms.get(&id) {
            Some(old) => old + coefficient,
            None => coefficient.clone(),
        };
        if next.is_zero() {
            self.terms.remove(&id);
        } else {
            self.terms.insert(id, next);
        }
    }

    pub fn add(&self, other: &Chain) -> Chain {
        let mut out = self.clone();
        for (id, c) in &other.terms {
            out.add_term(id.clone(), c);
        }
        out
    }

    pub fn scale(&self, lambda: &NovikovScalar) -> Chain {
        let mut out = Chain::zero();
        for (id, c) in &self.terms {
            out.add_term(id.clone(), &(c * lambda));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, id: &str) -> Option<&NovikovScalar> {
        self.terms.get(id)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&String, &NovikovScalar)> {
        self.terms.iter()
    }

    /// Parses `x1, x2@3/2, y@0` as `τ^0 x1 + τ^{3/2} x2 + τ^0 y`.
    pub fn parse_spec(spec: &str) -> Result<Chain, ComplexError> {
        let mut chain = Chain::zero();
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (id, exp) = match part.split_once('@') {
                Some((id, e)) => (
                    id.trim(),
                    e.trim()
                        .parse::<Exponent>()
                        .map_err(|e| ComplexError::BadChainSpec(e.to_string()))?,
                ),
                None => (part, Exponent::zero()),
            };
            if id.is_empty() {
                return Err(ComplexError::BadChainSpec(format!("empty generator id in `{part}`")));
            }
            chain.add_term(id, &NovikovScalar::monomial(exp));
        }
        Ok(chain)
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (id, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if c.is_monomial() {
                write!(f, "{c}·{id}")?;
            } else {
                write!(f, "({c})·{id}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// First violated invariant found by [`FilteredComplex::verify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DuplicateId(String),
    UnknownGenerator {
        source: String,
        target: String,
    },
    NegativeArea {
        source: String,
        target: String,
        area: Exponent,
    },
    CrossClass {
        source: String,
        target: String,
        source_class: String,
        target_class: String,
    },
    /// `d(d(source))` has coefficient `τ^exponent` on `target`, reached via `via`.
    NonzeroSquare {
        source: String,
        via: String,
        target: String,
        exponent: Exponent,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateId(id) => write!(f, "duplicate generator id `{id}`"),
            Violation::UnknownGenerator { source, target } => {
                write!(f, "boundary entry {source} -> {target} names an unknown generator")
            }
            Violation::NegativeArea { source, target, area } => {
                write!(f, "negative area {area} on boundary entry {source} -> {target}")
            }
            Violation::CrossClass {
                source,
                target,
                source_class,
                target_class,
            } => write!(
                f,
                "boundary entry {source} -> {target} crosses homotopy classes {source_class} -> {target_class}"
            ),
            Violation::NonzeroSquare {
                source,
                via,
                target,
                exponent,
            } => write!(f, "d∘d ≠ 0: {source} -> {via} -> {target} leaves τ^{exponent}·{target}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("complex fails verification: {0}")]
    Invalid(Box<Violation>),
    #[error("chain mentions unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("chain is not a cycle")]
    NotACycle,
    #[error("the class is zero; its minimal filtration level is -inf")]
    ZeroClass,
    #[error("reduction did not settle within the division window {window}")]
    TruncationOverflow { window: Exponent },
    #[error("malformed chain spec: {0}")]
    BadChainSpec(String),
}

/// A homology class together with a cycle representing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyClass {
    pub hclass: HomotopyLabel,
    pub representative: Chain,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homology {
    pub rank: usize,
    pub classes: Vec<HomologyClass>,
}

/// Result of [`FilteredComplex::min_filtration`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinFiltration {
    pub level: Exponent,
    /// A cycle homologous to the input. When `exact` is false its level sits
    /// above `level` because a windowed quotient was truncated.
    pub representative: Chain,
    pub exact: bool,
}

type Dense = Vec<NovikovScalar>;

impl FilteredComplex {
    pub fn new(generators: Vec<Generator>, boundary: BTreeMap<String, Vec<(String, Exponent)>>) -> Self {
        FilteredComplex { generators, boundary }
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("complex serializes")
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn raw_boundary(&self) -> &BTreeMap<String, Vec<(String, Exponent)>> {
        &self.boundary
    }

    fn index(&self) -> HashMap<&str, usize> {
        self.generators
            .iter()
            .enumerate()
            .map(|(i, g)| (g.id.as_str(), i))
            .collect()
    }

    /// `d(id)` as a chain, with repeated `(target, area)` entries cancelled.
    pub fn boundary_of_generator(&self, id: &str) -> Chain {
        let mut chain = Chain::zero();
        if let Some(entries) = self.boundary.get(id) {
            for (target, area) in entries {
                chain.add_term(target.clone(), &NovikovScalar::monomial(area.clone()));
            }
        }
        chain
    }

    /// Applies the differential to a chain.
    pub fn boundary(&self, z: &Chain) -> Chain {
        let mut out = Chain::zero();
        for (id, c) in z.terms() {
            out = out.add(&self.boundary_of_generator(id).scale(c));
        }
        out
    }

    #[allow(clippy::result_large_err)]
    pub fn verify(&self) -> Result<(), Violation> {
        let mut seen = BTreeSet::new();
        for g in &self.generators {
            if !seen.insert(g.id.as_str()) {
                return Err(Violation::DuplicateId(g.id.clone()));
            }
        }
        let index = self.index();
        for (source, entries) in &self.boundary {
            for (target, _) in entries {
                if !index.contains_key(source.as_str()) || !index.contains_key(target.as_str()) {
                    return Err(Violation::UnknownGenerator {
                        source: source.clone(),
                        target: target.clone(),
                    });
                }
            }
        }
        for g in &self.generators {
            for (target, area) in self.boundary.get(&g.id).into_iter().flatten() {
                if area.is_negative() {
                    return Err(Violation::NegativeArea {
                        source: g.id.clone(),
                        target: target.clone(),
                        area: area.clone(),
                    });
                }
            }
        }
        for g in &self.generators {
            for (target, _) in self.boundary.get(&g.id).into_iter().flatten() {
                let t = &self.generators[index[target.as_str()]];
                if t.hclass != g.hclass {
                    return Err(Violation::CrossClass {
                        source: g.id.clone(),
                        target: target.clone(),
                        source_class: g.hclass.clone(),
                        target_class: t.hclass.clone(),
                    });
                }
            }
        }
        for g in &self.generators {
            let first = self.boundary_of_generator(&g.id);
            let second = self.boundary(&first);
            let leftover = second
                .terms()
                .next()
                .map(|(t, c)| (t.clone(), c.leading_exponent().cloned().unwrap_or_default()));
            if let Some((target, exponent)) = leftover {
                let via = first
                    .terms()
                    .find(|(x, c)| {
                        self.boundary_of_generator(x).coefficient(&target).is_some_and(|dc| {
                            c.support()
                                .iter()
                                .any(|a| dc.support().iter().any(|b| a + b == exponent))
                        })
                    })
                    .map(|(x, _)| x.clone())
                    .unwrap_or_default();
                return Err(Violation::NonzeroSquare {
                    source: g.id.clone(),
                    via,
                    target,
                    exponent,
                });
            }
        }
        Ok(())
    }

    fn ensure_valid(&self) -> Result<(), ComplexError> {
        self.verify().map_err(|v| ComplexError::Invalid(Box::new(v)))
    }

    /// `ℓ(z) = −min (exponent + action)` over the monomials of `z`.
    pub fn filtration_level(&self, z: &Chain) -> Result<Level, ComplexError> {
        let index = self.index();
        let mut best: Option<Exponent> = None;
        for (id, c) in z.terms() {
            let i = *index
                .get(id.as_str())
                .ok_or_else(|| ComplexError::UnknownGenerator(id.clone()))?;
            let w = c.leading_exponent().expect("nonzero coefficient") + &self.generators[i].action;
            if best.as_ref().is_none_or(|b| w < *b) {
                best = Some(w);
            }
        }
        Ok(match best {
            Some(w) => Level::Finite(-w),
            None => Level::NegInf,
        })
    }

    /// Restriction to each free homotopy label.
    pub fn split_by_class(&self) -> Result<BTreeMap<HomotopyLabel, FilteredComplex>, ComplexError> {
        self.ensure_valid()?;
        let mut out: BTreeMap<HomotopyLabel, FilteredComplex> = BTreeMap::new();
        for g in &self.generators {
            let piece = out
                .entry(g.hclass.clone())
                .or_insert_with(|| FilteredComplex::new(Vec::new(), BTreeMap::new()));
            piece.generators.push(g.clone());
            if let Some(entries) = self.boundary.get(&g.id) {
                piece.boundary.insert(g.id.clone(), entries.clone());
            }
        }
        Ok(out)
    }

    /// Direct sum of complexes with disjoint generator ids.
    pub fn direct_sum<'a, I: IntoIterator<Item = &'a FilteredComplex>>(pieces: I) -> FilteredComplex {
        let mut out = FilteredComplex::new(Vec::new(), BTreeMap::new());
        for p in pieces {
            out.generators.extend(p.generators.iter().cloned());
            for (k, v) in &p.boundary {
                out.boundary.entry(k.clone()).or_default().extend(v.iter().cloned());
            }
        }
        out
    }

    fn frame(&self) -> Frame {
        let mut by_id: Vec<usize> = (0..self.generators.len()).collect();
        by_id.sort_by(|&a, &b| self.generators[a].id.cmp(&self.generators[b].id));
        let mut tiebreak = vec![0; self.generators.len()];
        for (rank, &i) in by_id.iter().enumerate() {
            tiebreak[i] = rank;
        }
        Frame {
            weights: self.generators.iter().map(|g| g.action.clone()).collect(),
            tiebreak,
        }
    }

    fn dense(&self, z: &Chain) -> Result<Dense, ComplexError> {
        let index = self.index();
        let mut v = vec![NovikovScalar::zero(); self.generators.len()];
        for (id, c) in z.terms() {
            let i = *index
                .get(id.as_str())
                .ok_or_else(|| ComplexError::UnknownGenerator(id.clone()))?;
            v[i] = c.clone();
        }
        Ok(v)
    }

    fn sparse(&self, v: &[NovikovScalar]) -> Chain {
        let mut chain = Chain::zero();
        for (g, c) in self.generators.iter().zip(v) {
            if !c.is_zero() {
                chain.add_term(g.id.clone(), c);
            }
        }
        chain
    }

    fn boundary_columns(&self) -> Vec<Dense> {
        self.generators
            .iter()
            .map(|g| self.dense(&self.boundary_of_generator(&g.id)).expect("verified ids"))
            .collect()
    }

    /// Rank of the differential over the Novikov field.
    pub fn boundary_rank(&self) -> Result<usize, ComplexError> {
        self.ensure_valid()?;
        let frame = self.frame();
        let mut span = ExactSpan::default();
        for col in self.boundary_columns() {
            span.insert(&frame, col);
        }
        Ok(span.rank())
    }

    /// Homology over the Novikov field, one homotopy label at a time, with
    /// a cycle representative per basis class.
    pub fn homology(&self) -> Result<Homology, ComplexError> {
        let mut classes = Vec::new();
        for (label, piece) in self.split_by_class()? {
            for representative in piece.homology_representatives() {
                classes.push(HomologyClass {
                    hclass: label.clone(),
                    representative,
                });
            }
        }
        Ok(Homology {
            rank: classes.len(),
            classes,
        })
    }

    fn homology_representatives(&self) -> Vec<Chain> {
        let frame = self.frame();
        let n = self.generators.len();
        let columns = self.boundary_columns();
        let mut images = ExactSpan::default();
        let mut kernel = Vec::new();
        let mut tracked: Vec<(usize, Dense, Dense)> = Vec::new();
        for (j, col) in columns.iter().enumerate() {
            let mut v = col.clone();
            let mut t = unit_vector(n, j);
            for (p, b, tb) in &tracked {
                if !v[*p].is_zero() {
                    let (cb, cv) = (b[*p].clone(), v[*p].clone());
                    v = combine(&cb, &v, &cv, b);
                    t = combine(&cb, &t, &cv, tb);
                }
            }
            match frame.leading(&v) {
                None => kernel.push(t),
                Some((p, _)) => tracked.push((p, v, t)),
            }
            images.insert(&frame, col.clone());
        }
        let mut chosen = Vec::new();
        for t in kernel {
            if images.insert(&frame, t.clone()) {
                chosen.push(self.sparse(&normalize(t)));
            }
        }
        chosen
    }

    /// Infimum of `ℓ` over all cycles homologous to `z`.
    pub fn min_filtration(&self, z: &Chain) -> Result<MinFiltration, ComplexError> {
        self.min_filtration_with_window(z, &novikov::window_from_env())
    }

    pub fn min_filtration_with_window(&self, z: &Chain, window: &Exponent) -> Result<MinFiltration, ComplexError> {
        self.ensure_valid()?;
        let target = self.dense(z)?;
        if !self.boundary(z).is_zero() {
            return Err(ComplexError::NotACycle);
        }
        if target.iter().all(NovikovScalar::is_zero) {
            return Err(ComplexError::ZeroClass);
        }
        let frame = self.frame();
        let overflow = || ComplexError::TruncationOverflow { window: window.clone() };

        let mut exact = ExactSpan::default();
        let mut basis = OrthogonalBasis::default();
        for col in self.boundary_columns() {
            if exact.insert(&frame, col.clone()) {
                basis.push(&frame, col, window).map_err(|_| overflow())?;
            }
        }
        if !exact.clone().insert(&frame, target.clone()) {
            return Err(ComplexError::ZeroClass);
        }
        let reduced = basis.reduce(&frame, target, window, true).map_err(|_| overflow())?;
        let (_, weight) = frame.leading(&reduced.vector).expect("class is nonzero");
        let scale_val = reduced.scale.leading_exponent().expect("nonzero scale").clone();
        let level = -(weight - &scale_val);

        // z + Σ (μ_j / c) b_j, with the quotients truncated at the window.
        let mut representative = z.clone();
        for (mu, (_, b)) in reduced.multipliers.iter().zip(&basis.vectors) {
            if mu.is_zero() {
                continue;
            }
            let q = mu.div_window(&reduced.scale, window).expect("nonzero scale");
            representative = representative.add(&self.sparse(b).scale(&q));
        }
        let achieved = self.filtration_level(&representative)?;
        let exact = achieved == Level::Finite(level.clone());
        Ok(MinFiltration {
            level,
            representative,
            exact,
        })
    }
}

/// Generator weights and the tie-break order used to pick leading terms.
struct Frame {
    weights: Vec<Exponent>,
    tiebreak: Vec<usize>,
}

impl Frame {
    /// Index and weight of the minimal monomial, ties broken by generator id.
    fn leading(&self, v: &[NovikovScalar]) -> Option<(usize, Exponent)> {
        let mut best: Option<(usize, Exponent)> = None;
        for (i, c) in v.iter().enumerate() {
            let Some(e) = c.leading_exponent() else { continue };
            let w = e + &self.weights[i];
            let better = match &best {
                None => true,
                Some((j, bw)) => w < *bw || (w == *bw && self.tiebreak[i] < self.tiebreak[*j]),
            };
            if better {
                best = Some((i, w));
            }
        }
        best
    }
}

fn unit_vector(n: usize, j: usize) -> Dense {
    let mut v = vec![NovikovScalar::zero(); n];
    v[j] = NovikovScalar::one();
    v
}

/// `a·x + b·y` (characteristic 2, so no signs).
fn combine(a: &NovikovScalar, x: &[NovikovScalar], b: &NovikovScalar, y: &[NovikovScalar]) -> Dense {
    x.iter().zip(y).map(|(xi, yi)| &(a * xi) + &(b * yi)).collect()
}

/// Divides out the monomial `τ^m`, `m` the smallest exponent present.
fn normalize(v: Dense) -> Dense {
    let Some(m) = v.iter().filter_map(|c| c.leading_exponent()).min().cloned() else {
        return v;
    };
    let shift = -m;
    v.iter().map(|c| c.shift(&shift)).collect()
}

/// Fraction-free echelon form used for exact rank and span membership.
#[derive(Default, Clone)]
struct ExactSpan {
    rows: Vec<(usize, Dense)>,
}

impl ExactSpan {
    fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Inserts `v`; returns false when `v` already lies in the span.
    fn insert(&mut self, frame: &Frame, mut v: Dense) -> bool {
        for (p, b) in &self.rows {
            if !v[*p].is_zero() {
                let (cb, cv) = (b[*p].clone(), v[*p].clone());
                v = combine(&cb, &v, &cv, b);
            }
        }
        match frame.leading(&v) {
            None => false,
            Some((p, _)) => {
                self.rows.push((p, normalize(v)));
                true
            }
        }
    }
}

/// Basis whose vectors have pairwise distinct leading generators, so the
/// leading monomial of any combination is the least of the summands'.
#[derive(Default)]
struct OrthogonalBasis {
    vectors: Vec<(usize, Dense)>,
}

struct Reduced {
    vector: Dense,
    /// Accumulated factor `c` with `vector = c·input + Σ multipliers_j · b_j`.
    scale: NovikovScalar,
    multipliers: Vec<NovikovScalar>,
}

struct Unsettled;

const MAX_REDUCTION_STEPS: usize = 100_000;

impl OrthogonalBasis {
    fn pivot_of(&self, index: usize) -> Option<usize> {
        self.vectors.iter().position(|(p, _)| *p == index)
    }

    /// Cancels leading monomials of `v` until its leading generator is not a
    /// pivot. `v` must lie outside the span, otherwise this cannot settle.
    fn reduce(&self, frame: &Frame, mut v: Dense, window: &Exponent, prune: bool) -> Result<Reduced, Unsettled> {
        let (_, start) = frame.leading(&v).ok_or(Unsettled)?;
        let cap = &start + window;
        let mut scale = NovikovScalar::one();
        let mut multipliers = vec![NovikovScalar::zero(); self.vectors.len()];
        for _ in 0..MAX_REDUCTION_STEPS {
            let (p, weight) = frame.leading(&v).ok_or(Unsettled)?;
            let scale_val = scale.leading_exponent().expect("nonzero").clone();
            if &weight - &scale_val > cap {
                return Err(Unsettled);
            }
            let Some(j) = self.pivot_of(p) else {
                return Ok(Reduced {
                    vector: v,
                    scale,
                    multipliers,
                });
            };
            let b = &self.vectors[j].1;
            let (cb, cv) = (b[p].clone(), v[p].clone());
            v = combine(&cb, &v, &cv, b);
            scale = &scale * &cb;
            for m in multipliers.iter_mut() {
                *m = &*m * &cb;
            }
            multipliers[j] = &multipliers[j] + &cv;
            if prune {
                // Terms beyond the cap cannot become leading before the cap is hit.
                let bound = &cap + scale.leading_exponent().expect("nonzero");
                for (i, c) in v.iter_mut().enumerate() {
                    *c = c.truncate_above(&(&bound - &frame.weights[i]));
                }
            }
        }
        Err(Unsettled)
    }

    fn push(&mut self, frame: &Frame, v: Dense, window: &Exponent) -> Result<(), Unsettled> {
        let reduced = self.reduce(frame, v, window, false)?;
        let (p, _) = frame.leading(&reduced.vector).ok_or(Unsettled)?;
        self.vectors.push((p, normalize(reduced.vector)));
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: i64) -> Exponent {
        Exponent::from_integer(n)
    }

    fn complex(gens: &[(&str, i64)], boundary: &[(&str, &[(&str, i64)])]) -> FilteredComplex {
        FilteredComplex::new(
            gens.iter().map(|(id, a)| Generator::new(*id, e(*a))).collect(),
            boundary
                .iter()
                .map(|(s, ts)| (s.to_string(), ts.iter().map(|(t, a)| (t.to_string(), e(*a))).collect()))
                .collect(),
        )
    }

    #[test]
    fn verify_accepts_zero_differential() {
        assert_eq!(complex(&[("x", 0), ("y", 1)], &[]).verify(), Ok(()));
    }

    #[test]
    fn verify_reports_nonzero_square_with_path() {
        let c = complex(
            &[("x", 0), ("x2", 0), ("y", 0)],
            &[("y", &[("x", 0)]), ("x", &[("x2", 0)])],
        );
        assert_eq!(
            c.verify(),
            Err(Violation::NonzeroSquare {
                source: "y".into(),
                via: "x".into(),
                target: "x2".into(),
                exponent: e(0),
            })
        );
    }

    #[test]
    fn verify_reports_negative_area() {
        let c = complex(&[("x", 0), ("y", 0)], &[("y", &[("x", -1)])]);
        assert!(matches!(c.verify(), Err(Violation::NegativeArea { .. })));
        assert!(c.verify().unwrap_err().to_string().contains("negative area"));
    }

    #[test]
    fn verify_reports_cross_class_and_unknown_ids() {
        let mut c = complex(&[("x", 0), ("y", 0)], &[("y", &[("x", 0)])]);
        c.generators[1].hclass = "k1".into();
        assert!(matches!(c.verify(), Err(Violation::CrossClass { .. })));
        assert!(matches!(c.split_by_class(), Err(ComplexError::Invalid(_))));
        let d = complex(&[("x", 0)], &[("y", &[("x", 0)])]);
        assert!(matches!(d.verify(), Err(Violation::UnknownGenerator { .. })));
        let dup = complex(&[("x", 0), ("x", 1)], &[]);
        assert_eq!(dup.verify(), Err(Violation::DuplicateId("x".into())));
    }

    #[test]
    fn repeated_entries_cancel() {
        let c = complex(&[("x", 0), ("y", 0)], &[("y", &[("x", 2), ("x", 2)])]);
        assert!(c.boundary_of_generator("y").is_zero());
        assert_eq!(c.homology().unwrap().rank, 2);
    }

    #[test]
    fn filtration_level_examples() {
        let c = complex(&[("x", 0), ("y", 0)], &[]);
        assert_eq!(
            c.filtration_level(&Chain::monomial("x", e(0))).unwrap(),
            Level::finite(0)
        );
        let z = Chain::monomial("x", e(2)).add(&Chain::monomial("y", e(5)));
        assert_eq!(c.filtration_level(&z).unwrap(), Level::finite(-2));
        assert_eq!(c.filtration_level(&Chain::zero()).unwrap(), Level::NegInf);
    }

    #[test]
    fn level_sign_convention_includes_action() {
        let c = FilteredComplex::new(vec![Generator::new("x", Exponent::new(3, 2))], BTreeMap::new());
        let z = Chain::monomial("x", e(2));
        // ℓ(τ^b x) = −(b + action(x)).
        assert_eq!(c.filtration_level(&z).unwrap(), Level::Finite(Exponent::new(-7, 2)));
    }

    #[test]
    fn homology_rank_examples() {
        assert_eq!(complex(&[("x", 0), ("y", 0)], &[]).homology().unwrap().rank, 2);
        assert_eq!(
            complex(&[("x", 0), ("y", 0)], &[("y", &[("x", 0)])])
                .homology()
                .unwrap()
                .rank,
            0
        );
        let c = complex(&[("x1", 0), ("x2", 0), ("y", 0)], &[("y", &[("x1", 1), ("x2", 1)])]);
        let h = c.homology().unwrap();
        assert_eq!(h.rank, 1);
        for class in &h.classes {
            assert!(c.boundary(&class.representative).is_zero());
        }
    }

    #[test]
    fn min_filtration_examples() {
        let c = complex(&[("x", 0)], &[]);
        assert_eq!(c.min_filtration(&Chain::monomial("x", e(0))).unwrap().level, e(0));

        let c = complex(&[("x1", 0), ("x2", 0), ("y", 0)], &[("y", &[("x1", 0), ("x2", 1)])]);
        let m = c.min_filtration(&Chain::monomial("x1", e(0))).unwrap();
        assert_eq!(m.level, e(-1));
        assert!(m.exact);
        assert_eq!(m.representative, Chain::monomial("x2", e(1)));

        assert_eq!(c.min_filtration(&Chain::zero()), Err(ComplexError::ZeroClass));
        let boundary = c.boundary_of_generator("y");
        assert_eq!(c.min_filtration(&boundary), Err(ComplexError::ZeroClass));
        assert_eq!(
            c.min_filtration(&Chain::monomial("y", e(0))),
            Err(ComplexError::NotACycle)
        );
    }

    #[test]
    fn min_filtration_needs_series_coefficients() {
        // d(y1) = x1 + τ x2, d(y2) = x2 + τ x1, z = x1 + τ^5 x3:
        // the boundary space is all of span{x1, x2}, so the best
        // representative is τ^5 x3, reached only through a geometric series.
        let c = complex(
            &[("x1", 0), ("x2", 0), ("x3", 0), ("y1", 0), ("y2", 0)],
            &[("y1", &[("x1", 0), ("x2", 1)]), ("y2", &[("x2", 0), ("x1", 1)])],
        );
        let z = Chain::monomial("x1", e(0)).add(&Chain::monomial("x3", e(5)));
        let m = c.min_filtration(&z).unwrap();
        assert_eq!(m.level, e(-5));
        assert!(m.exact);
        assert!(c.boundary(&m.representative).is_zero());
        assert_eq!(c.filtration_level(&m.representative).unwrap(), Level::finite(-5));
    }

    #[test]
    fn split_by_class_partitions_generators() {
        let mut c = complex(&[("a", 0), ("b", 0), ("c", 1)], &[("b", &[("a", 0)])]);
        c.generators[2].hclass = "k1".into();
        let pieces = c.split_by_class().unwrap();
        assert_eq!(pieces.len(), 2);
        assert_eq!(pieces.values().map(|p| p.len()).sum::<usize>(), 3);
        let back = FilteredComplex::direct_sum(pieces.values());
        assert_eq!(back.homology().unwrap().rank, c.homology().unwrap().rank);
        let single = complex(&[("a", 0), ("b", 0)], &[]).split_by_class().unwrap();
        assert_eq!(single.keys().collect::<Vec<_>>(), vec!["0"]);
    }

    #[test]
    fn chain_spec_parsing() {
        let z = Chain::parse_spec("x1, x2@3/2").unwrap();
        assert_eq!(
            z,
            Chain::monomial("x1", e(0)).add(&Chain::monomial("x2", Exponent::new(3, 2)))
        );
        assert!(Chain::parse_spec("x@zz").is_err());
    }

    #[test]
    fn json_document_round_trip() {
        let text = r#"{"generators":[{"id":"x1","action":"0","hclass":"0","grading":null},
            {"id":"x2","action":"1/2"},{"id":"y","action":"0","grading":1}],
            "boundary":{"y":[["x1","0"],["x2","1"]]}}"#;
        let c = FilteredComplex::from_json(text).unwrap();
        assert_eq!(c.generators()[1].hclass, "0");
        assert_eq!(c.generators()[2].grading, Some(1));
        assert_eq!(FilteredComplex::from_json(&c.to_json()).unwrap(), c);
    }
}
