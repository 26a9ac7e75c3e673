//! Brute-force reference computations for the acceptance suite.
//!
//! Nothing here shares code with the algorithms it checks: persistence
//! ranks come from Z/2 bitmask linear algebra on the presentation, minimal
//! filtration levels from a truncated Z/2 model of the Novikov span,
//! maxima over the sphere from dense grids or closed forms, and systoles
//! from lattice enumeration.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::complex::{Chain, FilteredComplex};
use crate::exponent::{Exponent, Level};
use crate::persistence::{Barcode, ColimitClass, Presentation};
use crate::real::Real;

/// A Z/2 vector as packed bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bits(Vec<u64>);

impl Bits {
    pub fn zero(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64).max(1)])
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i / 64] ^= 1 << (i % 64);
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn xor(&mut self, other: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a ^= b;
        }
    }

    fn top(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .rev()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| 64 * i + 63 - w.leading_zeros() as usize)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|w| *w == 0)
    }
}

/// Echelon basis keyed by highest set bit.
#[derive(Default, Clone)]
pub struct XorBasis {
    rows: HashMap<usize, Bits>,
}

impl XorBasis {
    fn reduce(&self, mut v: Bits) -> Bits {
        while let Some(t) = v.top() {
            match self.rows.get(&t) {
                Some(r) => v.xor(r),
                None => break,
            }
        }
        v
    }

    /// Returns false when `v` was already in the span.
    pub fn insert(&mut self, v: Bits) -> bool {
        let v = self.reduce(v);
        match v.top() {
            Some(t) => {
                self.rows.insert(t, v);
                true
            }
            None => false,
        }
    }

    pub fn contains(&self, v: &Bits) -> bool {
        self.reduce(v.clone()).is_zero()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// `(level, vector)` pairs for generators or relations.
type Masks = Vec<(Level, Bits)>;

fn presentation_masks(p: &Presentation) -> (Masks, Masks) {
    let n = p.generators.len();
    let index: HashMap<&str, usize> = p
        .generators
        .iter()
        .enumerate()
        .map(|(i, g)| (g.id.as_str(), i))
        .collect();
    let gens = p
        .generators
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let mut b = Bits::zero(n);
            b.flip(i);
            (g.birth.clone(), b)
        })
        .collect();
    let rels = p
        .relations
        .iter()
        .filter(|r| r.level != Level::PosInf)
        .map(|r| {
            let mut b = Bits::zero(n);
            for id in &r.support {
                b.flip(index[id.as_str()]);
            }
            (r.level.clone(), b)
        })
        .collect();
    (gens, rels)
}

fn span<'a>(vectors: impl Iterator<Item = &'a Bits>) -> XorBasis {
    let mut basis = XorBasis::default();
    for v in vectors {
        basis.insert(v.clone());
    }
    basis
}

/// Rank of the structure map `V_s → V_t` for `s ≤ t`:
/// `dim(G_s + R_t) − dim R_t` in the free module on the generators.
pub fn module_rank(p: &Presentation, s: &Level, t: &Level) -> usize {
    let (gens, rels) = presentation_masks(p);
    let r_t = span(rels.iter().filter(|(l, _)| l <= t).map(|(_, b)| b));
    let mut both = r_t.clone();
    for (_, g) in gens.iter().filter(|(b, _)| b <= s) {
        both.insert(g.clone());
    }
    both.rank() - r_t.rank()
}

/// Every finite birth and level, with one point below and one above.
pub fn critical_grid(p: &Presentation) -> Vec<Level> {
    let mut values: Vec<Exponent> = p
        .generators
        .iter()
        .map(|g| &g.birth)
        .chain(p.relations.iter().map(|r| &r.level))
        .filter_map(|l| l.as_finite().cloned())
        .collect();
    values.sort();
    values.dedup();
    let one = Exponent::one();
    let (lo, hi) = match (values.first(), values.last()) {
        (Some(a), Some(b)) => (a - &one, b + &one),
        _ => (-&one, one.clone()),
    };
    let mut grid = vec![Level::Finite(lo)];
    grid.extend(values.into_iter().map(Level::Finite));
    grid.push(Level::Finite(hi));
    grid
}

/// Whether the class of `v` in the colimit is in the image of `V_s`:
/// `v ∈ G_s + R_∞`.
pub fn colimit_hits(p: &Presentation, v: &Bits, s: &Level) -> bool {
    colimit_image(p, s).contains(v)
}

/// `G_s + R_∞`, the preimage of the image of `V_s` in the colimit.
pub fn colimit_image(p: &Presentation, s: &Level) -> XorBasis {
    let (gens, rels) = presentation_masks(p);
    let mut basis = span(rels.iter().map(|(_, b)| b));
    for (_, g) in gens.iter().filter(|(b, _)| b <= s) {
        basis.insert(g.clone());
    }
    basis
}

/// Whether `v` is zero in the colimit.
pub fn colimit_zero(p: &Presentation, v: &Bits) -> bool {
    let (_, rels) = presentation_masks(p);
    span(rels.iter().map(|(_, b)| b)).contains(v)
}

/// `(dim lim, dim colim, rank(lim → colim))`. The module is constant below
/// its smallest critical value, so the limit is the module there.
pub fn lim_colim(p: &Presentation) -> (usize, usize, usize) {
    let grid = critical_grid(p);
    let (lo, hi) = (grid.first().expect("grid"), grid.last().expect("grid"));
    (module_rank(p, lo, lo), module_rank(p, hi, hi), module_rank(p, lo, hi))
}

/// Smallest `s` on the critical grid of `b` (extended by `±1`) at which `ζ`
/// is hit, or `None` if it is hit at every grid point.
pub fn grid_infimum(b: &Barcode, zeta: &ColimitClass) -> Option<Exponent> {
    let mut grid = b.critical_values();
    let one = Exponent::one();
    let lo = grid.first().map(|a| a - &one).unwrap_or_else(|| -&one);
    let hi = grid.last().map(|a| a + &one).unwrap_or_else(|| one.clone());
    grid.insert(0, lo);
    grid.push(hi);
    if b.hits_at(zeta, &Level::Finite(grid[0].clone())).ok()? {
        return None;
    }
    grid.into_iter()
        .find(|s| b.hits_at(zeta, &Level::Finite(s.clone())).unwrap_or(false))
}

/// Smallest integer `s` in `[lo, hi]` with `ζ` hit at level `s·period`.
pub fn first_integer_hit(b: &Barcode, zeta: &ColimitClass, period: &Exponent, lo: i64, hi: i64) -> Option<i64> {
    (lo..=hi).find(|&s| {
        let level = Level::Finite(period * &Exponent::from_integer(s));
        b.hits_at(zeta, &level).unwrap_or(false)
    })
}

/// Minimal filtration level by truncated Z/2 linear algebra, for complexes
/// whose exponents and actions are integers.
///
/// A term `τ^c x` has weight `c + action(x)`. The cycle `z` can be moved to
/// one whose terms all have weight `≥ W` iff the part of `z` below `W` lies
/// in the span of the parts below `W` of the shifted boundaries `τ^c d(y)`;
/// shifts are limited to those whose terms all have weight at least
/// `min weight(z) − margin`. Returns `−W*` for the largest such `W` up to
/// `min weight(z) + cap`, or `None` if every `W` in range is reachable.
pub struct MinFiltrationOracle {
    pub margin: i64,
    pub cap: i64,
    /// Cross-check by enumerating every subset when the span has at most
    /// this many generators.
    pub enumerate_up_to: usize,
}

impl Default for MinFiltrationOracle {
    fn default() -> Self {
        MinFiltrationOracle {
            margin: 10,
            cap: 24,
            enumerate_up_to: 14,
        }
    }
}

fn integer(e: &Exponent) -> i64 {
    assert!(e.is_integer(), "oracle needs integer data");
    e.numer().to_i64().expect("small integer")
}

impl MinFiltrationOracle {
    pub fn level(&self, c: &FilteredComplex, z: &Chain) -> Option<Exponent> {
        let ids: Vec<&str> = c.generators().iter().map(|g| g.id.as_str()).collect();
        let index: HashMap<&str, usize> = ids.iter().enumerate().map(|(i, id)| (*id, i)).collect();
        let action: Vec<i64> = c.generators().iter().map(|g| integer(&g.action)).collect();
        // Terms as (generator, weight).
        let terms = |ch: &Chain| -> Vec<(usize, i64)> {
            let mut out = Vec::new();
            for (id, s) in ch.terms() {
                let i = index[id.as_str()];
                out.extend(s.support().iter().map(|e| (i, integer(e) + action[i])));
            }
            out
        };
        let zt = terms(z);
        let w0 = zt.iter().map(|t| t.1).min()?;
        let floor = w0 - self.margin;
        let boundaries: Vec<Vec<(usize, i64)>> = ids
            .iter()
            .map(|id| terms(&c.boundary_of_generator(id)))
            .filter(|t| !t.is_empty())
            .collect();

        let mut best = w0;
        for w in (w0 + 1)..=(w0 + self.cap) {
            if !self.reachable(&zt, &boundaries, ids.len(), floor, w) {
                return Some(Exponent::from_integer(-best));
            }
            best = w;
        }
        None
    }

    /// Whether `z` is homologous, inside the truncated model, to a chain
    /// with no terms of weight below `w`.
    fn reachable(&self, z: &[(usize, i64)], boundaries: &[Vec<(usize, i64)>], n: usize, floor: i64, w: i64) -> bool {
        let width = (w - floor) as usize;
        let bit = |(i, wt): (usize, i64)| i * width + (wt - floor) as usize;
        let restrict = |terms: &[(usize, i64)], shift: i64| {
            let mut b = Bits::zero(n * width);
            for &(i, wt) in terms {
                let wt = wt + shift;
                if wt < w {
                    b.flip(bit((i, wt)));
                }
            }
            b
        };
        let target = restrict(z, 0);
        let mut vectors = Vec::new();
        for d in boundaries {
            let lowest = d.iter().map(|t| t.1).min().expect("nonempty");
            for shift in (floor - lowest)..(w - lowest) {
                vectors.push(restrict(d, shift));
            }
        }
        let basis = span(vectors.iter());
        let found = basis.contains(&target);
        if vectors.len() <= self.enumerate_up_to {
            let enumerated = (0u32..1 << vectors.len()).any(|mask| {
                let mut v = target.clone();
                for (j, b) in vectors.iter().enumerate() {
                    if mask >> j & 1 == 1 {
                        v.xor(b);
                    }
                }
                v.is_zero()
            });
            assert_eq!(found, enumerated, "rank test and enumeration disagree");
        }
        found
    }
}

/// Unit directions on a grid: `±1` for `n = 1`, `m` equally spaced points
/// for `n = 2`, and a latitude–longitude grid with `m` rings for `n = 3`.
pub fn sphere_grid(n: usize, m: usize) -> Vec<Vec<f64>> {
    use std::f64::consts::{PI, TAU};
    match n {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..m)
            .map(|i| (i as f64 * TAU / m as f64).sin_cos())
            .map(|(s, c)| vec![c, s])
            .collect(),
        3 => {
            let mut out = vec![vec![0.0, 0.0, 1.0], vec![0.0, 0.0, -1.0]];
            for r in 1..m {
                let theta = r as f64 * PI / m as f64;
                for j in 0..2 * m {
                    let phi = j as f64 * PI / m as f64;
                    out.push(vec![theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]);
                }
            }
            out
        }
        _ => panic!("sphere grids are provided for n ≤ 3"),
    }
}

/// Bound on the distance from any unit vector to the nearest point of
/// `sphere_grid(n, m)`.
pub fn sphere_grid_resolution(n: usize, m: usize) -> f64 {
    use std::f64::consts::PI;
    match n {
        1 => 0.0,
        2 => PI / m as f64,
        _ => PI / m as f64 * 2f64.sqrt(),
    }
}

pub fn grid_max(f: impl Fn(&[f64]) -> f64, grid: &[Vec<f64>]) -> f64 {
    grid.iter().map(|u| f(u)).fold(f64::NEG_INFINITY, f64::max)
}

/// Shortest nonzero vector of `ℤⁿ` by enumeration of the box `[−r, r]ⁿ`.
pub fn shortest_lattice_vector(n: usize, r: i64) -> f64 {
    let side = (2 * r + 1) as usize;
    let mut best = f64::INFINITY;
    for code in 0..side.pow(n as u32) {
        let mut c = code;
        let mut norm2 = 0i64;
        for _ in 0..n {
            let x = (c % side) as i64 - r;
            c /= side;
            norm2 += x * x;
        }
        if norm2 > 0 {
            best = best.min((norm2 as f64).sqrt());
        }
    }
    best
}

type Q = BigRational;

fn sqrt_sum_squares(v: &[Q]) -> Real {
    Real::sqrt(&v.iter().map(|x| x * x).sum()).expect("nonnegative")
}

/// Exact `max (b·u + P(u))` on a circle subdivided at rational unit
/// vectors `points` (in counterclockwise order), `P` linear on each arc.
/// On an arc from `v` to `w` the function is `g·u` with `g` from Cramer's
/// rule; its maximum is `|g|` if `g` points into the open arc and the
/// larger endpoint value otherwise.
pub fn circle_pl_max(points: &[[Q; 2]], values: &[Q], b: &[Q; 2]) -> Real {
    let m = points.len();
    let mut best: Option<Real> = None;
    for i in 0..m {
        let (v, w) = (&points[i], &points[(i + 1) % m]);
        let (hv, hw) = (&values[i], &values[(i + 1) % m]);
        let det = &v[0] * &w[1] - &v[1] * &w[0];
        let g = [
            (hv * &w[1] - &v[1] * hw) / &det + &b[0],
            (&v[0] * hw - hv * &w[0]) / &det + &b[1],
        ];
        let into = (&v[0] * &g[1] - &v[1] * &g[0]).is_positive() && (&g[0] * &w[1] - &g[1] * &w[0]).is_positive();
        let candidate = if into {
            sqrt_sum_squares(&g)
        } else {
            let at = |p: &[Q; 2]| Real::from_rational(&p[0] * &g[0] + &p[1] * &g[1]);
            at(v).max(at(w))
        };
        best = Some(match best {
            None => candidate,
            Some(x) => x.max(candidate),
        });
    }
    best.expect("at least one arc")
}

/// Exact `max (b·u + P(u))` for `P` cone-linear on the coordinate orthants
/// with `P(±eᵢ) = values[i][0 or 1]`. On the orthant with signs `σ` the
/// function is `Σ mᵢ|uᵢ|`, `mᵢ = values[i][σᵢ] + σᵢbᵢ`, whose maximum on the
/// sphere is `√(Σ_{mᵢ>0} mᵢ²)` when some `mᵢ > 0` and `max mᵢ` otherwise.
pub fn orthant_pl_max(values: &[[Q; 2]], b: &[Q]) -> Real {
    let n = values.len();
    let mut best: Option<Real> = None;
    for mask in 0..1usize << n {
        let m: Vec<Q> = (0..n)
            .map(|i| {
                let neg = mask >> i & 1 == 1;
                let bi = if neg { -&b[i] } else { b[i].clone() };
                &values[i][neg as usize] + bi
            })
            .collect();
        let positive: Vec<Q> = m.iter().filter(|x| x.is_positive()).cloned().collect();
        let candidate = if positive.is_empty() {
            Real::from_rational(m.iter().max().expect("n ≥ 1").clone())
        } else {
            sqrt_sum_squares(&positive)
        };
        best = Some(match best {
            None => candidate,
            Some(x) => x.max(candidate),
        });
    }
    best.expect("n ≥ 1")
}

/// Whether `v` is the zero vector.
pub fn is_zero_vector(v: &[Q]) -> bool {
    v.iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::persistence::{PresentationGenerator, Relation};

    #[test]
    fn two_generator_ranks() {
        let p = Presentation {
            generators: vec![
                PresentationGenerator {
                    id: "g1".into(),
                    birth: Level::finite(0),
                },
                PresentationGenerator {
                    id: "g2".into(),
                    birth: Level::finite(1),
                },
            ],
            relations: vec![Relation {
                level: Level::finite(3),
                support: vec!["g1".into(), "g2".into()],
            }],
        };
        let r = |s: i64, t: i64| module_rank(&p, &Level::finite(s), &Level::finite(t));
        assert_eq!(r(0, 0), 1);
        assert_eq!(r(1, 1), 2);
        assert_eq!(r(1, 3), 1);
        assert_eq!(r(0, 3), 1);
        assert_eq!(r(3, 3), 1);
    }

    #[test]
    fn lattice_and_grids() {
        assert_eq!(shortest_lattice_vector(2, 2), 1.0);
        assert_eq!(sphere_grid(3, 4).len(), 2 + 3 * 8);
        let g = sphere_grid(2, 1000);
        let m = grid_max(|u| 3.0 * u[0] + 4.0 * u[1], &g);
        assert!((m - 5.0).abs() < 5.0 * sphere_grid_resolution(2, 1000));
    }

    #[test]
    fn closed_form_pl_maxima() {
        let one = Q::from_integer(1.into());
        let zero = Q::zero();
        let square = [
            [one.clone(), zero.clone()],
            [zero.clone(), one.clone()],
            [-&one, zero.clone()],
            [zero.clone(), -&one],
        ];
        let values = vec![one.clone(); 4];
        let root2 = Real::sqrt(&Q::from_integer(2.into())).unwrap();
        assert_eq!(circle_pl_max(&square, &values, &[zero.clone(), zero.clone()]), root2);
        let orth = vec![[one.clone(), one.clone()], [one.clone(), one.clone()]];
        assert_eq!(orthant_pl_max(&orth, &[zero.clone(), zero.clone()]), root2);
    }
}
