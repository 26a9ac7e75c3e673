//! Property suites behind the `selftest` command.
//!
//! Every criterion compares the library against an independent computation
//! from [`crate::oracle`] on a deterministic random corpus and reports its
//! wall time against a budget. A criterion passes only if it is correct and
//! within budget.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{Chain, ComplexError, FilteredComplex, Generator};
use crate::exponent::{Exponent, Level};
use crate::novikov::{NovikovError, NovikovScalar};
use crate::oracle::{
    circle_pl_max, colimit_image, colimit_zero, critical_grid, first_integer_hit, grid_infimum, grid_max, lim_colim,
    module_rank, orthant_pl_max, shortest_lattice_vector, sphere_grid, sphere_grid_resolution, Bits,
    MinFiltrationOracle,
};
use crate::persistence::{Bar, Barcode, ColimitClass, Presentation, PresentationGenerator, Relation};
use crate::real::Real;
use crate::spectral::{
    integer_invariant_of, spectral_invariant, AlgebraDoc, AlgebraError, Conjugation, ModuleDoc, PersistenceAlgebra,
};
use crate::torus::{
    build_algebra, check_systolic_bound, rational_circle_point, systole, SampleTable, SphereHamiltonian, SphereMesh,
    SphereValue,
};

type Q = BigRational;
type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !{ $cond } {
            return Err(format!($($fmt)+));
        }
    };
}

#[derive(Debug, Clone)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} criterion {}: {} ({}; {:.2} s of {} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.elapsed.as_secs_f64(),
            self.budget.as_secs_f64()
        )
    }
}

fn run(id: u8, name: &'static str, budget_secs: u64, check: impl FnOnce() -> Check) -> CriterionOutcome {
    let start = Instant::now();
    let result = check();
    let elapsed = start.elapsed();
    let budget = Duration::from_secs(budget_secs);
    let (correct, mut detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    if elapsed > budget {
        detail = format!("{detail}; over budget");
    }
    CriterionOutcome {
        id,
        name,
        passed: correct && elapsed <= budget,
        detail,
        elapsed,
        budget,
    }
}

fn seeded(salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x0e7e_0a1b_a500_0000 + salt)
}

fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

fn half(rng: &mut impl Rng, lo: i64, hi: i64) -> Exponent {
    Exponent::new(rng.gen_range(lo..=hi), 2)
}

fn exact(v: &SphereValue) -> Result<&Real, String> {
    v.exact()
        .ok_or_else(|| format!("expected an exact value, got {}", v.render(None)))
}

// Random corpora.

/// At most 12 generators and relations, half-integer births and levels,
/// about one generator in five born at `−∞`.
pub fn random_presentation(rng: &mut impl Rng) -> Presentation {
    let total = rng.gen_range(1..=12);
    let count = rng.gen_range(1..=total);
    let mut generators = Vec::new();
    for i in 0..count {
        let birth = if rng.gen_bool(0.2) {
            Level::NegInf
        } else {
            Level::Finite(half(rng, -8, 8))
        };
        generators.push(PresentationGenerator {
            id: format!("g{i}"),
            birth,
        });
    }
    let mut relations = Vec::new();
    for _ in count..total {
        let mut support: Vec<usize> = (0..count).filter(|_| rng.gen_bool(0.4)).collect();
        if support.is_empty() {
            support.push(rng.gen_range(0..count));
        }
        let top = support.iter().map(|&i| &generators[i].birth).max().expect("nonempty");
        let level = if rng.gen_bool(0.1) {
            Level::PosInf
        } else {
            match top {
                Level::Finite(b) => Level::Finite(b + &half(rng, 0, 6)),
                _ => Level::Finite(half(rng, -8, 8)),
            }
        };
        relations.push(Relation {
            level,
            support: support.iter().map(|&i| generators[i].id.clone()).collect(),
        });
    }
    Presentation { generators, relations }
}

/// A barcode with half-integer endpoints and at least one right-infinite
/// bar.
pub fn random_barcode(rng: &mut impl Rng) -> Barcode {
    let count = rng.gen_range(1..=8);
    let mut bars = Vec::new();
    for _ in 0..count {
        let birth = if rng.gen_bool(0.2) {
            Level::NegInf
        } else {
            Level::Finite(half(rng, -12, 12))
        };
        let death = if rng.gen_bool(0.6) {
            Level::PosInf
        } else {
            let base = birth.as_finite().cloned().unwrap_or_else(|| half(rng, -12, 12));
            Level::Finite(base + half(rng, 1, 8))
        };
        bars.push(Bar::new(birth, death));
    }
    if !bars.iter().any(Bar::is_right_infinite) {
        bars.push(Bar::new(Level::Finite(half(rng, -12, 12)), Level::PosInf));
    }
    Barcode::new(bars).expect("bars are nonempty")
}

fn random_scalar(rng: &mut impl Rng) -> NovikovScalar {
    let terms = rng.gen_range(0..=5);
    NovikovScalar::from_exponents((0..terms).map(|_| Exponent::new(rng.gen_range(-12..=12), rng.gen_range(1..=3))))
}

/// Product by listing all pairwise sums and keeping those of odd
/// multiplicity.
fn naive_mul(x: &NovikovScalar, y: &NovikovScalar) -> NovikovScalar {
    let mut sums = Vec::new();
    for a in x.support() {
        for b in y.support() {
            sums.push(a + b);
        }
    }
    NovikovScalar::from_exponents(sums)
}

// Criteria.

pub fn criterion_1() -> CriterionOutcome {
    run(1, "barcode oracle equivalence", 10, || {
        let mut rng = seeded(1);
        let mut pairs = 0;
        for n in 0..200 {
            let p = random_presentation(&mut rng);
            let b = p.barcode().map_err(|e| format!("presentation {n}: {e}"))?;
            let grid = critical_grid(&p);
            for (i, s) in grid.iter().enumerate() {
                for t in &grid[i..] {
                    let bars = b.bars.iter().filter(|bar| bar.contains_interval(s, t)).count();
                    let rank = module_rank(&p, s, t);
                    ensure!(
                        bars == rank,
                        "presentation {n}: {bars} bars contain [{s},{t}] but the rank is {rank}"
                    );
                    pairs += 1;
                }
            }
        }
        Ok(format!("200 presentations, {pairs} level pairs"))
    })
}

pub fn criterion_2() -> CriterionOutcome {
    run(2, "eternal subspace characterization", 5, || {
        let mut rng = seeded(1);
        let mut classes = 0;
        for n in 0..200 {
            let p = random_presentation(&mut rng);
            let d = p.decompose().map_err(|e| format!("presentation {n}: {e}"))?;
            let b = &d.barcode;
            let grid = critical_grid(&p);
            let images: Vec<_> = grid.iter().map(|s| colimit_image(&p, s)).collect();
            let bottom = colimit_image(&p, &Level::NegInf);
            let colim = b.colim_basis();
            let (lim, col, rank) = lim_colim(&p);
            ensure!(
                colim.len() == col,
                "presentation {n}: {} colimit bars, colimit dimension {col}",
                colim.len()
            );
            ensure!(
                b.eternal_subspace().len() == rank,
                "presentation {n}: {} full bars but rank(lim → colim) = {rank}",
                b.eternal_subspace().len()
            );
            ensure!(
                b.rfh_rank() == (lim - rank) + (col - rank),
                "presentation {n}: cone rank {} but eternal classes leave {}",
                b.rfh_rank(),
                (lim - rank) + (col - rank)
            );
            let width = colim.len();
            let masks: Vec<u64> = if width <= 8 {
                (1..1u64 << width).collect()
            } else {
                (0..255).map(|_| rng.gen_range(1..1u64 << width)).collect()
            };
            for mask in masks {
                let chosen: Vec<usize> = (0..width).filter(|j| mask >> j & 1 == 1).map(|j| colim[j]).collect();
                let zeta = ColimitClass::from_indices(chosen.iter().copied());
                let mut v = Bits::zero(p.generators.len());
                for &i in &chosen {
                    v.flip(
                        d.representatives[i]
                            .ok_or_else(|| format!("presentation {n}: bar {i} has no representative"))?,
                    );
                }
                ensure!(
                    !colimit_zero(&p, &v),
                    "presentation {n}: class {zeta} vanishes in the colimit"
                );
                for (s, image) in grid.iter().zip(&images) {
                    let lib = b.hits_at(&zeta, s).map_err(|e| e.to_string())?;
                    ensure!(
                        lib == image.contains(&v),
                        "presentation {n}: hits_at({zeta}, {s}) = {lib} disagrees"
                    );
                }
                let eternal = b.is_eternal(&zeta).map_err(|e| e.to_string())?;
                ensure!(
                    eternal == images[0].contains(&v) && eternal == bottom.contains(&v),
                    "presentation {n}: eternal({zeta}) = {eternal} disagrees with the image of the limit"
                );
                ensure!(
                    eternal == chosen.iter().all(|&i| b.bars[i].is_full()),
                    "presentation {n}: eternal({zeta}) = {eternal} is not the span of full bars"
                );
                classes += 1;
            }
        }
        Ok(format!("200 presentations, {classes} colimit classes"))
    })
}

pub fn criterion_3() -> CriterionOutcome {
    run(3, "Novikov field suite", 2, || {
        let mut rng = seeded(3);
        let (zero, one) = (NovikovScalar::zero(), NovikovScalar::one());
        let mut divisions = 0;
        for n in 0..1000 {
            let (x, y, z) = (
                random_scalar(&mut rng),
                random_scalar(&mut rng),
                random_scalar(&mut rng),
            );
            let at = |what: &str| format!("sample {n}: {what} fails for x={x}, y={y}, z={z}");
            ensure!(x.add(&y) == y.add(&x), "{}", at("commutativity of +"));
            ensure!(x.add(&y).add(&z) == x.add(&y.add(&z)), "{}", at("associativity of +"));
            ensure!(x.mul(&y) == y.mul(&x), "{}", at("commutativity of ·"));
            ensure!(x.mul(&y).mul(&z) == x.mul(&y.mul(&z)), "{}", at("associativity of ·"));
            ensure!(
                x.mul(&y.add(&z)) == x.mul(&y).add(&x.mul(&z)),
                "{}",
                at("distributivity")
            );
            ensure!(
                x.add(&zero) == x && x.mul(&one) == x && x.mul(&zero).is_zero(),
                "{}",
                at("identities")
            );
            ensure!(x.add(&x).is_zero(), "{}", at("x + x = 0"));
            let s = x.add(&y);
            ensure!(s.mul(&s) == x.mul(&x).add(&y.mul(&y)), "{}", at("(x + y)² = x² + y²"));
            ensure!(x.mul(&y) == naive_mul(&x, &y), "{}", at("convolution"));
            let expected = x
                .valuation()
                .checked_add(&y.valuation())
                .expect("valuations are never -inf");
            ensure!(
                x.mul(&y).valuation() == expected,
                "{}",
                at("valuation multiplicativity")
            );
            ensure!(
                s.valuation() >= x.valuation().min(y.valuation()),
                "{}",
                at("ultrametric inequality")
            );

            if y.is_zero() {
                ensure!(
                    x.div_window(&y, &Exponent::one()) == Err(NovikovError::DivisionByZero),
                    "{}",
                    at("x / 0")
                );
                continue;
            }
            let window = half(&mut rng, 1, 12);
            let quotient = x.div_window(&y, &window).map_err(|e| at(&e.to_string()))?;
            let residual = x.add(&quotient.mul(&y));
            match x.valuation() {
                Level::Finite(v) => {
                    ensure!(
                        residual.valuation() > Level::Finite(&v + &window),
                        "{}",
                        at("residual bound")
                    );
                    let Level::Finite(vy) = y.valuation() else {
                        unreachable!("y is nonzero")
                    };
                    let cap = &v - &vy + &window;
                    ensure!(
                        quotient.support().iter().all(|e| *e <= cap),
                        "{}",
                        at("quotient exponent bound")
                    );
                }
                _ => ensure!(quotient.is_zero(), "{}", at("0 / y = 0")),
            }
            divisions += 1;
        }
        Ok(format!("1000 samples, {divisions} windowed divisions"))
    })
}

type Matrix = Vec<Vec<NovikovScalar>>;

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(NovikovScalar::zero(), |acc, k| acc.add(&a[i][k].mul(&b[k][j]))))
                .collect()
        })
        .collect()
}

fn mat_vec(a: &Matrix, v: &[NovikovScalar]) -> Vec<NovikovScalar> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(NovikovScalar::zero(), |acc, (r, x)| acc.add(&r.mul(x)))
        })
        .collect()
}

/// A complex `E D E` with `D` in normal form (`d yᵢ = τ^{aᵢ} xᵢ`, free
/// generators `hⱼ`) and `E` a product of elementary matrices `I + τ^c e_ab`,
/// together with a random cycle `E w`, `w ∈ ker D`.
fn random_conjugated_complex(rng: &mut impl Rng) -> (FilteredComplex, Chain) {
    let pairs = rng.gen_range(0..=3);
    let free = rng.gen_range(0..=(10 - 2 * pairs).min(3));
    let mut ids = Vec::new();
    for i in 0..pairs {
        ids.push(format!("x{i}"));
        ids.push(format!("y{i}"));
    }
    for j in 0..free {
        ids.push(format!("h{j}"));
    }
    let n = ids.len().max(1);
    if ids.is_empty() {
        ids.push("h0".into());
    }
    let mut d: Matrix = vec![vec![NovikovScalar::zero(); n]; n];
    for i in 0..pairs {
        d[2 * i][2 * i + 1] = NovikovScalar::monomial(Exponent::from_integer(rng.gen_range(0..=3)));
    }
    let mut kernel: Vec<NovikovScalar> = vec![NovikovScalar::zero(); n];
    for (slot, id) in kernel.iter_mut().zip(&ids) {
        if !id.starts_with('y') && rng.gen_bool(0.6) {
            let terms = rng.gen_range(1..=2);
            *slot = NovikovScalar::from_exponents((0..terms).map(|_| Exponent::from_integer(rng.gen_range(0..=4))));
        }
    }
    let mut v = kernel;
    for _ in 0..rng.gen_range(0..=3) {
        if n < 2 {
            break;
        }
        let a = rng.gen_range(0..n);
        let b = (a + rng.gen_range(1..n)) % n;
        let mut e: Matrix = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            NovikovScalar::one()
                        } else {
                            NovikovScalar::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        e[a][b] = NovikovScalar::monomial(Exponent::from_integer(rng.gen_range(0..=2)));
        d = mat_mul(&e, &mat_mul(&d, &e));
        v = mat_vec(&e, &v);
    }
    let generators = ids
        .iter()
        .map(|id| Generator::new(id.clone(), Exponent::from_integer(rng.gen_range(-3..=3))))
        .collect();
    let mut boundary = BTreeMap::new();
    for (j, source) in ids.iter().enumerate() {
        let entries: Vec<(String, Exponent)> = (0..n)
            .flat_map(|i| d[i][j].support().iter().map(move |a| (i, a.clone())))
            .map(|(i, a)| (ids[i].clone(), a))
            .collect();
        if !entries.is_empty() {
            boundary.insert(source.clone(), entries);
        }
    }
    let mut cycle = Chain::zero();
    for (id, c) in ids.iter().zip(&v) {
        cycle.add_term(id.clone(), c);
    }
    (FilteredComplex::new(generators, boundary), cycle)
}

pub fn criterion_4() -> CriterionOutcome {
    run(4, "minimal filtration level", 10, || {
        let mut rng = seeded(4);
        let oracle = MinFiltrationOracle::default();
        let wide = MinFiltrationOracle {
            margin: 16,
            ..MinFiltrationOracle::default()
        };
        let (mut nonzero, mut zero) = (0, 0);
        let mut complexes = 0;
        while complexes < 100 {
            let (c, z) = random_conjugated_complex(&mut rng);
            if z.is_zero() {
                continue;
            }
            complexes += 1;
            let at = |what: String| format!("complex {complexes} ({}), cycle {z}: {what}", c.to_json());
            c.verify().map_err(|v| at(v.to_string()))?;
            ensure!(
                c.boundary(&z).is_zero(),
                "{}",
                at("generated chain is not a cycle".into())
            );
            let expected = oracle.level(&c, &z);
            ensure!(
                expected == wide.level(&c, &z),
                "{}",
                at("oracle is not stable under a wider margin".into())
            );
            match (c.min_filtration(&z), expected) {
                (Ok(m), Some(e)) => {
                    ensure!(
                        m.level == e,
                        "{}",
                        at(format!("min_filtration {} but brute force {e}", m.level))
                    );
                    let rep = c.filtration_level(&m.representative).map_err(|e| at(e.to_string()))?;
                    ensure!(
                        rep == Level::Finite(e.clone()),
                        "{}",
                        at(format!("representative sits at {rep}"))
                    );
                    let own = c.filtration_level(&z).map_err(|e| at(e.to_string()))?;
                    ensure!(Level::Finite(e) <= own, "{}", at("level exceeds ℓ(z)".into()));
                    nonzero += 1;
                }
                (Err(ComplexError::ZeroClass), None) => zero += 1,
                (got, want) => return Err(at(format!("library {got:?}, brute force {want:?}"))),
            }
        }
        Ok(format!("100 complexes, {nonzero} nonzero and {zero} zero classes"))
    })
}

/// Random rational points of the circle, always including `±e₁, ±e₂`, in
/// counterclockwise order.
fn random_circle_points(rng: &mut impl Rng) -> Vec<[Q; 2]> {
    let mut points: Vec<[Q; 2]> = vec![
        [q(1, 1), q(0, 1)],
        [q(0, 1), q(1, 1)],
        [q(-1, 1), q(0, 1)],
        [q(0, 1), q(-1, 1)],
    ];
    for _ in 0..rng.gen_range(0..=4) {
        let t = q(rng.gen_range(-9..=9), rng.gen_range(1..=9));
        let p = rational_circle_point(&t);
        let p = [p[0].clone(), p[1].clone()];
        if !points.contains(&p) {
            points.push(p);
        }
    }
    let angle = |p: &[Q; 2]| {
        let (x, y) = (
            Exponent::from_big(p[0].clone()).to_f64(),
            Exponent::from_big(p[1].clone()).to_f64(),
        );
        y.atan2(x)
    };
    points.sort_by(|a, b| angle(a).total_cmp(&angle(b)));
    points
}

fn to_exponents(v: &[Q]) -> Vec<Exponent> {
    v.iter().cloned().map(Exponent::from_big).collect()
}

fn random_halves(rng: &mut impl Rng, count: usize, lo: i64, hi: i64) -> Vec<Q> {
    (0..count).map(|_| q(rng.gen_range(lo..=hi), 2)).collect()
}

fn circle_hamiltonian(points: &[[Q; 2]], values: &[Q], b: &[Q]) -> Result<SphereHamiltonian, String> {
    let mesh = SphereMesh::circle(points.iter().map(|p| p.to_vec()).collect()).map_err(|e| e.to_string())?;
    let pl = SphereHamiltonian::piecewise_linear(Arc::new(mesh), to_exponents(values)).map_err(|e| e.to_string())?;
    pl.add(&SphereHamiltonian::linear(to_exponents(b)))
        .map_err(|e| e.to_string())
}

/// `values[i] = [P(eᵢ), P(−eᵢ)]` in cross-polytope vertex order.
fn orthant_hamiltonian(mesh: &Arc<SphereMesh>, values: &[[Q; 2]], b: &[Q]) -> Result<SphereHamiltonian, String> {
    let flat: Vec<Q> = values.iter().flat_map(|v| v.iter().cloned()).collect();
    let pl = SphereHamiltonian::piecewise_linear(mesh.clone(), to_exponents(&flat)).map_err(|e| e.to_string())?;
    pl.add(&SphereHamiltonian::linear(to_exponents(b)))
        .map_err(|e| e.to_string())
}

fn negated(v: &[Q]) -> Vec<Q> {
    v.iter().map(|x| -x).collect()
}

/// Samples `h` on `grid`, returning the sampled Hamiltonian.
fn sample(h: &SphereHamiltonian, grid: Vec<Vec<f64>>, resolution: Option<f64>) -> Result<SphereHamiltonian, String> {
    let values = grid.iter().map(|u| h.evaluate(u)).collect();
    let table = SampleTable::new(grid, resolution).map_err(|e| e.to_string())?;
    SphereHamiltonian::sampled(Arc::new(table), values).map_err(|e| e.to_string())
}

fn within(sampled: &SphereValue, exact: &Real) -> bool {
    (sampled.to_f64() - exact.to_f64()).abs() <= sampled.tolerance() + 1e-9
}

pub fn criterion_5() -> CriterionOutcome {
    run(5, "torus shape invariant", 5, || {
        let p = SphereHamiltonian::linear(vec![Exponent::one()]);
        ensure!(
            *exact(&p.shape_spectral())? == Real::from_integer(1),
            "H = p: c = {}",
            p.shape_spectral().render(None)
        );
        ensure!(
            *exact(&p.oscillation_exact())? == Real::from_integer(2),
            "H = p: γ = {}",
            p.oscillation_exact().render(None)
        );

        let mut rng = seeded(5);
        let octahedron = Arc::new(SphereMesh::cross_polytope(3));
        let mut sampled = 0;
        for n in 0..50 {
            let (h, max, min) = if n % 2 == 0 {
                let points = random_circle_points(&mut rng);
                let values = random_halves(&mut rng, points.len(), -6, 6);
                let b = random_halves(&mut rng, 2, -4, 4);
                let h = circle_hamiltonian(&points, &values, &b)?;
                let max = circle_pl_max(&points, &values, &[b[0].clone(), b[1].clone()]);
                let nb = negated(&b);
                let min = -circle_pl_max(&points, &negated(&values), &[nb[0].clone(), nb[1].clone()]);
                (h, max, min)
            } else {
                let values: Vec<[Q; 2]> = (0..3)
                    .map(|_| [q(rng.gen_range(-6..=6), 2), q(rng.gen_range(-6..=6), 2)])
                    .collect();
                let b = random_halves(&mut rng, 3, -4, 4);
                let h = orthant_hamiltonian(&octahedron, &values, &b)?;
                let neg: Vec<[Q; 2]> = values.iter().map(|v| [-&v[0], -&v[1]]).collect();
                (h, orthant_pl_max(&values, &b), -orthant_pl_max(&neg, &negated(&b)))
            };
            let c = h.shape_spectral();
            ensure!(
                *exact(&c)? == max,
                "H #{n}: c = {} but the PL maximum is {max}",
                c.render(None)
            );
            let gamma = h.oscillation_exact();
            let spread = &max - &min;
            ensure!(
                *exact(&gamma)? == spread,
                "H #{n}: γ = {} but max − min = {spread}",
                gamma.render(None)
            );

            if n % 5 == 0 {
                let s = if n % 2 == 0 {
                    sample(&h, sphere_grid(2, 1440), None)?
                } else {
                    sample(&h, sphere_grid(3, 24), Some(sphere_grid_resolution(3, 24)))?
                };
                let sc = s.shape_spectral();
                ensure!(
                    within(&sc, &max),
                    "sampled H #{n}: c = {} misses {max}",
                    sc.render(None)
                );
                let sg = s.oscillation_exact();
                ensure!(
                    within(&sg, &spread),
                    "sampled H #{n}: γ = {} misses {spread}",
                    sg.render(None)
                );
                sampled += 1;
            }
        }
        Ok(format!(
            "H = p gives c = 1, γ = 2; 50 PL Hamiltonians exact; {sampled} sampled within tolerance"
        ))
    })
}

fn random_class(rng: &mut impl Rng, dim: usize) -> Vec<i64> {
    loop {
        let k: Vec<i64> = (0..dim).map(|_| rng.gen_range(-5..=5)).collect();
        if k.iter().any(|&x| x != 0) {
            return k;
        }
    }
}

fn add_classes(k: &[i64], l: &[i64]) -> Vec<i64> {
    k.iter().zip(l).map(|(a, b)| a + b).collect()
}

pub fn criterion_6() -> CriterionOutcome {
    run(6, "class spectral formula", 20, || {
        let mut rng = seeded(6);
        let grid_sizes = [0, 2, 720, 40];
        let tables: Vec<Option<Arc<SampleTable>>> = (0..=3)
            .map(|n| match n {
                0 => Ok(None),
                3 => {
                    SampleTable::new(sphere_grid(3, 40), Some(sphere_grid_resolution(3, 40))).map(|t| Some(Arc::new(t)))
                }
                _ => SampleTable::new(sphere_grid(n, grid_sizes[n]), None).map(|t| Some(Arc::new(t))),
            })
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        for n in 1..=3 {
            let systole_1 = systole(n, None).map_err(|e| e.to_string())?.to_f64();
            let lattice = shortest_lattice_vector(n, 2);
            ensure!(
                (systole_1 - lattice).abs() < 1e-12,
                "systole of T^{n} is {systole_1}, lattice gives {lattice}"
            );
        }

        for i in 0..100 {
            let n = 1 + i % 3;
            let k = random_class(&mut rng, n);
            let norm = systole(n, Some(&k)).map_err(|e| e.to_string())?;
            let c = SphereHamiltonian::zero(n)
                .class_spectral(&k)
                .map_err(|e| e.to_string())?;
            ensure!(
                *exact(&c)? == norm,
                "k = {k:?}: c = {} but |k| = {norm}",
                c.render(None)
            );
            let mesh = Arc::new(SphereMesh::cross_polytope(n));
            let zero_pl =
                SphereHamiltonian::piecewise_linear(mesh, vec![Exponent::zero(); 2 * n]).map_err(|e| e.to_string())?;
            let c_pl = zero_pl.class_spectral(&k).map_err(|e| e.to_string())?;
            ensure!(*exact(&c_pl)? == norm, "k = {k:?}: PL zero gives {}", c_pl.render(None));

            let (m, eps) = (grid_sizes[n].max(2), sphere_grid_resolution(n, grid_sizes[n].max(2)));
            let kf: Vec<f64> = k.iter().map(|&x| x as f64).collect();
            let scan = grid_max(|u| u.iter().zip(&kf).map(|(a, b)| a * b).sum(), &sphere_grid(n, m));
            let exact_norm = norm.to_f64();
            ensure!(
                scan <= exact_norm + 1e-9 && exact_norm - scan <= exact_norm * eps + 1e-9,
                "k = {k:?}: grid maximum {scan} is not within ε·|k| of {exact_norm}"
            );
            let table = tables[n].clone().expect("table for n ≥ 1");
            let resolution = table.resolution();
            let sampled = SphereHamiltonian::sampled(table, vec![0.0; m_points(n, m)]).map_err(|e| e.to_string())?;
            let cs = sampled.class_spectral(&k).map_err(|e| e.to_string())?;
            ensure!(
                within(&cs, &norm) && cs.tolerance() <= exact_norm * resolution + 1e-9,
                "k = {k:?}: sampled c = {} misses |k| = {norm}",
                cs.render(None)
            );
            let spectrum = SphereHamiltonian::zero(n).spectrum(&k).map_err(|e| e.to_string())?;
            ensure!(spectrum.contains(&c), "k = {k:?}: c is not in the spectrum");
            let sampled_spectrum = sampled.spectrum(&k).map_err(|e| e.to_string())?;
            ensure!(
                sampled_spectrum.values.iter().any(|v| within(v, &norm)),
                "k = {k:?}: sampled spectrum misses |k|"
            );
        }

        // Subadditivity on Hamiltonians sharing a mesh, plus spectrum
        // membership of every PL invariant.
        let circle: Vec<[Q; 2]> = random_circle_points(&mut rng);
        let circle_mesh =
            Arc::new(SphereMesh::circle(circle.iter().map(|p| p.to_vec()).collect()).map_err(|e| e.to_string())?);
        let octahedron = Arc::new(SphereMesh::cross_polytope(3));
        let family = |rng: &mut ChaCha8Rng,
                      mesh: &Arc<SphereMesh>,
                      vertices: usize,
                      n: usize|
         -> Result<Vec<SphereHamiltonian>, String> {
            (0..12)
                .map(|_| {
                    let pl = SphereHamiltonian::piecewise_linear(
                        mesh.clone(),
                        to_exponents(&random_halves(rng, vertices, -6, 6)),
                    )
                    .map_err(|e| e.to_string())?;
                    pl.add(&SphereHamiltonian::linear(to_exponents(&random_halves(rng, n, -2, 2))))
                        .map_err(|e| e.to_string())
                })
                .collect()
        };
        let families = [
            (2, family(&mut rng, &circle_mesh, circle.len(), 2)?),
            (3, family(&mut rng, &octahedron, 6, 3)?),
        ];
        let mut tuples = 0;
        let mut members = 0;
        for t in 0..1000 {
            let (n, hams) = &families[t % 2];
            let (h, g) = (&hams[rng.gen_range(0..hams.len())], &hams[rng.gen_range(0..hams.len())]);
            let (k, l): (Vec<i64>, Vec<i64>) = (
                (0..*n).map(|_| rng.gen_range(-3..=3)).collect(),
                (0..*n).map(|_| rng.gen_range(-3..=3)).collect(),
            );
            let sum = h.add(g).map_err(|e| e.to_string())?;
            let lhs = sum.class_spectral(&add_classes(&k, &l)).map_err(|e| e.to_string())?;
            let rhs = h
                .class_spectral(&k)
                .map_err(|e| e.to_string())?
                .add(&g.class_spectral(&l).map_err(|e| e.to_string())?);
            ensure!(
                exact(&lhs)? <= exact(&rhs)?,
                "tuple {t}: c(k+l; H+G) = {} exceeds {}",
                lhs.render(None),
                rhs.render(None)
            );
            tuples += 1;
            if t % 10 == 0 {
                let c = h.class_spectral(&k).map_err(|e| e.to_string())?;
                ensure!(
                    h.spectrum(&k).map_err(|e| e.to_string())?.contains(&c),
                    "tuple {t}: c(k; H) is not in the spectrum"
                );
                members += 1;
            }
        }
        Ok(format!(
            "100 classes exact and within ε·|k| when sampled; {tuples} subadditivity tuples; {members} spectrum checks"
        ))
    })
}

fn m_points(n: usize, m: usize) -> usize {
    sphere_grid(n, m).len()
}

pub fn criterion_7() -> CriterionOutcome {
    run(7, "systolic bound", 1, || {
        let p = SphereHamiltonian::linear(vec![Exponent::one()]);
        let zero = Real::zero();
        for k in (1..=5).flat_map(|k| [k, -k]) {
            let r = check_systolic_bound(&p, k).map_err(|e| e.to_string())?;
            let c = exact(&r.c)?;
            ensure!(*c == Real::from_integer(k.abs()), "k = {k}: c = {c}");
            ensure!(r.systole == Real::from_integer(k.abs()), "k = {k}: sys = {}", r.systole);
            ensure!(*exact(&r.margin)? == zero, "k = {k}: margin {}", r.margin.render(None));
            ensure!(
                *exact(&r.gamma_margin)? == zero,
                "k = {k}: γ margin {}",
                r.gamma_margin.render(None)
            );
            ensure!(r.holds(), "k = {k}: bound fails");
        }
        Ok("k = ±1..±5, c = |k| = sys_k, margin 0".into())
    })
}

fn relabeled(b: &Barcode, rng: &mut impl Rng) -> (AlgebraDoc, Vec<usize>) {
    let mut order: Vec<usize> = (0..b.len()).collect();
    for i in (1..order.len()).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    // Bar `i` of `a` becomes bar `image[i]` of `b`.
    let mut image = vec![0; b.len()];
    for (pos, &i) in order.iter().enumerate() {
        image[i] = pos;
    }
    let permuted: Vec<Bar> = order.iter().map(|&i| b.bars[i].clone()).collect();
    let unit = b.colim_basis()[0];
    let doc = AlgebraDoc {
        labels: vec!["a".into(), "b".into()],
        identity: "a".into(),
        compose: vec![],
        inverse: BTreeMap::new(),
        modules: [
            (
                "a".to_string(),
                ModuleDoc {
                    bars: b.bars.clone(),
                    unit: None,
                },
            ),
            (
                "b".to_string(),
                ModuleDoc {
                    bars: permuted,
                    unit: None,
                },
            ),
        ]
        .into(),
        unit: Some(unit),
        products: vec![],
        conjugations: vec![Conjugation {
            from: "a".into(),
            to: "b".into(),
            bars: image.clone(),
        }],
    };
    (doc, image)
}

pub fn criterion_8() -> CriterionOutcome {
    run(8, "integer invariant", 2, || {
        let mut rng = seeded(8);
        let period = Exponent::one();
        let (mut finite, mut eternal) = (0, 0);
        for n in 0..100 {
            let b = random_barcode(&mut rng);
            let colim = b.colim_basis();
            let mut zeta = ColimitClass::zero();
            while zeta.is_zero() {
                zeta = ColimitClass::from_indices(colim.iter().copied().filter(|_| rng.gen_bool(0.5)));
            }
            let at = |what: String| format!("barcode {n} {:?}, class {zeta}: {what}", b.bars);
            let c = spectral_invariant(&b, &zeta).map_err(|e| at(e.to_string()))?;
            let expected = match grid_infimum(&b, &zeta) {
                Some(e) => Level::Finite(e),
                None => Level::NegInf,
            };
            ensure!(c == expected, "{}", at(format!("c = {c}, grid scan {expected}")));
            let ell = integer_invariant_of(&b, &zeta, &period);
            match &c {
                Level::Finite(v) => {
                    let scan =
                        first_integer_hit(&b, &zeta, &period, -20, 20).ok_or_else(|| at("no integer hit".into()))?;
                    ensure!(
                        ell == Ok(BigInt::from(scan)),
                        "{}",
                        at(format!("ℓ = {ell:?}, scan {scan}, c = {v}"))
                    );
                    finite += 1;
                }
                _ => {
                    ensure!(
                        ell == Err(AlgebraError::EternalClass),
                        "{}",
                        at(format!("eternal class gave {ell:?}"))
                    );
                    eternal += 1;
                }
            }

            let (doc, image) = relabeled(&b, &mut rng);
            let algebra = PersistenceAlgebra::from_doc(doc).map_err(|e| at(e.to_string()))?;
            let report = algebra.check_conjugations(&period);
            ensure!(report.passed(), "{}", at(format!("relabeling rejected: {report:?}")));
            let moved = ColimitClass::from_indices(zeta.indices().map(|i| image[i]));
            let before = algebra.integer_invariant("a", &zeta, &period);
            let after = algebra.integer_invariant("b", &moved, &period);
            ensure!(
                before == after,
                "{}",
                at(format!("relabeling changes ℓ from {before:?} to {after:?}"))
            );
        }
        Ok(format!(
            "100 barcodes: {finite} finite, {eternal} eternal; relabelings preserve ℓ"
        ))
    })
}

pub fn criterion_9() -> CriterionOutcome {
    run(9, "algebra verifiers", 2, || {
        let hams = vec![
            ("0".to_string(), SphereHamiltonian::zero(1)),
            ("p".to_string(), SphereHamiltonian::linear(vec![Exponent::one()])),
            ("-p".to_string(), SphereHamiltonian::linear(vec![-Exponent::one()])),
        ];
        let classes: Vec<Vec<i64>> = (-2..=2).map(|k| vec![k]).collect();
        let algebra = build_algebra(&hams, &classes).map_err(|e| e.to_string())?;
        let sub = algebra.check_subadditivity();
        ensure!(sub.passed(), "torus algebra: {sub:?}");
        let ideal = algebra.check_ideal();
        ensure!(ideal.passed(), "torus algebra: {ideal:?}");
        ensure!(
            !algebra.unit_eternal_criterion().eternal,
            "torus algebra: unit is eternal"
        );

        match PersistenceAlgebra::load(fixtures::SHIFT_VIOLATION) {
            Err(crate::spectral::LoadError::Invalid(AlgebraError::ShiftRule { entry: 0, .. })) => {}
            other => {
                return Err(format!(
                    "shift fixture: expected a shift-rule failure at entry 0, got {other:?}"
                ))
            }
        }
        let planted = PersistenceAlgebra::load(fixtures::IDEAL_VIOLATION).map_err(|e| e.to_string())?;
        let report = planted.check_ideal();
        ensure!(
            report.violation.as_deref().is_some_and(|v| v.starts_with("entry 1:")),
            "ideal fixture: expected a violation at entry 1, got {report:?}"
        );
        let odd = PersistenceAlgebra::load(fixtures::ODD_EULER).map_err(|e| e.to_string())?;
        ensure!(
            odd.unit_eternal_criterion().eternal,
            "odd-Euler fixture: unit is not eternal"
        );
        ensure!(odd.check_ideal().passed(), "odd-Euler fixture: ideal check fails");
        Ok(format!(
            "torus algebra: {} subadditivity and {} ideal entries pass, unit not eternal; planted violations found",
            sub.checked, ideal.checked
        ))
    })
}

pub fn run_criteria() -> Vec<CriterionOutcome> {
    vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
    ]
}

// Worked examples, one group per operation.

#[derive(Debug, Clone)]
pub struct ExampleOutcome {
    pub op: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Example = fn() -> Result<(), String>;

fn nov(exponents: &[i64]) -> NovikovScalar {
    NovikovScalar::from_exponents(exponents.iter().map(|&a| Exponent::from_integer(a)))
}

fn complex_from(text: &str) -> Result<FilteredComplex, String> {
    FilteredComplex::from_json(text).map_err(|e| e.to_string())
}

fn barcode_of(bars: Vec<Bar>) -> Barcode {
    Barcode::new(bars).expect("example bars are valid")
}

fn torus_p() -> PersistenceAlgebra {
    let hams = vec![
        ("0".to_string(), SphereHamiltonian::zero(1)),
        ("p".to_string(), SphereHamiltonian::linear(vec![Exponent::one()])),
        ("-p".to_string(), SphereHamiltonian::linear(vec![-Exponent::one()])),
    ];
    build_algebra(&hams, &[vec![-1], vec![0], vec![1]]).expect("closed family")
}

fn example_nov_add() -> Result<(), String> {
    ensure!(nov(&[0]).add(&nov(&[0])).is_zero(), "τ^0 + τ^0");
    ensure!(nov(&[0, 1]).add(&nov(&[1, 2])) == nov(&[0, 2]), "(τ^0+τ^1) + (τ^1+τ^2)");
    ensure!(nov(&[-3, 5]).add(&NovikovScalar::zero()) == nov(&[-3, 5]), "x + 0");
    Ok(())
}

fn example_nov_mul() -> Result<(), String> {
    let a = NovikovScalar::from_exponents([Exponent::zero(), Exponent::new(1, 2)]);
    ensure!(a.mul(&a) == nov(&[0, 1]), "(τ^0+τ^{{1/2}})²");
    ensure!(nov(&[2]).mul(&nov(&[3])) == nov(&[5]), "τ^2·τ^3");
    ensure!(
        nov(&[0, 1]).mul(&nov(&[0, 2])) == nov(&[0, 1, 2, 3]),
        "(τ^0+τ^1)(τ^0+τ^2)"
    );
    Ok(())
}

fn example_nov_val() -> Result<(), String> {
    ensure!(nov(&[3, 5]).valuation() == Level::finite(3), "val(τ^3+τ^5)");
    ensure!(NovikovScalar::zero().valuation() == Level::PosInf, "val(0)");
    ensure!(
        nov(&[1, 4]).mul(&nov(&[-2, 0])).valuation() == Level::finite(-1),
        "val multiplicative"
    );
    Ok(())
}

fn example_div_window() -> Result<(), String> {
    let w = |n| Exponent::from_integer(n);
    ensure!(nov(&[2]).div_window(&nov(&[1]), &w(10)) == Ok(nov(&[1])), "τ^2 / τ^1");
    let q = nov(&[0]).div_window(&nov(&[0, 1]), &w(3)).map_err(|e| e.to_string())?;
    ensure!(q == nov(&[0, 1, 2, 3]), "τ^0 / (τ^0+τ^1) in window 3 gave {q}");
    ensure!(
        nov(&[0]).add(&q.mul(&nov(&[0, 1]))) == nov(&[4]),
        "residual of τ^0 / (τ^0+τ^1)"
    );
    ensure!(
        NovikovScalar::zero().div_window(&nov(&[1, 2]), &w(5)) == Ok(NovikovScalar::zero()),
        "0 / y"
    );
    Ok(())
}

fn example_verify() -> Result<(), String> {
    let flat = complex_from(r#"{"generators":[{"id":"x","action":"0"},{"id":"y","action":"1"}]}"#)?;
    ensure!(flat.verify().is_ok(), "zero differential");
    let square = complex_from(
        r#"{"generators":[{"id":"x","action":"0"},{"id":"x2","action":"0"},{"id":"y","action":"0"}],
            "boundary":{"y":[["x","0"]],"x":[["x2","0"]]}}"#,
    )?;
    ensure!(
        square.verify().is_err_and(|v| v.to_string().contains("d∘d")),
        "nonzero square"
    );
    let negative = complex_from(
        r#"{"generators":[{"id":"x","action":"0"},{"id":"y","action":"0"}],"boundary":{"y":[["x","-1"]]}}"#,
    )?;
    ensure!(
        negative
            .verify()
            .is_err_and(|v| v.to_string().contains("negative area")),
        "negative area"
    );
    Ok(())
}

fn example_filtration_level() -> Result<(), String> {
    let c = complex_from(r#"{"generators":[{"id":"x","action":"0"},{"id":"y","action":"0"}]}"#)?;
    let level = |spec: &str| {
        c.filtration_level(&Chain::parse_spec(spec).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())
    };
    ensure!(level("x@0")? == Level::finite(0), "ℓ(τ^0 x)");
    ensure!(level("x@2, y@5")? == Level::finite(-2), "ℓ(τ^2 x + τ^5 y)");
    ensure!(level("")? == Level::NegInf, "ℓ(0)");
    Ok(())
}

fn example_homology() -> Result<(), String> {
    let rank =
        |text: &str| -> Result<usize, String> { Ok(complex_from(text)?.homology().map_err(|e| e.to_string())?.rank) };
    ensure!(
        rank(r#"{"generators":[{"id":"a","action":"0"},{"id":"b","action":"0"}]}"#)? == 2,
        "two free generators"
    );
    ensure!(
        rank(r#"{"generators":[{"id":"x","action":"0"},{"id":"y","action":"1"}],"boundary":{"y":[["x","1"]]}}"#)? == 0,
        "acyclic pair"
    );
    ensure!(
        rank(
            r#"{"generators":[{"id":"x","action":"0"},{"id":"y","action":"0"},{"id":"h","action":"0"}],"boundary":{"y":[["x","2"]]}}"#
        )? == 1,
        "pair plus a free generator"
    );
    Ok(())
}

fn example_min_filtration() -> Result<(), String> {
    let c = complex_from(
        r#"{"generators":[{"id":"x","action":"0"},{"id":"y","action":"0"},{"id":"h","action":"0"}],
            "boundary":{"y":[["x","2"],["h","1"]]}}"#,
    )?;
    let level = |spec: &str| c.min_filtration(&Chain::parse_spec(spec).expect("example chain"));
    // h ~ τ^1 x, so the class of h sits at −1; x alone is exact.
    ensure!(
        level("h").map(|m| m.level) == Ok(Exponent::from_integer(-1)),
        "class of h"
    );
    let free = complex_from(r#"{"generators":[{"id":"x","action":"0"}]}"#)?;
    ensure!(
        free.min_filtration(&Chain::parse_spec("x").map_err(|e| e.to_string())?)
            .map(|m| m.level)
            == Ok(Exponent::zero()),
        "free generator"
    );
    ensure!(
        level("x@2, h@1") == Err(ComplexError::ZeroClass),
        "boundary is a zero class"
    );
    Ok(())
}

fn example_split_by_class() -> Result<(), String> {
    let single = complex_from(r#"{"generators":[{"id":"a","action":"0"},{"id":"b","action":"0"}]}"#)?;
    ensure!(
        single.split_by_class().map_err(|e| e.to_string())?.len() == 1,
        "one class"
    );
    let two = complex_from(
        r#"{"generators":[{"id":"a","action":"0"},{"id":"b","action":"0","hclass":"k"},{"id":"c","action":"1","hclass":"k"}],
            "boundary":{"c":[["b","0"]]}}"#,
    )?;
    let pieces = two.split_by_class().map_err(|e| e.to_string())?;
    ensure!(pieces.len() == 2 && pieces["k"].len() == 2, "two classes");
    let cross = complex_from(
        r#"{"generators":[{"id":"a","action":"0"},{"id":"b","action":"0","hclass":"k"}],"boundary":{"b":[["a","0"]]}}"#,
    )?;
    ensure!(cross.split_by_class().is_err(), "cross-class differential");
    Ok(())
}

fn example_barcode() -> Result<(), String> {
    let p = Presentation::from_json(r#"{"generators":[{"id":"g","birth":"0"}],"relations":[]}"#)
        .map_err(|e| e.to_string())?;
    ensure!(
        p.barcode().map_err(|e| e.to_string())?.bars == vec![Bar::from(0)],
        "free module"
    );
    let p = Presentation::from_json(
        r#"{"generators":[{"id":"g1","birth":"0"},{"id":"g2","birth":"1"}],"relations":[{"level":"3","support":["g1","g2"]}]}"#,
    )
    .map_err(|e| e.to_string())?;
    ensure!(
        p.barcode().map_err(|e| e.to_string())?.bars == vec![Bar::from(0), Bar::finite(1, 3)],
        "elder rule"
    );
    let p = Presentation::from_json(r#"{"generators":[{"id":"e","birth":"-inf"}],"relations":[]}"#)
        .map_err(|e| e.to_string())?;
    ensure!(
        p.barcode().map_err(|e| e.to_string())?.bars == vec![Bar::full()],
        "constant module"
    );
    Ok(())
}

fn example_colim_basis() -> Result<(), String> {
    let b = barcode_of(vec![Bar::full(), Bar::from(0), Bar::finite(1, 3)]);
    ensure!(b.colim_basis() == vec![0, 1], "mixed barcode");
    ensure!(
        barcode_of(vec![Bar::finite(0, 1)]).colim_basis().is_empty(),
        "finite bars only"
    );
    ensure!(fixtures::three_eternal().colim_basis().len() == 3, "three eternal bars");
    Ok(())
}

fn example_eternal() -> Result<(), String> {
    let b = barcode_of(vec![Bar::full(), Bar::from(0)]);
    ensure!(b.is_eternal(&ColimitClass::basis(0)) == Ok(true), "full bar");
    ensure!(b.is_eternal(&ColimitClass::basis(1)) == Ok(false), "half bar");
    ensure!(b.is_eternal(&ColimitClass::from_indices([0, 1])) == Ok(false), "sum");
    Ok(())
}

fn example_hits_at() -> Result<(), String> {
    let b = barcode_of(vec![Bar::full(), Bar::from(2)]);
    let both = ColimitClass::from_indices([0, 1]);
    ensure!(b.hits_at(&both, &Level::finite(1)) == Ok(false), "below the birth");
    ensure!(b.hits_at(&both, &Level::finite(2)) == Ok(true), "at the birth");
    ensure!(
        b.hits_at(&ColimitClass::basis(0), &Level::finite(-100)) == Ok(true),
        "eternal class"
    );
    Ok(())
}

fn example_rfh_rank() -> Result<(), String> {
    ensure!(fixtures::three_eternal().rfh_rank() == 0, "three eternal bars");
    ensure!(
        barcode_of(vec![Bar::full(), Bar::from(0)]).rfh_rank() == 1,
        "one half bar"
    );
    ensure!(
        barcode_of(vec![Bar::new(Level::NegInf, Level::finite(1)), Bar::from(0)]).rfh_rank() == 2,
        "two half bars"
    );
    Ok(())
}

fn example_spectral_invariant() -> Result<(), String> {
    let b = barcode_of(vec![Bar::from(2)]);
    ensure!(
        spectral_invariant(&b, &ColimitClass::basis(0)) == Ok(Level::finite(2)),
        "single bar"
    );
    let full = barcode_of(vec![Bar::full(), Bar::full()]);
    ensure!(
        spectral_invariant(&full, &ColimitClass::from_indices([0, 1])) == Ok(Level::NegInf),
        "eternal"
    );
    let mixed = barcode_of(vec![Bar::from(1), Bar::from(3), Bar::full()]);
    ensure!(
        spectral_invariant(&mixed, &ColimitClass::from_indices([0, 1, 2])) == Ok(Level::finite(3)),
        "mixed"
    );
    Ok(())
}

fn example_subadditivity() -> Result<(), String> {
    ensure!(torus_p().check_subadditivity().passed(), "torus algebra");
    ensure!(
        matches!(
            PersistenceAlgebra::load(fixtures::SHIFT_VIOLATION),
            Err(crate::spectral::LoadError::Invalid(AlgebraError::ShiftRule {
                entry: 0,
                ..
            }))
        ),
        "shift violation"
    );
    let odd = PersistenceAlgebra::load(fixtures::ODD_EULER).map_err(|e| e.to_string())?;
    ensure!(odd.check_subadditivity().passed(), "odd-Euler fixture");
    Ok(())
}

fn example_oscillation() -> Result<(), String> {
    let a = torus_p();
    ensure!(a.oscillation("p") == Ok(Level::finite(2)), "H = p");
    ensure!(a.oscillation("0") == Ok(Level::finite(0)), "identity");
    ensure!(a.pseudo_norm("-p") == Ok(Level::finite(1)), "ν(−p)");
    Ok(())
}

fn example_pseudo_norm() -> Result<(), String> {
    let a = torus_p();
    ensure!(a.pseudo_norm("0") == Ok(Level::finite(0)), "identity");
    ensure!(a.pseudo_norm("p") == Ok(Level::finite(1)), "H = p");
    ensure!(a.check_oscillation().passed(), "ν ≥ γ/2");
    Ok(())
}

fn example_integer_invariant() -> Result<(), String> {
    let one = Exponent::one();
    for (birth, expected) in [
        (Exponent::one(), 1),
        (Exponent::new(3, 2), 2),
        (Exponent::new(-1, 2), 0),
    ] {
        let b = barcode_of(vec![Bar::from(birth.clone())]);
        ensure!(
            integer_invariant_of(&b, &ColimitClass::basis(0), &one) == Ok(BigInt::from(expected)),
            "bar born at {birth}"
        );
    }
    Ok(())
}

fn example_unit_eternal() -> Result<(), String> {
    ensure!(!torus_p().unit_eternal_criterion().eternal, "torus algebra");
    let odd = PersistenceAlgebra::load(fixtures::ODD_EULER).map_err(|e| e.to_string())?;
    let verdict = odd.unit_eternal_criterion();
    ensure!(
        verdict.eternal && verdict.cross_check.is_some_and(|r| r.passed()),
        "odd-Euler fixture"
    );
    let planted = PersistenceAlgebra::load(fixtures::IDEAL_VIOLATION).map_err(|e| e.to_string())?;
    ensure!(!planted.unit_eternal_criterion().eternal, "unit on a half bar");
    Ok(())
}

fn example_check_ideal() -> Result<(), String> {
    ensure!(torus_p().check_ideal().passed(), "torus algebra");
    let odd = PersistenceAlgebra::load(fixtures::ODD_EULER).map_err(|e| e.to_string())?;
    ensure!(odd.check_ideal().passed(), "odd-Euler fixture");
    let planted = PersistenceAlgebra::load(fixtures::IDEAL_VIOLATION).map_err(|e| e.to_string())?;
    ensure!(!planted.check_ideal().passed(), "planted violation");
    Ok(())
}

fn example_shape_spectral() -> Result<(), String> {
    let p = SphereHamiltonian::linear(vec![Exponent::one()]);
    ensure!(*exact(&p.shape_spectral())? == Real::from_integer(1), "H = p");
    let plane = SphereHamiltonian::linear(vec![Exponent::from_integer(3), Exponent::from_integer(4)]);
    ensure!(
        *exact(&plane.shape_spectral())? == Real::from_integer(5),
        "H = 3p₁ + 4p₂"
    );
    let octahedron = Arc::new(SphereMesh::cross_polytope(2));
    let bump = SphereHamiltonian::piecewise_linear(octahedron, [1, 0, 0, 0].map(Exponent::from_integer).to_vec())
        .map_err(|e| e.to_string())?;
    ensure!(*exact(&bump.shape_spectral())? == Real::from_integer(1), "tent at e₁");
    Ok(())
}

fn example_oscillation_exact() -> Result<(), String> {
    let p = SphereHamiltonian::linear(vec![Exponent::one()]);
    ensure!(*exact(&p.oscillation_exact())? == Real::from_integer(2), "H = p");
    let c = SphereHamiltonian::constant(2, Exponent::from_integer(7));
    ensure!(*exact(&c.oscillation_exact())? == Real::zero(), "constant");
    let plane = SphereHamiltonian::linear(vec![Exponent::one(), Exponent::one()]);
    let two_root_two = Real::sqrt(&q(8, 1)).expect("positive");
    ensure!(*exact(&plane.oscillation_exact())? == two_root_two, "p₁ + p₂");
    Ok(())
}

fn example_class_spectral() -> Result<(), String> {
    let zero = SphereHamiltonian::zero(2);
    let c = |h: &SphereHamiltonian, k: &[i64]| h.class_spectral(k).map_err(|e| e.to_string());
    ensure!(*exact(&c(&zero, &[3, 4])?)? == Real::from_integer(5), "|(3,4)|");
    let p = SphereHamiltonian::linear(vec![Exponent::one()]);
    ensure!(*exact(&c(&p, &[2])?)? == Real::from_integer(3), "H = p, k = 2");
    ensure!(*exact(&c(&p, &[-3])?)? == Real::from_integer(2), "H = p, k = −3");
    Ok(())
}

fn example_spectrum() -> Result<(), String> {
    let p = SphereHamiltonian::linear(vec![Exponent::one()]);
    let s = p.spectrum(&[0]).map_err(|e| e.to_string())?;
    ensure!(s.complete && s.values.len() == 2, "H = p");
    let zero = SphereHamiltonian::zero(2);
    let s = zero.spectrum(&[1, 1]).map_err(|e| e.to_string())?;
    let root_two = SphereValue::Exact(Real::sqrt(&q(2, 1)).expect("positive"));
    ensure!(s.contains(&root_two), "k = (1,1)");
    let c = SphereHamiltonian::constant(1, Exponent::from_integer(3));
    let s = c.spectrum(&[0]).map_err(|e| e.to_string())?;
    ensure!(
        s.values.len() == 1 && s.contains(&SphereValue::Exact(Real::from_integer(3))),
        "constant"
    );
    Ok(())
}

fn example_systole() -> Result<(), String> {
    ensure!(systole(2, None).ok() == Some(Real::from_integer(1)), "T²");
    ensure!(
        systole(2, Some(&[3, 4])).ok() == Some(Real::from_integer(5)),
        "k = (3,4)"
    );
    ensure!(systole(2, Some(&[0, 0])).is_err(), "contractible class");
    Ok(())
}

fn example_systolic_bound() -> Result<(), String> {
    let p = SphereHamiltonian::linear(vec![Exponent::one()]);
    for k in [1, -3] {
        let r = check_systolic_bound(&p, k).map_err(|e| e.to_string())?;
        ensure!(r.holds() && *exact(&r.margin)? == Real::zero(), "H = p, k = {k}");
    }
    ensure!(
        check_systolic_bound(&SphereHamiltonian::zero(2), 1).is_err(),
        "n = 2 is unsupported"
    );
    Ok(())
}

fn example_order_leq() -> Result<(), String> {
    let p = SphereHamiltonian::linear(vec![Exponent::one()]);
    let c = SphereHamiltonian::constant(1, Exponent::one());
    ensure!(p.order_leq(&c).ok() == Some(true), "p ≤ 1");
    ensure!(c.order_leq(&p).ok() == Some(false), "1 ≰ p");
    ensure!(p.order_leq(&p).ok() == Some(true), "p ≤ p");
    Ok(())
}

fn example_build_algebra() -> Result<(), String> {
    let a = torus_p();
    ensure!(
        a.labels().len() == 3 && a.barcode("p").map(Barcode::len) == Ok(3),
        "three labels, three classes"
    );
    ensure!(a.unit_spectral("0") == Ok(Level::finite(0)), "unit at 0");
    let open = vec![("p".to_string(), SphereHamiltonian::linear(vec![Exponent::one()]))];
    ensure!(build_algebra(&open, &[vec![0]]).is_err(), "family without zero");
    Ok(())
}

const EXAMPLES: &[(&str, Example)] = &[
    ("nov_add", example_nov_add),
    ("nov_mul", example_nov_mul),
    ("nov_val", example_nov_val),
    ("div_window", example_div_window),
    ("verify", example_verify),
    ("filtration_level", example_filtration_level),
    ("homology", example_homology),
    ("min_filtration", example_min_filtration),
    ("split_by_class", example_split_by_class),
    ("barcode", example_barcode),
    ("colim_basis", example_colim_basis),
    ("eternal", example_eternal),
    ("hits_at", example_hits_at),
    ("rfh_rank", example_rfh_rank),
    ("spectral_invariant", example_spectral_invariant),
    ("check_subadditivity", example_subadditivity),
    ("oscillation", example_oscillation),
    ("pseudo_norm", example_pseudo_norm),
    ("integer_invariant", example_integer_invariant),
    ("unit_eternal_criterion", example_unit_eternal),
    ("check_ideal", example_check_ideal),
    ("shape_spectral", example_shape_spectral),
    ("oscillation_exact", example_oscillation_exact),
    ("class_spectral", example_class_spectral),
    ("spectrum", example_spectrum),
    ("systole", example_systole),
    ("check_systolic_bound", example_systolic_bound),
    ("order_leq", example_order_leq),
    ("build_algebra", example_build_algebra),
];

pub fn examples() -> Vec<ExampleOutcome> {
    EXAMPLES
        .iter()
        .map(|(op, f)| {
            let result = f();
            ExampleOutcome {
                op,
                passed: result.is_ok(),
                detail: result.err().unwrap_or_default(),
            }
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct SelftestReport {
    pub examples: Vec<ExampleOutcome>,
    pub criteria: Vec<CriterionOutcome>,
    pub elapsed: Duration,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.examples.iter().all(|e| e.passed) && self.criteria.iter().all(|c| c.passed)
    }
}

/// Runs every worked example and criteria 1 to 9, then records the total
/// wall time as criterion 10.
pub fn selftest() -> SelftestReport {
    let start = Instant::now();
    let examples = examples();
    let mut criteria = run_criteria();
    let total = start.elapsed();
    let budget = Duration::from_secs(60);
    criteria.push(CriterionOutcome {
        id: 10,
        name: "selftest wall time",
        passed: total <= budget,
        detail: format!("{} examples and 9 criteria", examples.len()),
        elapsed: total,
        budget,
    });
    SelftestReport {
        examples,
        criteria,
        elapsed: total,
    }
}

/// Documents used by the examples, the acceptance suite and the CLI tests.
pub mod fixtures {
    use crate::persistence::{Bar, Barcode};

    /// Three full bars and two finite bars; the eternal subspace has
    /// dimension 3.
    pub const THREE_ETERNAL: &str = r#"{"bars":[
  {"birth":"-inf","death":"inf"},
  {"birth":"-inf","death":"inf"},
  {"birth":"-inf","death":"inf"},
  {"birth":"-4","death":"0"},
  {"birth":"2","death":"5"}
]}"#;

    /// Unit `ℝ` with `1·1 = 1`: the unit is eternal.
    pub const ODD_EULER: &str = r#"{
  "labels": ["id"],
  "identity": "id",
  "compose": [["id", "id", "id"]],
  "inverse": {"id": "id"},
  "modules": {"id": {"bars": [{"birth": "-inf", "death": "inf"}]}},
  "unit": 0,
  "products": [{"g": "id", "h": "id", "in1": 0, "in2": 0, "out": [0]}]
}"#;

    /// Entry 1 multiplies the eternal bar by `[1,∞)` and lands on the
    /// half-infinite bar `[1,∞)`.
    pub const IDEAL_VIOLATION: &str = r#"{
  "labels": ["id"],
  "identity": "id",
  "compose": [["id", "id", "id"]],
  "inverse": {"id": "id"},
  "modules": {"id": {"bars": [
    {"birth": "0", "death": "inf"},
    {"birth": "-inf", "death": "inf"},
    {"birth": "1", "death": "inf"}
  ]}},
  "unit": 0,
  "products": [
    {"g": "id", "h": "id", "in1": 0, "in2": 0, "out": [0]},
    {"g": "id", "h": "id", "in1": 1, "in2": 2, "out": [2]}
  ]
}"#;

    /// Entry 0 sends `[1,∞)·[1,∞)` to `[3,∞)`, breaking `3 ≤ 1 + 1`.
    pub const SHIFT_VIOLATION: &str = r#"{
  "labels": ["id"],
  "identity": "id",
  "compose": [["id", "id", "id"]],
  "inverse": {"id": "id"},
  "modules": {"id": {"bars": [
    {"birth": "0", "death": "inf"},
    {"birth": "1", "death": "inf"},
    {"birth": "3", "death": "inf"}
  ]}},
  "unit": 0,
  "products": [{"g": "id", "h": "id", "in1": 1, "in2": 1, "out": [2]}]
}"#;

    pub fn three_eternal() -> Barcode {
        Barcode::new(vec![
            Bar::full(),
            Bar::full(),
            Bar::full(),
            Bar::finite(-4, 0),
            Bar::finite(2, 5),
        ])
        .expect("valid bars")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_parse() {
        assert_eq!(
            Barcode::from_json(fixtures::THREE_ETERNAL).unwrap(),
            fixtures::three_eternal()
        );
        assert_eq!(
            PersistenceAlgebra::load(fixtures::ODD_EULER).unwrap().doc(),
            &crate::spectral::tests::odd_euler_fixture()
        );
        assert_eq!(
            PersistenceAlgebra::load(fixtures::IDEAL_VIOLATION).unwrap().doc(),
            &crate::spectral::tests::ideal_violation_fixture()
        );
        assert!(PersistenceAlgebra::load(fixtures::SHIFT_VIOLATION).is_err());
    }

    #[test]
    fn worked_examples_pass() {
        for e in examples() {
            assert!(e.passed, "{}: {}", e.op, e.detail);
        }
    }

    #[test]
    fn random_corpora_are_valid() {
        let mut rng = seeded(99);
        for _ in 0..50 {
            random_presentation(&mut rng).validate().unwrap();
            random_barcode(&mut rng).validate().unwrap();
            let (c, z) = random_conjugated_complex(&mut rng);
            assert!(c.len() <= 10);
            c.verify().unwrap();
            assert!(c.boundary(&z).is_zero());
        }
    }

    #[test]
    fn outcome_line_format() {
        let o = run(7, "demo", 1, || Ok("fine".into()));
        assert!(o.to_string().starts_with("PASS criterion 7: demo (fine; "));
        let o = run(8, "demo", 1, || Err("broken".into()));
        assert!(!o.passed && o.to_string().starts_with("FAIL criterion 8"));
    }
}
