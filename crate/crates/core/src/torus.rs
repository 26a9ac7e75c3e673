//! The flat torus model.
//!
//! Contact isotopies of the unit cotangent bundle of `Tⁿ` generated by
//! 1-homogeneous Hamiltonians `H(p)` are determined by the restriction of
//! `H` to the unit sphere. Here `H(u) = a·u + s + P(u)` where `a·u` is a
//! linear part, `s` a constant (the Reeb flow at speed `s`) and `P` either
//! absent, cone-linear on a simplicial decomposition of the sphere with
//! exact rational data, or a sample table.
//!
//! The class-`k` spectral invariant is `c_k(H) = max_{|u|=1} (k·u + H(u))`.
//! On exact data it is computed exactly in [`Real`]: on each cone the
//! function is linear, `g·u`, and its maximum over a spherical face spanned
//! by vertices `V_S` is either a vertex value or `|proj_S g|`, attained in
//! the relative interior iff the projection has positive barycentric
//! coordinates.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exponent::Exponent;
use crate::persistence::Bar;
use crate::real::Real;
use crate::spectral::{AlgebraDoc, AlgebraError, ModuleDoc, PersistenceAlgebra, ProductEntry};

#[derive(Debug, Error)]
pub enum TorusError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("the contractible class has no closed Reeb orbit on the flat torus")]
    ContractibleClass,
    #[error("sample resolution too coarse: {0}")]
    ResolutionTooCoarse(String),
    #[error("pointwise order ({pointwise}) and spectral order ({spectral}) disagree beyond resolution")]
    Inconsistent { pointwise: f64, spectral: f64 },
    #[error("closure violation: {0}")]
    ClosureViolation(String),
    #[error("label `{label}` class {class:?} has irrational or inexact level {value}")]
    NonRationalLevel {
        label: String,
        class: Vec<i64>,
        value: String,
    },
    #[error("cannot combine Hamiltonians on different sphere data")]
    IncompatibleCells,
    #[error("invalid sphere mesh: {0}")]
    InvalidMesh(String),
    #[error("invalid sample table, line {line}: {message}")]
    InvalidSamples { line: usize, message: String },
    #[error("{path}:{line}: {message}")]
    InvalidSampleFile { path: String, line: usize, message: String },
    #[error("bad Hamiltonian spec `{0}`")]
    BadSpec(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}:{}:{}: {source}", source.line(), source.column())]
    Json { path: String, source: serde_json::Error },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

type Q = BigRational;

fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[Q]) -> Real {
    Real::sqrt(&dot(a, a)).expect("sum of squares")
}

fn to_f64s(a: &[Q]) -> Vec<f64> {
    a.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
}

fn dot_f64(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalized(v: &[f64]) -> Vec<f64> {
    let n = dot_f64(v, v).sqrt();
    v.iter().map(|x| x / n).collect()
}

/// Solves `a x = rhs` exactly; `None` when `a` is singular.
fn solve(mut a: Vec<Vec<Q>>, mut rhs: Vec<Q>) -> Option<Vec<Q>> {
    let n = rhs.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        rhs.swap(col, pivot);
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = &a[r][col] / &a[col][col];
                let pivot_row = a[col].clone();
                for (x, p) in a[r][col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= &f * p;
                }
                let t = &f * &rhs[col];
                rhs[r] -= t;
            }
        }
    }
    Some((0..n).map(|i| &rhs[i] / &a[i][i]).collect())
}

/// A value on the sphere: exact, or a sample-table estimate whose true
/// value lies within `tolerance` of `value`.
#[derive(Debug, Clone, PartialEq)]
pub enum SphereValue {
    Exact(Real),
    Sampled { value: f64, tolerance: f64 },
}

impl SphereValue {
    pub fn exact(&self) -> Option<&Real> {
        match self {
            SphereValue::Exact(r) => Some(r),
            SphereValue::Sampled { .. } => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            SphereValue::Exact(r) => r.to_f64(),
            SphereValue::Sampled { value, .. } => *value,
        }
    }

    pub fn tolerance(&self) -> f64 {
        match self {
            SphereValue::Exact(_) => 0.0,
            SphereValue::Sampled { tolerance, .. } => *tolerance,
        }
    }

    pub fn add(&self, other: &SphereValue) -> SphereValue {
        match (self, other) {
            (SphereValue::Exact(a), SphereValue::Exact(b)) => SphereValue::Exact(a + b),
            _ => SphereValue::Sampled {
                value: self.to_f64() + other.to_f64(),
                tolerance: self.tolerance() + other.tolerance(),
            },
        }
    }

    pub fn neg(&self) -> SphereValue {
        match self {
            SphereValue::Exact(a) => SphereValue::Exact(-a),
            SphereValue::Sampled { value, tolerance } => SphereValue::Sampled {
                value: -value,
                tolerance: *tolerance,
            },
        }
    }

    pub fn sub(&self, other: &SphereValue) -> SphereValue {
        self.add(&other.neg())
    }

    /// `self ≤ other`, exactly or up to the combined tolerance.
    pub fn le(&self, other: &SphereValue) -> bool {
        match (self, other) {
            (SphereValue::Exact(a), SphereValue::Exact(b)) => a <= b,
            _ => self.to_f64() <= other.to_f64() + self.tolerance() + other.tolerance(),
        }
    }

    pub fn approx_eq(&self, other: &SphereValue) -> bool {
        self.le(other) && other.le(self)
    }

    fn order(&self, other: &SphereValue) -> Ordering {
        match (self, other) {
            (SphereValue::Exact(a), SphereValue::Exact(b)) => a.cmp(b),
            _ => self.to_f64().total_cmp(&other.to_f64()),
        }
    }

    pub fn render(&self, decimal: Option<usize>) -> String {
        match (self, decimal) {
            (SphereValue::Exact(r), None) => r.to_string(),
            (SphereValue::Exact(r), Some(d)) => r.to_decimal(d),
            (SphereValue::Sampled { value, tolerance }, d) => {
                let d = d.unwrap_or(6);
                format!("{value:.d$}±{tolerance:.d$}")
            }
        }
    }
}

impl fmt::Display for SphereValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(None))
    }
}

/// On-disk form of cone-linear sphere data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeshDoc {
    /// Exact rational unit vectors.
    pub vertices: Vec<Vec<Exponent>>,
    /// `H` at each vertex.
    pub values: Vec<Exponent>,
    /// Each simplex lists `n` vertices spanning a cone; the cones tile `ℝⁿ`.
    pub simplices: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub linear: Option<Vec<Exponent>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offset: Option<Exponent>,
}

#[derive(Debug)]
pub struct SphereMesh {
    dim: usize,
    vertices: Vec<Vec<Q>>,
    simplices: Vec<Vec<usize>>,
    /// Per simplex, rows of `(V_Fᵀ)⁻¹` in floating point, for locating
    /// directions.
    locators: Vec<Vec<Vec<f64>>>,
}

impl PartialEq for SphereMesh {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.simplices == other.simplices
    }
}

/// Directions probed by the tiling check.
const COVERAGE_PROBES: usize = 256;

impl SphereMesh {
    pub fn new(vertices: Vec<Vec<Q>>, simplices: Vec<Vec<usize>>) -> Result<Self, TorusError> {
        let bad = |m: String| Err(TorusError::InvalidMesh(m));
        let Some(dim) = vertices.first().map(Vec::len) else {
            return bad("no vertices".into());
        };
        if dim == 0 {
            return bad("zero-dimensional vertices".into());
        }
        for (i, v) in vertices.iter().enumerate() {
            if v.len() != dim {
                return bad(format!("vertex {i} has {} coordinates, expected {dim}", v.len()));
            }
            if dot(v, v) != q_int(1) {
                return bad(format!("vertex {i} is not a unit vector"));
            }
        }
        let mut locators = Vec::new();
        for (s, simplex) in simplices.iter().enumerate() {
            if simplex.len() != dim || simplex.iter().any(|&i| i >= vertices.len()) {
                return bad(format!("simplex {s} must list {dim} valid vertex indices"));
            }
            // Columns of (V_Fᵀ)⁻¹ solve V_Fᵀ x = e_j.
            let vt: Vec<Vec<Q>> = (0..dim)
                .map(|r| simplex.iter().map(|&v| vertices[v][r].clone()).collect())
                .collect();
            let columns: Option<Vec<Vec<Q>>> = (0..dim)
                .map(|j| solve(vt.clone(), (0..dim).map(|i| q_int((i == j) as i64)).collect()))
                .collect();
            let Some(columns) = columns else {
                return bad(format!("simplex {s} is degenerate"));
            };
            let inverse: Vec<Vec<f64>> = (0..dim)
                .map(|i| columns.iter().map(|col| col[i].to_f64().unwrap_or(f64::NAN)).collect())
                .collect();
            locators.push(inverse);
        }
        let mesh = SphereMesh {
            dim,
            vertices,
            simplices,
            locators,
        };
        mesh.check_tiling()?;
        Ok(mesh)
    }

    fn barycentric(&self, s: usize, u: &[f64]) -> Vec<f64> {
        self.locators[s].iter().map(|row| dot_f64(row, u)).collect()
    }

    fn locate(&self, u: &[f64]) -> Option<(usize, Vec<f64>)> {
        (0..self.simplices.len())
            .map(|s| (s, self.barycentric(s, u)))
            .find(|(_, l)| l.iter().all(|&x| x >= -1e-9))
    }

    /// Probes fixed directions: each must lie in some cone and in the
    /// interior of at most one.
    fn check_tiling(&self) -> Result<(), TorusError> {
        let probes: Vec<Vec<f64>> = if self.dim == 1 {
            vec![vec![1.0], vec![-1.0]]
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
            (0..COVERAGE_PROBES)
                .map(|_| normalized(&(0..self.dim).map(|_| rng.gen_range(-1.0..1.0)).collect::<Vec<f64>>()))
                .collect()
        };
        for u in probes {
            let lambdas: Vec<Vec<f64>> = (0..self.simplices.len()).map(|s| self.barycentric(s, &u)).collect();
            let inside = lambdas.iter().filter(|l| l.iter().all(|&x| x >= -1e-9)).count();
            let interior = lambdas.iter().filter(|l| l.iter().all(|&x| x > 1e-9)).count();
            if inside == 0 || interior > 1 {
                return Err(TorusError::InvalidMesh(format!(
                    "direction {u:?} lies in {inside} cones ({interior} interiors); the cones must tile the sphere"
                )));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The boundary of the cross-polytope: vertices `±eᵢ`, one simplex per
    /// orthant.
    pub fn cross_polytope(dim: usize) -> SphereMesh {
        let mut vertices = Vec::new();
        for i in 0..dim {
            for sign in [1, -1] {
                vertices.push((0..dim).map(|j| q_int(if i == j { sign } else { 0 })).collect());
            }
        }
        let simplices = (0..1usize << dim)
            .map(|mask| (0..dim).map(|i| 2 * i + (mask >> i & 1)).collect())
            .collect();
        SphereMesh::new(vertices, simplices).expect("cross-polytope tiles the sphere")
    }

    /// Circle subdivided at the given rational unit vectors, taken in
    /// angular order.
    pub fn circle(points: Vec<Vec<Q>>) -> Result<SphereMesh, TorusError> {
        let mut points = points;
        points.sort_by(|a, b| {
            let (fa, fb) = (to_f64s(a), to_f64s(b));
            fa[1].atan2(fa[0]).total_cmp(&fb[1].atan2(fb[0]))
        });
        points.dedup();
        let m = points.len();
        let simplices = (0..m).map(|i| vec![i, (i + 1) % m]).collect();
        SphereMesh::new(points, simplices)
    }
}

/// Rational point `((1−t²)/(1+t²), 2t/(1+t²))` of the unit circle.
pub fn rational_circle_point(t: &Q) -> Vec<Q> {
    let one = q_int(1);
    let d = &one + t * t;
    vec![(&one - t * t) / &d, (q_int(2) * t) / &d]
}

#[derive(Debug)]
pub struct SampleTable {
    dim: usize,
    directions: Vec<Vec<f64>>,
    resolution: f64,
    neighbours: Vec<Vec<usize>>,
}

impl PartialEq for SampleTable {
    fn eq(&self, other: &Self) -> bool {
        self.directions == other.directions && self.resolution == other.resolution
    }
}

impl SampleTable {
    /// `resolution` bounds the distance from any unit vector to the nearest
    /// sample; it is computed for `n ≤ 2` and must be supplied otherwise.
    pub fn new(directions: Vec<Vec<f64>>, resolution: Option<f64>) -> Result<SampleTable, TorusError> {
        let bad = |m: &str| TorusError::InvalidSamples {
            line: 0,
            message: m.to_string(),
        };
        let dim = directions.first().map(Vec::len).ok_or_else(|| bad("no samples"))?;
        let directions: Vec<Vec<f64>> = directions.iter().map(|d| normalized(d)).collect();
        let m = directions.len();
        let (computed, neighbours) = match dim {
            1 => {
                if !(directions.iter().any(|d| d[0] > 0.0) && directions.iter().any(|d| d[0] < 0.0)) {
                    return Err(bad("both points of S⁰ must be sampled"));
                }
                (0.0, (0..m).map(|i| (0..m).filter(|&j| j != i).collect()).collect())
            }
            2 => {
                let mut order: Vec<usize> = (0..m).collect();
                let angle = |i: usize| directions[i][1].atan2(directions[i][0]);
                order.sort_by(|&a, &b| angle(a).total_cmp(&angle(b)));
                let mut gap: f64 = 0.0;
                let mut neighbours = vec![Vec::new(); m];
                for w in 0..m {
                    let (a, b) = (order[w], order[(w + 1) % m]);
                    let mut d = angle(b) - angle(a);
                    if d <= 0.0 {
                        d += std::f64::consts::TAU;
                    }
                    gap = gap.max(d);
                    if a != b {
                        neighbours[a].push(b);
                        neighbours[b].push(a);
                    }
                }
                (gap / 2.0, neighbours)
            }
            _ => {
                let eps = resolution.ok_or_else(|| bad("a `# resolution=` line is required in dimension ≥ 3"))?;
                let near = |i: usize, j: usize| {
                    let d: f64 = directions[i]
                        .iter()
                        .zip(&directions[j])
                        .map(|(x, y)| (x - y) * (x - y))
                        .sum();
                    d.sqrt() <= 2.0 * eps * (1.0 + 1e-9)
                };
                (
                    eps,
                    (0..m)
                        .map(|i| (0..m).filter(|&j| j != i && near(i, j)).collect())
                        .collect(),
                )
            }
        };
        Ok(SampleTable {
            dim,
            directions,
            resolution: resolution.unwrap_or(0.0).max(computed),
            neighbours,
        })
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    /// Largest difference quotient between neighbouring samples.
    fn lipschitz(&self, values: &[f64]) -> f64 {
        let mut lip: f64 = 0.0;
        for (i, ns) in self.neighbours.iter().enumerate() {
            for &j in ns {
                let d: f64 = self.directions[i]
                    .iter()
                    .zip(&self.directions[j])
                    .map(|(x, y)| (x - y) * (x - y))
                    .sum();
                if d > 0.0 {
                    lip = lip.max((values[i] - values[j]).abs() / d.sqrt());
                }
            }
        }
        lip
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Cells {
    None,
    Pl { mesh: Arc<SphereMesh>, values: Vec<Q> },
    Samples { table: Arc<SampleTable>, values: Vec<f64> },
}

/// `H(u) = linear·u + offset + cells(u)` on the unit sphere of `ℝⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereHamiltonian {
    dim: usize,
    linear: Vec<Q>,
    offset: Q,
    cells: Cells,
}

/// A maximum with a direction attaining it.
#[derive(Debug, Clone)]
pub struct Extremum {
    pub value: SphereValue,
    pub direction: Vec<f64>,
}

/// Critical values of `u ↦ k·u + H(u)`. `complete` is false when the list
/// may contain non-critical stratum values (exact data, `n ≥ 3`).
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub values: Vec<SphereValue>,
    pub complete: bool,
}

impl Spectrum {
    pub fn contains(&self, v: &SphereValue) -> bool {
        self.values.iter().any(|x| x.approx_eq(v))
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum FaceKind {
    Vertex,
    Max,
    Min,
    Flat,
}

impl SphereHamiltonian {
    pub fn zero(dim: usize) -> Self {
        SphereHamiltonian {
            dim,
            linear: vec![Q::zero(); dim],
            offset: Q::zero(),
            cells: Cells::None,
        }
    }

    /// `H(u) = a·u`.
    pub fn linear(a: Vec<Exponent>) -> Self {
        let dim = a.len();
        SphereHamiltonian {
            linear: a.into_iter().map(Exponent::into_big).collect(),
            ..SphereHamiltonian::zero(dim)
        }
    }

    /// `H ≡ s` on the sphere, i.e. `H(p) = s|p|`, the Reeb flow at speed `s`.
    pub fn constant(dim: usize, s: Exponent) -> Self {
        SphereHamiltonian {
            offset: s.into_big(),
            ..SphereHamiltonian::zero(dim)
        }
    }

    pub fn piecewise_linear(mesh: Arc<SphereMesh>, values: Vec<Exponent>) -> Result<Self, TorusError> {
        if values.len() != mesh.vertices.len() {
            return Err(TorusError::InvalidMesh(format!(
                "{} values for {} vertices",
                values.len(),
                mesh.vertices.len()
            )));
        }
        Ok(SphereHamiltonian {
            cells: Cells::Pl {
                values: values.into_iter().map(Exponent::into_big).collect(),
                mesh: mesh.clone(),
            },
            ..SphereHamiltonian::zero(mesh.dim)
        })
    }

    pub fn sampled(table: Arc<SampleTable>, values: Vec<f64>) -> Result<Self, TorusError> {
        if values.len() != table.directions.len() {
            return Err(TorusError::InvalidSamples {
                line: 0,
                message: "one value per direction is required".into(),
            });
        }
        Ok(SphereHamiltonian {
            cells: Cells::Samples {
                table: table.clone(),
                values,
            },
            ..SphereHamiltonian::zero(table.dim)
        })
    }

    pub fn from_mesh_doc(doc: MeshDoc) -> Result<Self, TorusError> {
        let vertices = doc
            .vertices
            .into_iter()
            .map(|v| v.into_iter().map(Exponent::into_big).collect())
            .collect();
        let mesh = Arc::new(SphereMesh::new(vertices, doc.simplices)?);
        let mut h = SphereHamiltonian::piecewise_linear(mesh, doc.values)?;
        if let Some(a) = doc.linear {
            h = h.add(&SphereHamiltonian::linear(a))?;
        }
        if let Some(s) = doc.offset {
            h = h.add(&SphereHamiltonian::constant(h.dim, s))?;
        }
        Ok(h)
    }

    pub fn from_mesh_json(path: &str, text: &str) -> Result<Self, TorusError> {
        let doc: MeshDoc = serde_json::from_str(text).map_err(|source| TorusError::Json {
            path: path.to_string(),
            source,
        })?;
        SphereHamiltonian::from_mesh_doc(doc)
    }

    /// Rows `u₁,…,uₙ,value`; `#` starts a comment and `# resolution=ε`
    /// declares the covering radius.
    pub fn from_samples_csv(text: &str) -> Result<Self, TorusError> {
        let mut directions = Vec::new();
        let mut values = Vec::new();
        let mut resolution = None;
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let err = |message: String| TorusError::InvalidSamples { line: n + 1, message };
            if let Some(comment) = line.strip_prefix('#') {
                if let Some(eps) = comment.trim().strip_prefix("resolution=") {
                    let eps: f64 = eps.trim().parse().map_err(|_| err(format!("bad resolution `{eps}`")))?;
                    resolution = Some(eps);
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let fields: Vec<f64> = line
                .split(',')
                .map(|f| {
                    f.trim()
                        .parse::<f64>()
                        .map_err(|_| err(format!("`{}` is not a number", f.trim())))
                })
                .collect::<Result<_, _>>()?;
            if fields.len() < 2 {
                return Err(err("expected direction coordinates followed by a value".into()));
            }
            if let Some(first) = directions.first().map(|d: &Vec<f64>| d.len()) {
                if fields.len() - 1 != first {
                    return Err(err(format!("expected {} coordinates", first)));
                }
            }
            let (dir, value) = fields.split_at(fields.len() - 1);
            if dot_f64(dir, dir) == 0.0 {
                return Err(err("zero direction".into()));
            }
            directions.push(dir.to_vec());
            values.push(value[0]);
        }
        let table = Arc::new(SampleTable::new(directions, resolution)?);
        SphereHamiltonian::sampled(table, values)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn check_dim(&self, found: usize) -> Result<(), TorusError> {
        if found == self.dim {
            Ok(())
        } else {
            Err(TorusError::DimensionMismatch {
                expected: self.dim,
                found,
            })
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self.cells, Cells::Samples { .. })
    }

    pub fn add(&self, other: &SphereHamiltonian) -> Result<SphereHamiltonian, TorusError> {
        self.check_dim(other.dim)?;
        let cells = match (&self.cells, &other.cells) {
            (Cells::None, c) | (c, Cells::None) => c.clone(),
            (Cells::Pl { mesh: m1, values: v1 }, Cells::Pl { mesh: m2, values: v2 }) if m1 == m2 => Cells::Pl {
                mesh: m1.clone(),
                values: v1.iter().zip(v2).map(|(a, b)| a + b).collect(),
            },
            (Cells::Samples { table: t1, values: v1 }, Cells::Samples { table: t2, values: v2 }) if t1 == t2 => {
                Cells::Samples {
                    table: t1.clone(),
                    values: v1.iter().zip(v2).map(|(a, b)| a + b).collect(),
                }
            }
            _ => return Err(TorusError::IncompatibleCells),
        };
        Ok(SphereHamiltonian {
            dim: self.dim,
            linear: self.linear.iter().zip(&other.linear).map(|(a, b)| a + b).collect(),
            offset: &self.offset + &other.offset,
            cells,
        })
    }

    pub fn scale(&self, s: &Exponent) -> SphereHamiltonian {
        let s = s.as_big();
        let cells = match &self.cells {
            Cells::None => Cells::None,
            Cells::Pl { mesh, values } => Cells::Pl {
                mesh: mesh.clone(),
                values: values.iter().map(|v| v * s).collect(),
            },
            Cells::Samples { table, values } => {
                let f = s.to_f64().unwrap_or(f64::NAN);
                Cells::Samples {
                    table: table.clone(),
                    values: values.iter().map(|v| v * f).collect(),
                }
            }
        };
        SphereHamiltonian {
            dim: self.dim,
            linear: self.linear.iter().map(|a| a * s).collect(),
            offset: &self.offset * s,
            cells,
        }
    }

    pub fn neg(&self) -> SphereHamiltonian {
        self.scale(&Exponent::from_integer(-1))
    }

    pub fn sub(&self, other: &SphereHamiltonian) -> Result<SphereHamiltonian, TorusError> {
        self.add(&other.neg())
    }

    /// `H(u)` for a unit vector `u`, in floating point. Sample tables use
    /// the nearest sample.
    pub fn evaluate(&self, u: &[f64]) -> f64 {
        let base = dot_f64(&to_f64s(&self.linear), u) + self.offset.to_f64().unwrap_or(f64::NAN);
        base + match &self.cells {
            Cells::None => 0.0,
            Cells::Pl { mesh, values } => {
                let (s, lambda) = mesh.locate(u).expect("cones tile the sphere");
                mesh.simplices[s]
                    .iter()
                    .zip(&lambda)
                    .map(|(&v, l)| l * values[v].to_f64().unwrap_or(f64::NAN))
                    .sum()
            }
            Cells::Samples { table, values } => {
                let best = (0..values.len())
                    .max_by(|&a, &b| dot_f64(&table.directions[a], u).total_cmp(&dot_f64(&table.directions[b], u)))
                    .expect("nonempty table");
                values[best]
            }
        }
    }

    /// Directions at which the data is given: mesh vertices, samples, and
    /// `±eᵢ`.
    pub fn represented_directions(&self) -> Vec<Vec<f64>> {
        let mut out: Vec<Vec<f64>> = Vec::new();
        for i in 0..self.dim {
            for s in [1.0, -1.0] {
                out.push((0..self.dim).map(|j| if i == j { s } else { 0.0 }).collect());
            }
        }
        match &self.cells {
            Cells::None => {}
            Cells::Pl { mesh, .. } => out.extend(mesh.vertices.iter().map(|v| to_f64s(v))),
            Cells::Samples { table, .. } => out.extend(table.directions.iter().cloned()),
        }
        out
    }

    fn gradient(&self, mesh: &SphereMesh, values: &[Q], s: usize, b: &[Q]) -> Vec<Q> {
        let simplex = &mesh.simplices[s];
        let rows: Vec<Vec<Q>> = simplex.iter().map(|&v| mesh.vertices[v].clone()).collect();
        let h: Vec<Q> = simplex.iter().map(|&v| values[v].clone()).collect();
        let w = solve(rows, h).expect("simplices are nondegenerate");
        w.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    /// Critical data of `g·u` on every face of simplex `s`.
    fn face_values(mesh: &SphereMesh, s: usize, g: &[Q], out: &mut Vec<(FaceKind, Real, Vec<f64>)>) {
        let simplex = &mesh.simplices[s];
        let n = simplex.len();
        for mask in 1usize..(1 << n) {
            let face: Vec<&Vec<Q>> = (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| &mesh.vertices[simplex[i]])
                .collect();
            if face.len() == 1 {
                out.push((FaceKind::Vertex, Real::from_rational(dot(face[0], g)), to_f64s(face[0])));
                continue;
            }
            let gram: Vec<Vec<Q>> = face.iter().map(|a| face.iter().map(|b| dot(a, b)).collect()).collect();
            let r: Vec<Q> = face.iter().map(|v| dot(v, g)).collect();
            let c = solve(gram, r.clone()).expect("face vertices are independent");
            let kind = if c.iter().all(Signed::is_positive) {
                FaceKind::Max
            } else if c.iter().all(Signed::is_negative) {
                FaceKind::Min
            } else if c.iter().all(Zero::is_zero) {
                FaceKind::Flat
            } else {
                continue;
            };
            let mut dir = vec![0.0; mesh.dim];
            for (ci, v) in c.iter().zip(&face) {
                let cf = ci.to_f64().unwrap_or(f64::NAN);
                for (d, x) in dir.iter_mut().zip(v.iter()) {
                    *d += cf * x.to_f64().unwrap_or(f64::NAN);
                }
            }
            let size = Real::sqrt(&dot(&c, &r).abs()).expect("nonnegative");
            let (value, dir) = match kind {
                FaceKind::Max => (size, normalized(&dir)),
                FaceKind::Min => (-size, normalized(&dir.iter().map(|x| -x).collect::<Vec<_>>())),
                _ => (Real::zero(), to_f64s(face[0])),
            };
            out.push((kind, value, dir));
        }
    }

    fn shifted(&self, k: &[i64]) -> Result<Vec<Q>, TorusError> {
        self.check_dim(k.len())?;
        Ok(self.linear.iter().zip(k).map(|(a, &ki)| a + q_int(ki)).collect())
    }

    /// `max_{|u|=1} (k·u + H(u))` with a maximizing direction.
    pub fn class_extremum(&self, k: &[i64]) -> Result<Extremum, TorusError> {
        let b = self.shifted(k)?;
        let offset = Real::from_rational(self.offset.clone());
        Ok(match &self.cells {
            Cells::None => {
                let fb = to_f64s(&b);
                let direction = if b.iter().all(Zero::is_zero) {
                    (0..self.dim).map(|i| (i == 0) as i64 as f64).collect()
                } else {
                    normalized(&fb)
                };
                Extremum {
                    value: SphereValue::Exact(&norm(&b) + &offset),
                    direction,
                }
            }
            Cells::Pl { mesh, values } => {
                let mut best: Option<(Real, Vec<f64>)> = None;
                let mut faces = Vec::new();
                for s in 0..mesh.simplices.len() {
                    let g = self.gradient(mesh, values, s, &b);
                    faces.clear();
                    SphereHamiltonian::face_values(mesh, s, &g, &mut faces);
                    for (kind, value, dir) in faces.drain(..) {
                        if matches!(kind, FaceKind::Vertex | FaceKind::Max)
                            && best.as_ref().is_none_or(|(v, _)| value > *v)
                        {
                            best = Some((value, dir));
                        }
                    }
                }
                let (value, direction) = best.expect("mesh has simplices");
                Extremum {
                    value: SphereValue::Exact(&value + &offset),
                    direction,
                }
            }
            Cells::Samples { table, values } => {
                let fb = to_f64s(&b);
                let f: Vec<f64> = table
                    .directions
                    .iter()
                    .zip(values)
                    .map(|(u, v)| dot_f64(&fb, u) + v)
                    .collect();
                let best = (0..f.len()).fold(0, |i, j| if f[j] > f[i] { j } else { i });
                let tolerance = (dot_f64(&fb, &fb).sqrt() + table.lipschitz(values)) * table.resolution;
                Extremum {
                    value: SphereValue::Sampled {
                        value: f[best] + offset.to_f64(),
                        tolerance,
                    },
                    direction: table.directions[best].clone(),
                }
            }
        })
    }

    /// `c_k(H) = max_{|u|=1} (k·u + H(u))`.
    pub fn class_spectral(&self, k: &[i64]) -> Result<SphereValue, TorusError> {
        Ok(self.class_extremum(k)?.value)
    }

    /// `max_{|u|=1} H(u)`, the spectral invariant of the unit.
    pub fn shape_spectral(&self) -> SphereValue {
        self.class_spectral(&vec![0; self.dim]).expect("dimension matches")
    }

    /// `max H − min H` over the sphere.
    pub fn oscillation_exact(&self) -> SphereValue {
        self.shape_spectral().add(&self.neg().shape_spectral())
    }

    /// Critical values of `f(u) = k·u + H(u)` on the sphere.
    pub fn spectrum(&self, k: &[i64]) -> Result<Spectrum, TorusError> {
        let b = self.shifted(k)?;
        let offset = Real::from_rational(self.offset.clone());
        let mut complete = true;
        let mut values: Vec<SphereValue> = match &self.cells {
            Cells::None => {
                let r = norm(&b);
                vec![&r + &offset, &offset - &r]
            }
            .into_iter()
            .map(SphereValue::Exact)
            .collect(),
            Cells::Pl { mesh, values } => {
                let raw = if self.dim == 2 {
                    self.circle_critical(mesh, values, &b)
                } else {
                    complete = self.dim == 1;
                    let mut faces = Vec::new();
                    for s in 0..mesh.simplices.len() {
                        let g = self.gradient(mesh, values, s, &b);
                        SphereHamiltonian::face_values(mesh, s, &g, &mut faces);
                    }
                    faces.into_iter().map(|(_, v, _)| v).collect()
                };
                raw.into_iter().map(|v| SphereValue::Exact(&v + &offset)).collect()
            }
            Cells::Samples { table, values } => self.sampled_critical(table, values, &b)?,
        };
        values.sort_by(|a, b| a.order(b));
        values.dedup_by(|a, b| a.order(b) == Ordering::Equal);
        Ok(Spectrum { values, complete })
    }

    /// Exact critical values on a subdivided circle: vertices where `f` is
    /// not strictly monotone, and interior points `±g/|g|` of arcs.
    fn circle_critical(&self, mesh: &SphereMesh, values: &[Q], b: &[Q]) -> Vec<Real> {
        let det = |a: &[Q], c: &[Q]| &a[0] * &c[1] - &a[1] * &c[0];
        let mut out = Vec::new();
        // Oriented arcs (start, end, gradient).
        let mut arcs = Vec::new();
        for (s, simplex) in mesh.simplices.iter().enumerate() {
            let g = self.gradient(mesh, values, s, b);
            let (x, y) = (simplex[0], simplex[1]);
            let (start, end) = if det(&mesh.vertices[x], &mesh.vertices[y]).is_positive() {
                (x, y)
            } else {
                (y, x)
            };
            let (vs, ve) = (&mesh.vertices[start], &mesh.vertices[end]);
            if g.iter().all(Zero::is_zero) {
                out.push(Real::zero());
            } else {
                let minus: Vec<Q> = g.iter().map(|x| -x).collect();
                if det(vs, &g).is_positive() && det(&g, ve).is_positive() {
                    out.push(norm(&g));
                }
                if det(vs, &minus).is_positive() && det(&minus, ve).is_positive() {
                    out.push(-norm(&g));
                }
            }
            arcs.push((start, end, g));
        }
        for (v, p) in mesh.vertices.iter().enumerate() {
            let tangent = [-p[1].clone(), p[0].clone()];
            let slope_in = arcs.iter().find(|a| a.1 == v).map(|a| dot(&a.2, &tangent));
            let slope_out = arcs.iter().find(|a| a.0 == v).map(|a| dot(&a.2, &tangent));
            let (Some(i), Some(o)) = (slope_in, slope_out) else {
                continue;
            };
            let monotone = (i.is_positive() && o.is_positive()) || (i.is_negative() && o.is_negative());
            if !monotone {
                let g = &arcs.iter().find(|a| a.0 == v).expect("outgoing arc").2;
                out.push(Real::from_rational(dot(p, g)));
            }
        }
        out
    }

    /// Local extrema of `f` over the neighbour graph of the samples.
    fn sampled_critical(&self, table: &SampleTable, values: &[f64], b: &[Q]) -> Result<Vec<SphereValue>, TorusError> {
        let fb = to_f64s(b);
        let offset = self.offset.to_f64().unwrap_or(f64::NAN);
        let f: Vec<f64> = table
            .directions
            .iter()
            .zip(values)
            .map(|(u, v)| dot_f64(&fb, u) + v + offset)
            .collect();
        let tolerance = (dot_f64(&fb, &fb).sqrt() + table.lipschitz(values)) * table.resolution;
        let extremal: Vec<bool> = (0..f.len())
            .map(|i| {
                let ns = &table.neighbours[i];
                ns.iter().all(|&j| f[i] >= f[j]) || ns.iter().all(|&j| f[i] <= f[j])
            })
            .collect();
        if table.dim >= 2 {
            for (i, ns) in table.neighbours.iter().enumerate() {
                if let Some(&j) = ns.iter().find(|&&j| extremal[i] && extremal[j]) {
                    return Err(TorusError::ResolutionTooCoarse(format!(
                        "neighbouring samples {i} and {j} are both extremal"
                    )));
                }
            }
        }
        Ok((0..f.len())
            .filter(|&i| extremal[i])
            .map(|i| SphereValue::Sampled { value: f[i], tolerance })
            .collect())
    }

    /// Whether `H ≤ G` pointwise, cross-checked against
    /// `max (H − G) ≤ 0`.
    pub fn order_leq(&self, other: &SphereHamiltonian) -> Result<bool, TorusError> {
        let d = self.sub(other)?;
        let top = d.class_extremum(&vec![0; d.dim])?;
        let spectral = top.value.le(&SphereValue::Exact(Real::zero()));
        let mut directions = d.represented_directions();
        directions.push(top.direction.clone());
        let pointwise_max = directions
            .iter()
            .map(|u| d.evaluate(u))
            .fold(f64::NEG_INFINITY, f64::max);
        let pointwise = pointwise_max <= top.value.tolerance() + 1e-12;
        let resolution = top.value.tolerance() + 1e-9 * (1.0 + pointwise_max.abs());
        if pointwise != spectral && (pointwise_max - top.value.to_f64()).abs() > resolution {
            return Err(TorusError::Inconsistent {
                pointwise: pointwise_max,
                spectral: top.value.to_f64(),
            });
        }
        Ok(spectral)
    }
}

/// `sys_k = |k|` for the unit flat torus, or the overall systole `1` when
/// no class is given.
pub fn systole(dim: usize, k: Option<&[i64]>) -> Result<Real, TorusError> {
    match k {
        None => Ok(Real::from_integer(1)),
        Some(k) => {
            if k.len() != dim {
                return Err(TorusError::DimensionMismatch {
                    expected: dim,
                    found: k.len(),
                });
            }
            if k.iter().all(|&x| x == 0) {
                return Err(TorusError::ContractibleClass);
            }
            let k: Vec<Q> = k.iter().map(|&x| q_int(x)).collect();
            Ok(norm(&k))
        }
    }
}

#[derive(Debug, Clone)]
pub struct SystolicReport {
    pub k: i64,
    pub c: SphereValue,
    pub systole: Real,
    pub gamma: SphereValue,
    /// `c − sys_k`.
    pub margin: SphereValue,
    /// `γ − 2·sys_k`.
    pub gamma_margin: SphereValue,
}

impl SystolicReport {
    pub fn holds(&self) -> bool {
        let zero = SphereValue::Exact(Real::zero());
        zero.le(&self.margin) && zero.le(&self.gamma_margin)
    }
}

/// For `n = 1`, checks `c(1; φ^k) ≥ sys_k` and `γ(φ^k) ≥ 2·sys_k` where
/// `φ^k` is generated by `k·H`.
pub fn check_systolic_bound(h: &SphereHamiltonian, k: i64) -> Result<SystolicReport, TorusError> {
    if h.dim != 1 {
        return Err(TorusError::Unsupported(
            "the systolic bound is modeled on T*S¹ only".into(),
        ));
    }
    let sys = systole(1, Some(&[k]))?;
    let hk = h.scale(&Exponent::from_integer(k));
    let c = hk.shape_spectral();
    let gamma = hk.oscillation_exact();
    let s = SphereValue::Exact(sys.clone());
    Ok(SystolicReport {
        k,
        margin: c.sub(&s),
        gamma_margin: gamma.sub(&s.add(&s)),
        c,
        systole: sys,
        gamma,
    })
}

/// One label per Hamiltonian, one bar `[c_k(H), ∞)` per class, unit the
/// class-0 bar, and products `ζ_k(H)·ζ_l(G) = ζ_{k+l}(H+G)` wherever both
/// sums are present.
pub fn build_algebra(
    hams: &[(String, SphereHamiltonian)],
    classes: &[Vec<i64>],
) -> Result<PersistenceAlgebra, TorusError> {
    let Some(dim) = hams.first().map(|h| h.1.dim) else {
        return Err(TorusError::ClosureViolation("no Hamiltonians".into()));
    };
    for (_, h) in hams {
        h.check_dim(dim)?;
    }
    for k in classes {
        if k.len() != dim {
            return Err(TorusError::DimensionMismatch {
                expected: dim,
                found: k.len(),
            });
        }
    }
    for (i, k) in classes.iter().enumerate() {
        if classes[..i].contains(k) {
            return Err(TorusError::ClosureViolation(format!("class {k:?} listed twice")));
        }
    }
    let zero_class = vec![0; dim];
    let unit_index = classes
        .iter()
        .position(|k| *k == zero_class)
        .ok_or_else(|| TorusError::ClosureViolation("class 0 is missing".into()))?;
    let find = |target: &SphereHamiltonian| hams.iter().find(|(_, h)| h == target).map(|(l, _)| l.clone());
    let identity =
        find(&SphereHamiltonian::zero(dim)).ok_or_else(|| TorusError::ClosureViolation("no label for H ≡ 0".into()))?;

    let mut inverse = std::collections::BTreeMap::new();
    for (label, h) in hams {
        let inv =
            find(&h.neg()).ok_or_else(|| TorusError::ClosureViolation(format!("negation of `{label}` is missing")))?;
        inverse.insert(label.clone(), inv);
    }

    let mut compose = Vec::new();
    for (g, hg) in hams {
        for (h, hh) in hams {
            if let Some(gh) = hg.add(hh).ok().and_then(|s| find(&s)) {
                compose.push((g.clone(), h.clone(), gh));
            }
        }
    }

    let mut modules = std::collections::BTreeMap::new();
    for (label, h) in hams {
        let mut bars = Vec::new();
        for k in classes {
            let c = h.class_spectral(k)?;
            let birth = c
                .exact()
                .and_then(Real::to_exponent)
                .ok_or_else(|| TorusError::NonRationalLevel {
                    label: label.clone(),
                    class: k.clone(),
                    value: c.to_string(),
                })?;
            bars.push(Bar::from(birth));
        }
        modules.insert(
            label.clone(),
            ModuleDoc {
                bars,
                unit: Some(vec![unit_index]),
            },
        );
    }

    let mut products = Vec::new();
    for (g, h, _) in &compose {
        for (i, k) in classes.iter().enumerate() {
            for (j, l) in classes.iter().enumerate() {
                let sum: Vec<i64> = k.iter().zip(l).map(|(a, b)| a + b).collect();
                if let Some(m) = classes.iter().position(|c| *c == sum) {
                    products.push(ProductEntry {
                        g: g.clone(),
                        h: h.clone(),
                        in1: i,
                        in2: j,
                        out: vec![m],
                    });
                }
            }
        }
    }

    let doc = AlgebraDoc {
        labels: hams.iter().map(|(l, _)| l.clone()).collect(),
        identity,
        compose,
        inverse,
        modules,
        unit: None,
        products,
        conjugations: Vec::new(),
    };
    Ok(PersistenceAlgebra::from_doc(doc)?)
}

/// Parses `linear:a1,…,an`, `const:s`, `pl:<file>` or `samples:<file>`,
/// or a `+`-separated sum of these. `const` takes its dimension from the
/// other terms or from `dim_hint`.
pub fn parse_ham_spec(spec: &str, dim_hint: Option<usize>) -> Result<SphereHamiltonian, TorusError> {
    let bad = || TorusError::BadSpec(spec.to_string());
    let read = |path: &str| {
        std::fs::read_to_string(path).map_err(|source| TorusError::Io {
            path: path.to_string(),
            source,
        })
    };
    let mut fixed: Vec<SphereHamiltonian> = Vec::new();
    let mut constants: Vec<Exponent> = Vec::new();
    for term in spec.split('+').map(str::trim) {
        let (kind, arg) = term.split_once(':').ok_or_else(bad)?;
        match kind {
            "linear" => {
                let a: Vec<Exponent> = arg
                    .split(',')
                    .map(|x| x.trim().parse::<Exponent>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| bad())?;
                fixed.push(SphereHamiltonian::linear(a));
            }
            "const" | "reeb" => constants.push(arg.trim().parse().map_err(|_| bad())?),
            "pl" => fixed.push(SphereHamiltonian::from_mesh_json(arg, &read(arg)?)?),
            "samples" => fixed.push(SphereHamiltonian::from_samples_csv(&read(arg)?).map_err(|e| match e {
                TorusError::InvalidSamples { line, message } => TorusError::InvalidSampleFile {
                    path: arg.to_string(),
                    line,
                    message,
                },
                other => other,
            })?),
            _ => return Err(bad()),
        }
    }
    let dim = fixed.first().map(|h| h.dim).or(dim_hint).ok_or_else(bad)?;
    let mut h = SphereHamiltonian::zero(dim);
    for term in &fixed {
        h = h.add(term)?;
    }
    for s in constants {
        h = h.add(&SphereHamiltonian::constant(dim, s))?;
    }
    Ok(h)
}

/// Parses a class `k1,k2,…`.
pub fn parse_class(spec: &str) -> Result<Vec<i64>, TorusError> {
    spec.split(',')
        .map(|x| {
            x.trim()
                .parse::<i64>()
                .map_err(|_| TorusError::BadSpec(spec.to_string()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ex(n: i64) -> SphereValue {
        SphereValue::Exact(Real::from_integer(n))
    }

    fn p() -> SphereHamiltonian {
        SphereHamiltonian::linear(vec![Exponent::one()])
    }

    fn octahedral(values: [i64; 6]) -> SphereHamiltonian {
        let mesh = Arc::new(SphereMesh::cross_polytope(3));
        SphereHamiltonian::piecewise_linear(mesh, values.iter().map(|&v| Exponent::from_integer(v)).collect()).unwrap()
    }

    #[test]
    fn shape_spectral_examples() {
        assert_eq!(p().shape_spectral(), ex(1));
        assert_eq!(SphereHamiltonian::zero(3).shape_spectral(), ex(0));
        let h = SphereHamiltonian::linear(vec![Exponent::from_integer(3), Exponent::from_integer(4)]);
        assert_eq!(h.shape_spectral(), ex(5));
    }

    #[test]
    fn oscillation_examples() {
        assert_eq!(p().oscillation_exact(), ex(2));
        assert_eq!(SphereHamiltonian::zero(2).oscillation_exact(), ex(0));
        for c in [1, 10, 1000] {
            assert_eq!(p().scale(&Exponent::from_integer(c)).oscillation_exact(), ex(2 * c));
        }
        let reeb = SphereHamiltonian::constant(2, Exponent::new(7, 3));
        assert_eq!(reeb.oscillation_exact(), ex(0));
    }

    #[test]
    fn class_spectral_examples() {
        let zero = SphereHamiltonian::zero(2);
        assert_eq!(zero.class_spectral(&[3, 4]).unwrap(), ex(5));
        assert_eq!(zero.class_spectral(&[0, 0]).unwrap(), ex(0));
        let h = octahedral([1, -2, 3, 0, -1, 2]);
        assert_eq!(h.class_spectral(&[0, 0, 0]).unwrap(), h.shape_spectral());
        assert!(matches!(
            zero.class_spectral(&[1]),
            Err(TorusError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn pl_maximum_uses_face_interiors() {
        // H = |u₁| + |u₂| is 1 at the vertices but √2 on the diagonals.
        let mesh = Arc::new(SphereMesh::cross_polytope(2));
        let h = SphereHamiltonian::piecewise_linear(mesh, vec![Exponent::one(); 4]).unwrap();
        let top = h.shape_spectral();
        assert_eq!(top, SphereValue::Exact(Real::sqrt(&q_int(2)).unwrap()));
        assert_eq!(h.neg().shape_spectral(), ex(-1));
    }

    #[test]
    fn spectrum_examples() {
        let zero = SphereHamiltonian::zero(1);
        let s = zero.spectrum(&[2]).unwrap();
        assert_eq!(s.values, vec![ex(-2), ex(2)]);
        assert!(s.complete);
        assert_eq!(p().spectrum(&[0]).unwrap().values, vec![ex(-1), ex(1)]);
        let mesh = Arc::new(SphereMesh::cross_polytope(2));
        let h = SphereHamiltonian::piecewise_linear(mesh, vec![Exponent::one(); 4]).unwrap();
        let s = h.spectrum(&[0, 0]).unwrap();
        assert_eq!(
            s.values,
            vec![ex(1), SphereValue::Exact(Real::sqrt(&q_int(2)).unwrap())]
        );
    }

    #[test]
    fn systole_examples() {
        assert_eq!(systole(2, None).unwrap(), Real::from_integer(1));
        assert_eq!(systole(2, Some(&[3, 4])).unwrap(), Real::from_integer(5));
        assert!(matches!(
            systole(3, Some(&[0, 0, 0])),
            Err(TorusError::ContractibleClass)
        ));
    }

    #[test]
    fn systolic_bound_examples() {
        for (k, c) in [(1, 1), (3, 3), (-2, 2)] {
            let r = check_systolic_bound(&p(), k).unwrap();
            assert_eq!(r.c, ex(c));
            assert_eq!(r.margin, ex(0));
            assert_eq!(r.gamma_margin, ex(0));
            assert!(r.holds());
        }
        assert!(matches!(
            check_systolic_bound(&p(), 0),
            Err(TorusError::ContractibleClass)
        ));
    }

    #[test]
    fn order_examples() {
        let zero = SphereHamiltonian::zero(1);
        assert!(zero
            .order_leq(&SphereHamiltonian::constant(1, Exponent::one()))
            .unwrap());
        assert!(!p().order_leq(&zero).unwrap());
        assert!(p().order_leq(&p()).unwrap());
        let h = octahedral([1, 0, 2, -1, 0, 0]);
        let g = h.add(&SphereHamiltonian::constant(3, Exponent::new(1, 10))).unwrap();
        assert!(h.order_leq(&g).unwrap());
        assert!(!g.order_leq(&h).unwrap());
    }

    #[test]
    fn build_algebra_examples() {
        let hams = vec![("0".to_string(), SphereHamiltonian::zero(2))];
        let a = build_algebra(&hams, &[vec![0, 0], vec![1, 0], vec![-1, 0]]).unwrap();
        let births: Vec<String> = a
            .barcode("0")
            .unwrap()
            .bars
            .iter()
            .map(|b| b.birth.to_string())
            .collect();
        assert_eq!(births, ["0", "1", "1"]);

        let hams = vec![
            ("0".to_string(), SphereHamiltonian::zero(1)),
            ("p".to_string(), p()),
            ("-p".to_string(), p().neg()),
        ];
        let classes: Vec<Vec<i64>> = (-2..=2).map(|k| vec![k]).collect();
        let a = build_algebra(&hams, &classes).unwrap();
        assert!(a.check_subadditivity().passed());
        assert!(a.check_ideal().passed());
        assert!(!a.unit_eternal_criterion().eternal);
        for label in a.labels() {
            assert!(a.barcode(label).unwrap().eternal_subspace().is_empty());
        }
        assert_eq!(a.oscillation("p").unwrap(), crate::exponent::Level::finite(2));
        assert_eq!(a.pseudo_norm("p").unwrap(), crate::exponent::Level::finite(1));
        assert_eq!(a.oscillation("0").unwrap(), crate::exponent::Level::finite(0));
    }

    #[test]
    fn build_algebra_closure() {
        let missing_zero = vec![("p".to_string(), p()), ("-p".to_string(), p().neg())];
        assert!(matches!(
            build_algebra(&missing_zero, &[vec![0]]),
            Err(TorusError::ClosureViolation(_))
        ));
        let missing_neg = vec![("0".to_string(), SphereHamiltonian::zero(1)), ("p".to_string(), p())];
        assert!(matches!(
            build_algebra(&missing_neg, &[vec![0]]),
            Err(TorusError::ClosureViolation(_))
        ));
        let zero = vec![("0".to_string(), SphereHamiltonian::zero(1))];
        assert!(matches!(
            build_algebra(&zero, &[vec![1]]),
            Err(TorusError::ClosureViolation(_))
        ));
        let irrational = vec![("0".to_string(), SphereHamiltonian::zero(2))];
        assert!(matches!(
            build_algebra(&irrational, &[vec![0, 0], vec![1, 1]]),
            Err(TorusError::NonRationalLevel { .. })
        ));
    }

    #[test]
    fn reeb_label_has_zero_oscillation() {
        let s = SphereHamiltonian::constant(1, Exponent::from_integer(3));
        let hams = vec![
            ("0".to_string(), SphereHamiltonian::zero(1)),
            ("R".to_string(), s.clone()),
            ("-R".to_string(), s.neg()),
        ];
        let a = build_algebra(&hams, &[vec![0]]).unwrap();
        assert_eq!(a.oscillation("R").unwrap(), crate::exponent::Level::finite(0));
    }

    #[test]
    fn invalid_meshes_are_rejected() {
        let half = vec![
            vec![q_int(1), q_int(0)],
            vec![q_int(0), q_int(1)],
            vec![q_int(-1), q_int(0)],
        ];
        assert!(SphereMesh::new(half, vec![vec![0, 1], vec![1, 2]]).is_err());
        let not_unit = vec![vec![q_int(2), q_int(0)], vec![q_int(0), q_int(1)]];
        assert!(SphereMesh::new(not_unit, vec![vec![0, 1]]).is_err());
    }

    #[test]
    fn sample_tables() {
        let mut csv = String::from("# H(u) = u1\n");
        let m = 720;
        for i in 0..m {
            let t = i as f64 * std::f64::consts::TAU / m as f64;
            csv.push_str(&format!("{},{},{}\n", t.cos(), t.sin(), t.cos()));
        }
        let h = SphereHamiltonian::from_samples_csv(&csv).unwrap();
        let c = h.shape_spectral();
        assert!((c.to_f64() - 1.0).abs() <= c.tolerance());
        let c = h.class_spectral(&[0, 2]).unwrap();
        assert!((c.to_f64() - 5f64.sqrt()).abs() <= c.tolerance() + 1e-12);
        let s = h.spectrum(&[0, 0]).unwrap();
        assert_eq!(s.values.len(), 2);
        assert!(matches!(
            SphereHamiltonian::from_samples_csv("1,0,x\n"),
            Err(TorusError::InvalidSamples { line: 1, .. })
        ));
        let coarse = "1,0,0\n0,1,1\n-1,0,0\n0,-1,1\n";
        assert!(matches!(
            SphereHamiltonian::from_samples_csv(coarse).unwrap().spectrum(&[0, 0]),
            Err(TorusError::ResolutionTooCoarse(_))
        ));
    }

    #[test]
    fn ham_specs() {
        assert_eq!(parse_ham_spec("linear:1", None).unwrap(), p());
        let h = parse_ham_spec("linear:1,0+const:1/2", None).unwrap();
        assert_eq!(h.shape_spectral(), SphereValue::Exact(Real::from(Exponent::new(3, 2))));
        assert_eq!(parse_ham_spec("const:2", Some(3)).unwrap().dim(), 3);
        assert!(parse_ham_spec("cubic:1", None).is_err());
        assert_eq!(parse_class("3, -4").unwrap(), vec![3, -4]);
    }

    fn arb_octahedral() -> impl Strategy<Value = SphereHamiltonian> {
        (prop::array::uniform6(-4i64..5), prop::array::uniform3(-3i64..4)).prop_map(|(v, a)| {
            octahedral(v)
                .add(&SphereHamiltonian::linear(
                    a.iter().map(|&x| Exponent::from_integer(x)).collect(),
                ))
                .unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn subadditive_in_hamiltonian_and_class(h in arb_octahedral(), g in arb_octahedral(),
                                               k in prop::array::uniform3(-3i64..4), l in prop::array::uniform3(-3i64..4)) {
            let kl: Vec<i64> = k.iter().zip(&l).map(|(a, b)| a + b).collect();
            let lhs = h.add(&g).unwrap().class_spectral(&kl).unwrap();
            let rhs = h.class_spectral(&k).unwrap().add(&g.class_spectral(&l).unwrap());
            prop_assert!(lhs.le(&rhs));
        }

        #[test]
        fn class_spectral_is_in_spectrum(h in arb_octahedral(), k in prop::array::uniform3(-3i64..4)) {
            let c = h.class_spectral(&k).unwrap();
            prop_assert!(h.spectrum(&k).unwrap().contains(&c));
        }

        #[test]
        fn oscillation_is_max_minus_min(h in arb_octahedral()) {
            prop_assert_eq!(h.oscillation_exact(), h.shape_spectral().add(&h.neg().shape_spectral()));
            prop_assert!(SphereValue::Exact(Real::zero()).le(&h.oscillation_exact()));
        }

        #[test]
        fn order_is_antisymmetric(h in arb_octahedral(), g in arb_octahedral()) {
            let both = h.order_leq(&g).unwrap() && g.order_leq(&h).unwrap();
            // H − G is linear on each octant cone, so it vanishes iff it
            // vanishes at the six vertices.
            let d = h.sub(&g).unwrap();
            let equal = d.represented_directions().iter().all(|u| d.evaluate(u).abs() < 1e-12);
            prop_assert_eq!(both, equal);
        }
    }
}
