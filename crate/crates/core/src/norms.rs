//! Minkowski norms and the orthogonality relations defined through them.
//!
//! A norm is described by a [`NormSpec`]: the Euclidean norm, an `l_p` norm
//! with `1 <= p <= inf`, or a polyhedral norm given by the vertices of its
//! (centrally symmetric) unit ball. Polyhedral balls are converted once into
//! facet functionals `a_k` so that `||v|| = max_k <a_k, v>`.

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::linalg;
use crate::tolerance::Tolerances;

/// Highest dimension for which polyhedral balls are accepted.
pub const MAX_POLYHEDRAL_DIM: usize = 4;

/// Coordinate tolerance used when ingesting polyhedral vertex lists.
const VERTEX_TOL: f64 = 1e-9;

/// Upper bound on vertex subsets examined during facet enumeration.
const MAX_FACET_CANDIDATES: u64 = 5_000_000;

/// Unit ball of a polyhedral norm: the input vertices plus the facet
/// functionals derived from them.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyhedralBall {
    dim: usize,
    vertices: Vec<DVector<f64>>,
    facets: Vec<DVector<f64>>,
}

impl PolyhedralBall {
    /// Builds the ball from a centrally symmetric vertex list.
    ///
    /// Facets are enumerated by brute force over `d`-subsets of vertices:
    /// every subset whose affine hull avoids the origin defines a functional
    /// `a` with `<a, v> = 1` on the subset, and it is kept when no vertex
    /// exceeds 1. This is exact and cheap for the low dimensions supported.
    pub fn from_vertices(vertices: Vec<DVector<f64>>) -> Result<Self> {
        let first = vertices
            .first()
            .ok_or_else(|| GeomError::DegenerateBall("empty vertex list".into()))?;
        let dim = first.len();
        if dim < 2 {
            return Err(GeomError::DegenerateBall(format!(
                "dimension {dim} is below 2"
            )));
        }
        if dim > MAX_POLYHEDRAL_DIM {
            return Err(GeomError::InvalidNorm(format!(
                "polyhedral norms are supported up to dimension {MAX_POLYHEDRAL_DIM}, got {dim}"
            )));
        }
        for v in &vertices {
            if v.len() != dim {
                return Err(GeomError::DimensionMismatch {
                    expected: dim,
                    got: v.len(),
                });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(GeomError::DegenerateBall("non-finite coordinate".into()));
            }
        }
        let scale = vertices.iter().map(|v| v.amax()).fold(0.0, f64::max);
        if scale == 0.0 {
            return Err(GeomError::DegenerateBall("all vertices are zero".into()));
        }
        let coord_tol = VERTEX_TOL * scale;
        for v in &vertices {
            if !vertices.iter().any(|w| (v + w).amax() <= coord_tol) {
                return Err(GeomError::DegenerateBall(format!(
                    "vertex {:?} has no antipode; the ball must be centrally symmetric",
                    v.as_slice()
                )));
            }
        }
        if linalg::rank(&vertices, VERTEX_TOL) < dim {
            return Err(GeomError::DegenerateBall(
                "vertices span a proper subspace; the origin is not interior".into(),
            ));
        }

        let candidates = binomial(vertices.len() as u64, dim as u64);
        if candidates > MAX_FACET_CANDIDATES {
            return Err(GeomError::InvalidNorm(format!(
                "{} vertices in dimension {dim} is too many for facet enumeration",
                vertices.len()
            )));
        }

        let ones = DVector::from_element(dim, 1.0);
        let mut facets: Vec<DVector<f64>> = Vec::new();
        for subset in (0..vertices.len()).combinations(dim) {
            let rows = DMatrix::from_fn(dim, dim, |r, c| vertices[subset[r]][c]);
            let Some(a) = rows.lu().solve(&ones) else {
                continue;
            };
            if !a.iter().all(|x| x.is_finite()) {
                continue;
            }
            // The solve may succeed on nearly singular subsets; confirm it.
            let fits = subset
                .iter()
                .all(|&i| (a.dot(&vertices[i]) - 1.0).abs() <= VERTEX_TOL);
            if !fits {
                continue;
            }
            let supporting = vertices.iter().all(|w| a.dot(w) <= 1.0 + VERTEX_TOL);
            if !supporting {
                continue;
            }
            let atol = VERTEX_TOL * a.amax().max(1.0);
            if !facets.iter().any(|f| (f - &a).amax() <= atol) {
                facets.push(a);
            }
        }
        if facets.len() < 2 * dim {
            return Err(GeomError::DegenerateBall(format!(
                "only {} facets found; the ball is not full-dimensional",
                facets.len()
            )));
        }
        Ok(Self {
            dim,
            vertices,
            facets,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[DVector<f64>] {
        &self.vertices
    }

    /// Facet functionals `a_k`; the ball is `{ x : <a_k, x> <= 1 for all k }`.
    pub fn facets(&self) -> &[DVector<f64>] {
        &self.facets
    }

    /// Minkowski functional of the ball.
    pub fn gauge(&self, v: &DVector<f64>) -> f64 {
        self.facets
            .iter()
            .map(|a| a.dot(v))
            .fold(0.0_f64, f64::max)
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// The norm of the ambient space.
#[derive(Debug, Clone, PartialEq)]
pub enum NormSpec {
    Euclidean,
    /// `l_p` norm; `f64::INFINITY` stands for the maximum norm.
    Lp(f64),
    Polyhedral(PolyhedralBall),
}

impl NormSpec {
    pub fn lp(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(GeomError::InvalidNorm(format!(
                "l_p exponent must satisfy p >= 1, got {p}"
            )));
        }
        Ok(Self::Lp(p))
    }

    pub fn max_norm() -> Self {
        Self::Lp(f64::INFINITY)
    }

    pub fn polyhedral(vertices: Vec<DVector<f64>>) -> Result<Self> {
        PolyhedralBall::from_vertices(vertices).map(Self::Polyhedral)
    }

    /// Dimension fixed by the norm, if any.
    pub fn fixed_dim(&self) -> Option<usize> {
        match self {
            Self::Polyhedral(ball) => Some(ball.dim),
            _ => None,
        }
    }

    pub fn check_dim(&self, d: usize) -> Result<()> {
        match self.fixed_dim() {
            Some(expected) if expected != d => Err(GeomError::DimensionMismatch { expected, got: d }),
            _ => Ok(()),
        }
    }

    /// Validates the exponent of an `l_p` norm built without [`NormSpec::lp`].
    pub fn validate(&self) -> Result<()> {
        if let Self::Lp(p) = self {
            Self::lp(*p)?;
        }
        Ok(())
    }

    /// True for norms whose unit sphere has no corners and no segments.
    pub fn is_smooth_and_strictly_convex(&self) -> bool {
        match self {
            Self::Euclidean => true,
            Self::Lp(p) => *p > 1.0 && p.is_finite(),
            Self::Polyhedral(_) => false,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Self::Euclidean => "euclidean".into(),
            Self::Lp(p) if p.is_infinite() => "linf".into(),
            Self::Lp(p) => format!("l{p}"),
            Self::Polyhedral(ball) => format!("polyhedral[{}]", ball.vertices.len()),
        }
    }

    /// `||v||`, without the dimension check.
    pub(crate) fn norm_unchecked(&self, v: &DVector<f64>) -> f64 {
        match self {
            Self::Euclidean => v.norm(),
            Self::Lp(p) => lp_norm(v, *p),
            Self::Polyhedral(ball) => ball.gauge(v),
        }
    }

    /// `||a - b||`, without the dimension check.
    pub(crate) fn dist_unchecked(&self, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
        self.norm_unchecked(&(a - b))
    }

    pub fn dist(&self, a: &DVector<f64>, b: &DVector<f64>) -> Result<f64> {
        if a.len() != b.len() {
            return Err(GeomError::DimensionMismatch {
                expected: a.len(),
                got: b.len(),
            });
        }
        eval_norm(self, &(a - b))
    }
}

fn lp_norm(v: &DVector<f64>, p: f64) -> f64 {
    if p == 1.0 {
        return v.lp_norm(1);
    }
    if p == 2.0 {
        return v.norm();
    }
    let m = v.amax();
    if p.is_infinite() || m == 0.0 {
        return m;
    }
    m * v.iter().map(|x| (x.abs() / m).powf(p)).sum::<f64>().powf(1.0 / p)
}

/// `||v||` under `spec`.
pub fn eval_norm(spec: &NormSpec, v: &DVector<f64>) -> Result<f64> {
    spec.check_dim(v.len())?;
    spec.validate()?;
    Ok(spec.norm_unchecked(v))
}

fn check_pair(spec: &NormSpec, x: &DVector<f64>, y: &DVector<f64>) -> Result<()> {
    if x.len() != y.len() {
        return Err(GeomError::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    spec.check_dim(x.len())?;
    spec.validate()
}

/// `x ⊥_I y`: `||x + y|| = ||x - y||` up to `eps_geom * max(1, ||x||, ||y||)`.
pub fn is_isosceles_orthogonal(
    spec: &NormSpec,
    x: &DVector<f64>,
    y: &DVector<f64>,
    tol: &Tolerances,
) -> Result<bool> {
    check_pair(spec, x, y)?;
    let plus = spec.norm_unchecked(&(x + y));
    let minus = spec.norm_unchecked(&(x - y));
    let scale = spec.norm_unchecked(x).max(spec.norm_unchecked(y));
    Ok((plus - minus).abs() <= tol.scaled(scale))
}

/// `min_alpha ||x + alpha y||` and its minimiser, by golden-section search.
///
/// The minimiser lies in `|alpha| <= 2||x||/||y||`, since outside that range
/// `||x + alpha y|| >= |alpha| ||y|| - ||x|| > ||x||`.
pub fn min_along_direction(
    spec: &NormSpec,
    x: &DVector<f64>,
    y: &DVector<f64>,
    tol: &Tolerances,
) -> Result<(f64, f64)> {
    check_pair(spec, x, y)?;
    let ny = spec.norm_unchecked(y);
    if ny == 0.0 {
        return Err(GeomError::ZeroVector);
    }
    let nx = spec.norm_unchecked(x);
    if nx == 0.0 {
        return Ok((0.0, 0.0));
    }
    let f = |alpha: f64| spec.norm_unchecked(&(x + y * alpha));
    let bound = 2.0 * nx / ny;
    let (alpha, value) = golden_section(f, -bound, bound, tol.eps_opt * bound, tol.max_iters);
    // The bracket ends and zero are cheap to compare against.
    let best = [(alpha, value), (0.0, nx)]
        .into_iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap_or((alpha, value));
    Ok(best)
}

fn golden_section(
    f: impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    width: f64,
    max_iters: usize,
) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - inv_phi * (hi - lo);
    let mut b = lo + inv_phi * (hi - lo);
    let mut fa = f(a);
    let mut fb = f(b);
    let mut iters = 0;
    while hi - lo > width && iters < max_iters {
        if fa <= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - inv_phi * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + inv_phi * (hi - lo);
            fb = f(b);
        }
        iters += 1;
    }
    if fa <= fb {
        (a, fa)
    } else {
        (b, fb)
    }
}

/// `x ⊥_B y`: `||x + alpha y|| >= ||x||` for every `alpha`, up to
/// `eps_geom * max(1, ||x||)`.
pub fn is_birkhoff_orthogonal(
    spec: &NormSpec,
    x: &DVector<f64>,
    y: &DVector<f64>,
    tol: &Tolerances,
) -> Result<bool> {
    let (_, min) = min_along_direction(spec, x, y, tol)?;
    let nx = spec.norm_unchecked(x);
    Ok(min >= nx - tol.scaled(nx))
}

/// Seed of the random part of the normality probing set.
const PROBE_SEED: u64 = 0x6d6f_6e67_6500_0001;

/// Directions used to test normality of a vector to a hyperplane: the basis,
/// all pairwise sums and differences, and `2(d-1)` random unit combinations.
pub fn normality_probes(basis: &[DVector<f64>]) -> Vec<DVector<f64>> {
    let mut probes: Vec<DVector<f64>> = basis.to_vec();
    for (i, j) in (0..basis.len()).tuple_combinations() {
        probes.push(&basis[i] + &basis[j]);
        probes.push(&basis[i] - &basis[j]);
    }
    if let Some(first) = basis.first() {
        let mut rng = ChaCha8Rng::seed_from_u64(PROBE_SEED);
        let mut extra = 0;
        while extra < 2 * basis.len() {
            let mut w = DVector::zeros(first.len());
            for b in basis {
                let c: f64 = StandardNormal.sample(&mut rng);
                w += b * c;
            }
            let n = w.norm();
            if n > 0.0 {
                probes.push(w / n);
                extra += 1;
            }
        }
    }
    probes
}

/// Whether `v` is normal to the hyperplane spanned by `basis`, i.e. every
/// probe direction of the hyperplane is Birkhoff orthogonal to `v`.
///
/// For non-smooth norms the probing set is a finite approximation of the
/// full quantifier over all parallel directions.
pub fn is_normal_to_hyperplane(
    spec: &NormSpec,
    v: &DVector<f64>,
    basis: &[DVector<f64>],
    tol: &Tolerances,
) -> Result<bool> {
    let d = v.len();
    spec.check_dim(d)?;
    if basis.len() + 1 != d {
        return Err(GeomError::DegenerateBasis(format!(
            "expected {} basis vectors in dimension {d}, got {}",
            d.saturating_sub(1),
            basis.len()
        )));
    }
    if let Some(b) = basis.iter().find(|b| b.len() != d) {
        return Err(GeomError::DimensionMismatch {
            expected: d,
            got: b.len(),
        });
    }
    if linalg::rank(basis, tol.eps_geom) < basis.len() {
        return Err(GeomError::DegenerateBasis(
            "basis vectors are linearly dependent".into(),
        ));
    }
    let mut with_v = basis.to_vec();
    with_v.push(v.clone());
    if linalg::rank(&with_v, tol.eps_geom) < d {
        return Err(GeomError::DegenerateBasis(
            "vector lies in the span of the hyperplane basis".into(),
        ));
    }
    for w in normality_probes(basis) {
        if !is_birkhoff_orthogonal(spec, v, &w, tol)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exponent of an `l_p` record: a number, or the string `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum ExponentRecord {
    Number(f64),
    Text(InfinityTag),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
enum InfinityTag {
    #[serde(rename = "inf")]
    Inf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum NormKind {
    Euclidean,
    Lp,
    Polyhedral,
}

/// Wire form: `{"kind": "euclidean" | "lp" | "polyhedral", "p": .., "vertices": ..}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NormRecord {
    kind: NormKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<ExponentRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vertices: Option<Vec<Vec<f64>>>,
}

impl TryFrom<NormRecord> for NormSpec {
    type Error = GeomError;

    fn try_from(rec: NormRecord) -> Result<Self> {
        match rec.kind {
            NormKind::Euclidean => {
                if rec.p.is_some() || rec.vertices.is_some() {
                    return Err(GeomError::InvalidNorm(
                        "euclidean norm takes no parameters".into(),
                    ));
                }
                Ok(Self::Euclidean)
            }
            NormKind::Lp => {
                if rec.vertices.is_some() {
                    return Err(GeomError::InvalidNorm("lp norm takes no vertices".into()));
                }
                match rec.p {
                    Some(ExponentRecord::Number(p)) => Self::lp(p),
                    Some(ExponentRecord::Text(InfinityTag::Inf)) => Ok(Self::max_norm()),
                    None => Err(GeomError::InvalidNorm("lp norm requires \"p\"".into())),
                }
            }
            NormKind::Polyhedral => {
                if rec.p.is_some() {
                    return Err(GeomError::InvalidNorm(
                        "polyhedral norm takes no exponent".into(),
                    ));
                }
                let vertices = rec.vertices.ok_or_else(|| {
                    GeomError::InvalidNorm("polyhedral norm requires \"vertices\"".into())
                })?;
                Self::polyhedral(vertices.into_iter().map(DVector::from_vec).collect())
            }
        }
    }
}

impl From<&NormSpec> for NormRecord {
    fn from(spec: &NormSpec) -> Self {
        match spec {
            NormSpec::Euclidean => NormRecord {
                kind: NormKind::Euclidean,
                p: None,
                vertices: None,
            },
            NormSpec::Lp(p) => NormRecord {
                kind: NormKind::Lp,
                p: Some(if p.is_infinite() {
                    ExponentRecord::Text(InfinityTag::Inf)
                } else {
                    ExponentRecord::Number(*p)
                }),
                vertices: None,
            },
            NormSpec::Polyhedral(ball) => NormRecord {
                kind: NormKind::Polyhedral,
                p: None,
                vertices: Some(ball.vertices.iter().map(|v| v.as_slice().to_vec()).collect()),
            },
        }
    }
}

impl Serialize for NormSpec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        NormRecord::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for NormSpec {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rec = NormRecord::deserialize(deserializer)?;
        NormSpec::try_from(rec).map_err(serde::de::Error::custom)
    }
}
