//! Centers of a simplex with respect to a chosen (circum)center `M`.
//!
//! With `S = sum_i (A_i - M)` the distinguished points all sit on the ray
//! from `M` in direction `S`:
//!
//! | point | formula |
//! |-------|---------|
//! | centroid `G` | `M + S/(d+1)` |
//! | Feuerbach center `F_M` | `M + S/d` |
//! | Monge point `N_M` | `M + S/(d-1)` |
//! | complementary point `P_M` | `M + S` |
//!
//! The Monge and complementary points are affine constructions and accept
//! any `M`; the Feuerbach sphere needs `M` to be a circumcenter because its
//! radius is `R/d`.

use serde::{Deserialize, Serialize};

use crate::affine::{hyperplane_meet, Hyperplane, Line, Point, Segment};
use crate::circumcenter::{is_circumcenter, solve_circumcenter_with, vertex_distances, SolverOptions};
use crate::error::{GeomError, Result};
use crate::linalg;
use crate::norms::NormSpec;
use crate::simplex::{centroid, face_centroid, facet_centroid, FaceIndex, Simplex};
use crate::tolerance::Tolerances;

/// Below this normalised volume a ridge and the direction `G(E_F) - M` are
/// treated as parallel and the M-hyperplane is skipped.
const PARALLEL_VOLUME_TOL: f64 = 1e-8;

fn check_point(t: &Simplex, m: &Point) -> Result<()> {
    if m.len() != t.dim() {
        return Err(GeomError::DimensionMismatch {
            expected: t.dim(),
            got: m.len(),
        });
    }
    if t.dim() < 2 {
        return Err(GeomError::InvalidInput("d = 1 has no Monge point".into()));
    }
    Ok(())
}

/// `N_M = M + S/(d-1)`.
pub fn monge_point(t: &Simplex, m: &Point) -> Result<Point> {
    check_point(t, m)?;
    Ok(m + t.vertex_offset_sum(m) / (t.dim() as f64 - 1.0))
}

/// `P_M = M + S`.
pub fn complementary_point(t: &Simplex, m: &Point) -> Result<Point> {
    check_point(t, m)?;
    Ok(m + t.vertex_offset_sum(m))
}

/// Complementary line of the facet opposite `A_j`: through `A_j`, parallel
/// to `G_j - M`. `None` when `M` is the facet centroid.
pub fn complementary_line(t: &Simplex, m: &Point, j: usize) -> Result<Option<Line>> {
    check_point(t, m)?;
    let dir = facet_centroid(t, j) - m;
    if dir.iter().all(|&x| x == 0.0) {
        return Ok(None);
    }
    Line::new(t.vertex(j).clone(), dir).map(Some)
}

fn certified_radius(spec: &NormSpec, t: &Simplex, m: &Point, tol: &Tolerances) -> Result<f64> {
    check_point(t, m)?;
    match is_circumcenter(spec, t, m, tol)? {
        Some(r) => Ok(r),
        None => {
            let dists = vertex_distances(spec, t, m);
            let r = dists.iter().sum::<f64>() / dists.len() as f64;
            let residual = dists.iter().map(|x| (x - r).abs()).fold(0.0, f64::max);
            Err(GeomError::NotCircumcenter { residual })
        }
    }
}

/// Feuerbach center `F_M = M + S/d` and radius `R/d`.
pub fn feuerbach_center(spec: &NormSpec, t: &Simplex, m: &Point, tol: &Tolerances) -> Result<(Point, f64)> {
    let r = certified_radius(spec, t, m, tol)?;
    let d = t.dim() as f64;
    Ok((m + t.vertex_offset_sum(m) / d, r / d))
}

/// The `2(d+1)` points on the Feuerbach sphere: the facet centroids `G_i`
/// and the points `L_i = N_M + (A_i - N_M)/d` dividing `[N_M, A_i]` in the
/// ratio `1:(d-1)`.
pub fn feuerbach_incidence_points(
    spec: &NormSpec,
    t: &Simplex,
    m: &Point,
    tol: &Tolerances,
) -> Result<(Vec<Point>, Vec<Point>)> {
    certified_radius(spec, t, m, tol)?;
    Ok(incidence_points_unchecked(t, m))
}

fn incidence_points_unchecked(t: &Simplex, m: &Point) -> (Vec<Point>, Vec<Point>) {
    let d = t.dim() as f64;
    let f = m + t.vertex_offset_sum(m) / d;
    let n = t.vertices().len();
    let gs = (0..n).map(|i| facet_centroid(t, i)).collect();
    let ls = t.vertices().iter().map(|a| &f + (a - m) / d).collect();
    (gs, ls)
}

/// A Monge line: through the centroid of ridge `F`, parallel to the line
/// from `M` to the midpoint of the opposite edge.
#[derive(Debug, Clone, PartialEq)]
pub struct MongeLine {
    pub ridge: FaceIndex,
    pub edge: FaceIndex,
    pub line: Line,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MongeLines {
    pub lines: Vec<MongeLine>,
    /// Ridge/edge pairs skipped because `M` is the edge midpoint.
    pub skipped: Vec<(FaceIndex, FaceIndex)>,
}

fn coincidence_tol(t: &Simplex, tol: &Tolerances) -> f64 {
    tol.scaled(t.euclidean_diameter())
}

pub fn monge_lines(t: &Simplex, m: &Point, tol: &Tolerances) -> Result<MongeLines> {
    check_point(t, m)?;
    let eps = coincidence_tol(t, tol);
    let mut out = MongeLines {
        lines: Vec::new(),
        skipped: Vec::new(),
    };
    for (ridge, edge) in t.ridge_edge_pairs() {
        let mid = face_centroid(t, &edge)?;
        let dir = &mid - m;
        if dir.norm() <= eps {
            out.skipped.push((ridge, edge));
            continue;
        }
        let line = Line::new(face_centroid(t, &ridge)?, dir)?;
        out.lines.push(MongeLine { ridge, edge, line });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MHyperplane {
    pub ridge: FaceIndex,
    pub edge: FaceIndex,
    pub hyperplane: Hyperplane,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MHyperplanes {
    pub hyperplanes: Vec<MHyperplane>,
    /// Pairs with `M = G(E_F)` or `<M G(E_F)>` parallel to `F`.
    pub skipped: Vec<(FaceIndex, FaceIndex)>,
}

/// M-hyperplanes: the hyperplane containing ridge `F` and parallel to the
/// line through `M` and the midpoint of the opposite edge.
pub fn m_hyperplanes(t: &Simplex, m: &Point, tol: &Tolerances) -> Result<MHyperplanes> {
    check_point(t, m)?;
    let eps = coincidence_tol(t, tol);
    let mut out = MHyperplanes {
        hyperplanes: Vec::new(),
        skipped: Vec::new(),
    };
    for (ridge, edge) in t.ridge_edge_pairs() {
        let mid = face_centroid(t, &edge)?;
        let dir = &mid - m;
        if dir.norm() <= eps {
            out.skipped.push((ridge, edge));
            continue;
        }
        let r0 = t.vertex(ridge.indices()[0]);
        let mut spanning: Vec<Point> = ridge.indices()[1..]
            .iter()
            .map(|&k| t.vertex(k) - r0)
            .collect();
        spanning.push(dir);
        let units: Vec<Point> = spanning.iter().map(|s| s.normalize()).collect();
        if linalg::cofactor_normal(&units).norm() <= PARALLEL_VOLUME_TOL {
            out.skipped.push((ridge, edge));
            continue;
        }
        let hyperplane = Hyperplane::new(face_centroid(t, &ridge)?, spanning)?;
        out.hyperplanes.push(MHyperplane {
            ridge,
            edge,
            hyperplane,
        });
    }
    Ok(out)
}

/// One affine division ratio measured along the Euler line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioCheck {
    pub claim: String,
    /// Expected `m:n`; `None` when the two points coincide by construction.
    pub expected: Option<(f64, f64)>,
    /// Affine parameter of the dividing point on the segment.
    pub parameter: f64,
    pub relative_error: f64,
}

impl RatioCheck {
    fn measure(claim: &str, seg: &Segment, p: &Point, m: f64, n: f64) -> Result<Self> {
        let t = seg.parameter_of(p)?;
        let expected = m / (m + n);
        Ok(Self {
            claim: claim.into(),
            expected: Some((m, n)),
            parameter: t,
            relative_error: (t - expected).abs() / expected,
        })
    }

    fn coincident(claim: &str, gap: f64) -> Self {
        Self {
            claim: claim.into(),
            expected: None,
            parameter: 1.0,
            relative_error: gap,
        }
    }
}

/// Named residual with the limit it was checked against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub claim: String,
    pub value: f64,
    pub limit: f64,
    pub passed: bool,
}

impl Residual {
    pub fn new(claim: impl Into<String>, value: f64, limit: f64) -> Self {
        Self {
            claim: claim.into(),
            value,
            limit,
            passed: value <= limit,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineRecord {
    pub base: Vec<f64>,
    pub direction: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentersReport {
    pub center: Vec<f64>,
    pub radius: f64,
    pub centroid: Vec<f64>,
    pub monge_point: Vec<f64>,
    pub complementary_point: Vec<f64>,
    pub feuerbach_center: Vec<f64>,
    pub feuerbach_radius: f64,
    pub euler_line: Option<LineRecord>,
    pub collapsed: bool,
    pub facet_centroids: Vec<Vec<f64>>,
    pub division_points: Vec<Vec<f64>>,
    pub monge_lines_defined: usize,
    pub m_hyperplanes_defined: usize,
    pub ratios: Vec<RatioCheck>,
    pub residuals: Vec<Residual>,
}

impl CentersReport {
    pub fn all_passed(&self) -> bool {
        self.residuals.iter().all(|r| r.passed)
    }

    pub fn residual(&self, claim: &str) -> Option<&Residual> {
        self.residuals.iter().find(|r| r.claim == claim)
    }
}

fn vec_of(p: &Point) -> Vec<f64> {
    p.as_slice().to_vec()
}

/// Relative tolerance for the Euler ratios.
pub const RATIO_TOL: f64 = 1e-10;
/// Relative tolerance for Feuerbach sphere incidences.
pub const SPHERE_TOL: f64 = 1e-8;
/// Concurrency tolerance, relative to the simplex diameter.
pub const CONCURRENCY_TOL: f64 = 1e-8;

/// Computes every center of `t` with respect to `m`, or with respect to a
/// solver-located circumcenter when `m` is `None`, and checks the Monge,
/// Euler and Feuerbach identities on the result.
pub fn full_report(
    spec: &NormSpec,
    t: &Simplex,
    m: Option<&Point>,
    tol: &Tolerances,
    opts: &SolverOptions,
) -> Result<CentersReport> {
    let m: Point = match m {
        Some(m) => m.clone(),
        None => {
            let res = solve_circumcenter_with(spec, t, tol, opts)?;
            res.center_point()
                .filter(|_| res.is_found())
                .ok_or(GeomError::CircumcenterNotFound {
                    residual: res.residual,
                })?
        }
    };
    let radius = certified_radius(spec, t, &m, tol)?;
    let d = t.dim();
    let df = d as f64;

    let g = centroid(t);
    let n_m = monge_point(t, &m)?;
    let p_m = complementary_point(t, &m)?;
    let (f_m, r_f) = feuerbach_center(spec, t, &m, tol)?;
    let (gs, ls) = incidence_points_unchecked(t, &m);

    let diameter = t.euclidean_diameter();
    let collapsed = (&p_m - &m).norm() <= tol.scaled(diameter);
    let mut residuals = Vec::new();
    let mut ratios = Vec::new();

    let euler_line = if collapsed {
        let spread = [&g, &n_m, &p_m, &f_m]
            .iter()
            .map(|p| (*p - &m).norm())
            .fold(0.0, f64::max);
        residuals.push(Residual::new("collapse.coincidence", spread, tol.scaled(diameter)));
        None
    } else {
        let line = Line::new(m.clone(), &p_m - &m)?;
        let off = [&g, &n_m, &f_m]
            .iter()
            .map(|p| line.distance_to(p))
            .fold(0.0, f64::max);
        residuals.push(Residual::new("euler.collinearity", off, CONCURRENCY_TOL * diameter));

        let mp = Segment::new(m.clone(), p_m.clone())?;
        ratios.push(RatioCheck::measure("G divides [M,P_M] as 1:d", &mp, &g, 1.0, df)?);
        if d >= 3 {
            ratios.push(RatioCheck::measure("N_M divides [M,P_M] as 1:(d-2)", &mp, &n_m, 1.0, df - 2.0)?);
        } else {
            let gap = (&n_m - &p_m).norm() / (&p_m - &m).norm();
            ratios.push(RatioCheck::coincident("N_M coincides with P_M (d = 2)", gap));
        }
        let mn = Segment::new(m.clone(), n_m.clone())?;
        ratios.push(RatioCheck::measure("G divides [M,N_M] as (d-1):2", &mn, &g, df - 1.0, 2.0)?);
        let nm = Segment::new(n_m.clone(), m.clone())?;
        ratios.push(RatioCheck::measure("F_M divides [N_M,M] as 1:(d-1)", &nm, &f_m, 1.0, df - 1.0)?);
        ratios.push(RatioCheck::measure("F_M divides [M,P_M] as 1:(d-1)", &mp, &f_m, 1.0, df - 1.0)?);
        let worst = ratios.iter().map(|r| r.relative_error).fold(0.0, f64::max);
        residuals.push(Residual::new("euler.ratios", worst, RATIO_TOL));
        Some(LineRecord {
            base: vec_of(&m),
            direction: vec_of(&(&p_m - &m)),
        })
    };

    let ml = monge_lines(t, &m, tol)?;
    let monge_residual = ml
        .lines
        .iter()
        .map(|l| l.line.distance_to(&n_m))
        .fold(0.0, f64::max);
    residuals.push(Residual::new(
        "monge.lines_through_monge_point",
        monge_residual,
        CONCURRENCY_TOL * diameter,
    ));

    let mh = m_hyperplanes(t, &m, tol)?;
    let hyper_residual = mh
        .hyperplanes
        .iter()
        .map(|h| h.hyperplane.distance_to(&n_m))
        .fold(0.0, f64::max);
    residuals.push(Residual::new(
        "monge.hyperplanes_contain_monge_point",
        hyper_residual,
        CONCURRENCY_TOL * diameter,
    ));
    residuals.push(Residual::new(
        "monge.hyperplanes_defined_shortfall",
        d.saturating_sub(mh.hyperplanes.len()) as f64,
        0.0,
    ));
    if mh.hyperplanes.len() >= d {
        let hs: Vec<Hyperplane> = mh.hyperplanes.iter().map(|h| h.hyperplane.clone()).collect();
        if let Ok(Some((x, _))) = hyperplane_meet(&hs, tol) {
            residuals.push(Residual::new(
                "monge.hyperplane_intersection_is_monge_point",
                (&x - &n_m).norm(),
                CONCURRENCY_TOL * diameter,
            ));
        }
    }

    let sphere_dev = gs
        .iter()
        .chain(ls.iter())
        .map(|p| (spec.dist_unchecked(p, &f_m) - r_f).abs() / r_f)
        .fold(0.0, f64::max);
    residuals.push(Residual::new("feuerbach.incidence", sphere_dev, SPHERE_TOL));

    let complementary_dev = (0..t.vertices().len())
        .map(|j| (t.vertex(j) + (facet_centroid(t, j) - &m) * df - &p_m).norm())
        .fold(0.0, f64::max);
    residuals.push(Residual::new(
        "complementary.lines_meet_at_complementary_point",
        complementary_dev,
        CONCURRENCY_TOL * diameter.max(1.0),
    ));

    Ok(CentersReport {
        center: vec_of(&m),
        radius,
        centroid: vec_of(&g),
        monge_point: vec_of(&n_m),
        complementary_point: vec_of(&p_m),
        feuerbach_center: vec_of(&f_m),
        feuerbach_radius: r_f,
        euler_line,
        collapsed,
        facet_centroids: gs.iter().map(vec_of).collect(),
        division_points: ls.iter().map(vec_of).collect(),
        monge_lines_defined: ml.lines.len(),
        m_hyperplanes_defined: mh.hyperplanes.len(),
        ratios,
        residuals,
    })
}
