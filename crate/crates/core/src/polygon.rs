//! Cyclic polygons in normed planes.
//!
//! A polygon `A_0..A_d` (`d >= 3`) with circumcenter `M` is treated as the
//! planar shadow of a `(d+1)`-dimensional parallelepiped spanned by the
//! vectors `A_i - M`. Its centers are the images of points on the main
//! diagonal, and every subpolygon (drop one vertex) keeps `M` as a
//! circumcenter, which yields the circle families checked here.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::affine::{concurrence, Line, Point};
use crate::centers::Residual;
use crate::error::{GeomError, Result};
use crate::norms::NormSpec;
use crate::tolerance::Tolerances;

/// Largest vertex count accepted by [`parallelepiped_lift`].
pub const MAX_LIFT_VERTICES: usize = 20;

/// Residual limit of the polygon identities, relative to `R`.
pub const POLYGON_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct CyclicPolygon {
    vertices: Vec<Point>,
    center: Point,
    radius: f64,
    norm: NormSpec,
}

fn cross(o: &Point, a: &Point, b: &Point) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

impl CyclicPolygon {
    /// Validates the circumcircle and convex position. A clockwise vertex
    /// order is reversed (keeping `A_0` first) so the stored order is
    /// counterclockwise.
    pub fn new(vertices: Vec<Point>, center: Point, radius: f64, norm: NormSpec, tol: &Tolerances) -> Result<Self> {
        norm.validate()?;
        norm.check_dim(2)?;
        if vertices.len() < 4 {
            return Err(GeomError::InvalidPolygon(format!(
                "a cyclic polygon needs at least 4 vertices, got {}",
                vertices.len()
            )));
        }
        if center.len() != 2 {
            return Err(GeomError::DimensionMismatch {
                expected: 2,
                got: center.len(),
            });
        }
        for v in &vertices {
            if v.len() != 2 {
                return Err(GeomError::DimensionMismatch {
                    expected: 2,
                    got: v.len(),
                });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(GeomError::InvalidPolygon("non-finite coordinate".into()));
            }
        }
        if !(radius.is_finite() && radius > 0.0) {
            return Err(GeomError::InvalidPolygon(format!(
                "radius must be positive, got {radius}"
            )));
        }
        for (i, v) in vertices.iter().enumerate() {
            let dist = norm.dist_unchecked(v, &center);
            if (dist - radius).abs() > tol.eps_geom * radius {
                return Err(GeomError::InvalidPolygon(format!(
                    "vertex {i} is at distance {dist} from the center, not {radius}"
                )));
            }
        }

        let n = vertices.len();
        let area2: f64 = (0..n)
            .map(|i| {
                let a = &vertices[i];
                let b = &vertices[(i + 1) % n];
                a[0] * b[1] - a[1] * b[0]
            })
            .sum();
        let mut vertices = vertices;
        if area2 < 0.0 {
            vertices[1..].reverse();
        }

        let eps_len = tol.eps_geom * radius;
        for i in 0..n {
            if (&vertices[i] - &vertices[(i + 1) % n]).norm() <= eps_len {
                return Err(GeomError::InvalidPolygon(format!(
                    "vertices {i} and {} coincide",
                    (i + 1) % n
                )));
            }
        }
        let eps_turn = tol.eps_geom * radius * radius;
        let mut winding = 0.0;
        for i in 0..n {
            let a = &vertices[i];
            let b = &vertices[(i + 1) % n];
            let c = &vertices[(i + 2) % n];
            if cross(a, b, c) < -eps_turn {
                return Err(GeomError::InvalidPolygon(
                    "vertices are not in convex position order".into(),
                ));
            }
            let u = b - a;
            let w = c - b;
            winding += (u[0] * w[1] - u[1] * w[0]).atan2(u.dot(&w));
        }
        if (winding - std::f64::consts::TAU).abs() > 1e-6 {
            return Err(GeomError::InvalidPolygon(
                "vertex order winds more than once around the polygon".into(),
            ));
        }
        Ok(Self {
            vertices,
            center,
            radius,
            norm,
        })
    }

    /// Places vertices on `S(center, radius)` by radial projection of the
    /// unit directions at the given angles (radians). Increasing angles in
    /// `[0, 2 pi)` give a counterclockwise convex polygon.
    pub fn from_angles(norm: NormSpec, center: Point, radius: f64, angles: &[f64], tol: &Tolerances) -> Result<Self> {
        let vertices = angles
            .iter()
            .map(|&a| {
                let u = DVector::from_vec(vec![a.cos(), a.sin()]);
                let len = norm.norm_unchecked(&u);
                &center + u * (radius / len)
            })
            .collect();
        Self::new(vertices, center, radius, norm, tol)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn norm(&self) -> &NormSpec {
        &self.norm
    }

    /// `d`, one less than the vertex count.
    pub fn d(&self) -> usize {
        self.vertices.len() - 1
    }

    fn offset_sum(&self) -> Point {
        self.vertices
            .iter()
            .fold(Point::zeros(2), |acc, a| acc + (a - &self.center))
    }
}

/// Centers of a cyclic polygon on its Euler line.
#[derive(Debug, Clone, PartialEq)]
pub struct PolygonCenters {
    pub centroid: Point,
    pub feuerbach_center: Point,
    pub monge_point: Point,
    pub complementary_point: Point,
    pub spatial_center: Point,
}

pub fn polygon_centers(p: &CyclicPolygon) -> PolygonCenters {
    let m = &p.center;
    let s = p.offset_sum();
    let d = p.d() as f64;
    PolygonCenters {
        centroid: m + &s / (d + 1.0),
        feuerbach_center: m + &s / d,
        monge_point: m + &s / (d - 1.0),
        complementary_point: m + &s,
        spatial_center: m + &s * 0.5,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub name: String,
    pub center: Vec<f64>,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolygonReport {
    pub circumcenter: Vec<f64>,
    pub radius: f64,
    pub centroid: Vec<f64>,
    pub feuerbach_center: Vec<f64>,
    pub monge_point: Vec<f64>,
    pub complementary_point: Vec<f64>,
    pub spatial_center: Vec<f64>,
    /// `P_M^i`, complementary points of the subpolygons.
    pub sub_complementary: Vec<Vec<f64>>,
    /// `C_M^i`, spatial centers of the subpolygons.
    pub sub_spatial: Vec<Vec<f64>>,
    /// `N_M^i`, Monge points of the subpolygons.
    pub sub_monge: Vec<Vec<f64>>,
    /// `G_i`, centroids of the subpolygons.
    pub sub_centroids: Vec<Vec<f64>>,
    /// `E_i`, midpoints of `[A_i, P_M]`.
    pub midpoints: Vec<Vec<f64>>,
    /// `L_i`, points dividing `[N_M, A_i]` as `1:(d-1)`.
    pub division_points: Vec<Vec<f64>>,
    pub circles: Vec<Circle>,
}

fn v(p: &Point) -> Vec<f64> {
    p.as_slice().to_vec()
}

fn pt(c: &[f64]) -> Point {
    Point::from_column_slice(c)
}

/// Subpolygon quantities. Dropping `A_i` leaves a polygon with `d`
/// vertices, so its Monge point uses the divisor `d - 2`.
pub fn subpolygon_family(p: &CyclicPolygon) -> Result<PolygonReport> {
    let d = p.d();
    if d < 3 {
        return Err(GeomError::InvalidPolygon(format!(
            "subpolygons need d >= 3, got d = {d}"
        )));
    }
    let c = polygon_centers(p);
    let m = &p.center;
    let s = p.offset_sum();
    let df = d as f64;
    let mut report = PolygonReport {
        circumcenter: v(m),
        radius: p.radius,
        centroid: v(&c.centroid),
        feuerbach_center: v(&c.feuerbach_center),
        monge_point: v(&c.monge_point),
        complementary_point: v(&c.complementary_point),
        spatial_center: v(&c.spatial_center),
        sub_complementary: Vec::new(),
        sub_spatial: Vec::new(),
        sub_monge: Vec::new(),
        sub_centroids: Vec::new(),
        midpoints: Vec::new(),
        division_points: Vec::new(),
        circles: vec![
            Circle {
                name: "spatial (R/2)".into(),
                center: v(&c.spatial_center),
                radius: p.radius / 2.0,
            },
            Circle {
                name: "feuerbach (R/d)".into(),
                center: v(&c.feuerbach_center),
                radius: p.radius / df,
            },
            Circle {
                name: "monge (R/(d-2))".into(),
                center: v(&(m + &s / (df - 2.0))),
                radius: p.radius / (df - 2.0),
            },
        ],
    };
    for a in &p.vertices {
        let off = a - m;
        let sub_s = &s - &off;
        report.sub_complementary.push(v(&(m + &sub_s)));
        report.sub_spatial.push(v(&(m + &sub_s * 0.5)));
        report.sub_monge.push(v(&(m + &sub_s / (df - 2.0))));
        report.sub_centroids.push(v(&(m + &sub_s / df)));
        report.midpoints.push(v(&((a + &c.complementary_point) * 0.5)));
        report
            .division_points
            .push(v(&(&c.monge_point + (a - &c.monge_point) / df)));
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolygonVerification {
    pub circumcenter: Vec<f64>,
    pub claims: Vec<Residual>,
}

impl PolygonVerification {
    pub fn all_passed(&self) -> bool {
        self.claims.iter().all(|c| c.passed)
    }

    pub fn claim(&self, name: &str) -> Option<&Residual> {
        self.claims.iter().find(|c| c.claim == name)
    }
}

/// Lines `<A_i X_i>`, skipping those with `|A_i - X_i| <= eps_geom * R`,
/// and the largest distance from `target` to a surviving line. `None` when
/// fewer than two lines survive or the survivors do not meet.
fn pencil_residual(vertices: &[Point], others: &[Point], target: &Point, min_len: f64) -> Option<f64> {
    let lines: Vec<Line> = vertices
        .iter()
        .zip(others)
        .filter(|(a, x)| (*a - *x).norm() > min_len)
        .filter_map(|(a, x)| Line::new(a.clone(), x - a).ok())
        .collect();
    if lines.len() < 2 {
        return None;
    }
    let through_target = lines.iter().map(|l| l.distance_to(target)).fold(0.0, f64::max);
    match concurrence(&lines) {
        Ok(Some(c)) => Some(through_target.max(c.residual)),
        Err(_) => Some(through_target),
        Ok(None) => None,
    }
}

/// Checks the half-radius circle identities, the `R/d` and `R/(d-2)`
/// circles and both line pencils on `p`. Every residual is reported
/// relative to `R` and passes at [`POLYGON_TOL`].
pub fn verify_polygon_theorems(p: &CyclicPolygon, tol: &Tolerances) -> Result<PolygonVerification> {
    let rep = subpolygon_family(p)?;
    let norm = &p.norm;
    let r = p.radius;
    let d = p.d() as f64;
    let m = &p.center;
    let c = polygon_centers(p);
    let dist = |a: &Point, b: &[f64]| norm.dist_unchecked(a, &pt(b));
    let on_circle = |pts: &[Vec<f64>], center: &Point, radius: f64| {
        pts.iter()
            .map(|q| (dist(center, q) - radius).abs() / r)
            .fold(0.0, f64::max)
    };
    let mut claims = Vec::new();
    let mut push = |name: &str, value: f64| claims.push(Residual::new(name, value, POLYGON_TOL));

    // Every P_M^i is at distance R from P_M.
    push(
        "polygon.complementary_point_on_sub_spheres",
        on_circle(&rep.sub_complementary, &c.complementary_point, r),
    );

    let subs: Vec<Point> = rep.sub_complementary.iter().map(|q| pt(q)).collect();
    let pencil = pencil_residual(&p.vertices, &subs, &c.spatial_center, tol.eps_geom * r);
    let midpoint_gap = (&c.spatial_center - (m + &c.complementary_point) * 0.5).norm();
    push(
        "polygon.vertex_complementary_lines_meet_at_spatial_center",
        pencil.map_or(f64::INFINITY, |x| x.max(midpoint_gap) / r),
    );

    push(
        "polygon.midpoints_on_half_radius_circle",
        on_circle(&rep.midpoints, &c.spatial_center, r / 2.0),
    );

    let c_on_sub = rep
        .sub_spatial
        .iter()
        .map(|q| (norm.dist_unchecked(&pt(q), &c.spatial_center) - r / 2.0).abs() / r)
        .fold(0.0, f64::max);
    push(
        "polygon.spatial_centers_mutual_incidence",
        c_on_sub.max(on_circle(&rep.sub_spatial, &c.spatial_center, r / 2.0)),
    );

    let sub_monge: Vec<Point> = rep.sub_monge.iter().map(|q| pt(q)).collect();
    let pencil = pencil_residual(&p.vertices, &sub_monge, &c.monge_point, tol.eps_geom * r);
    let ratio_gap = p
        .vertices
        .iter()
        .zip(&sub_monge)
        .map(|(a, nm)| (a + (nm - a) * ((d - 2.0) / (d - 1.0)) - &c.monge_point).norm())
        .fold(0.0, f64::max);
    push(
        "polygon.vertex_monge_lines_meet_at_monge_point",
        pencil.map_or(f64::INFINITY, |x| x.max(ratio_gap) / r),
    );

    push(
        "polygon.sub_centroids_on_feuerbach_circle",
        on_circle(&rep.sub_centroids, &c.feuerbach_center, r / d),
    );
    push(
        "polygon.division_points_on_feuerbach_circle",
        on_circle(&rep.division_points, &c.feuerbach_center, r / d),
    );

    let monge_circle = pt(&rep.circles[2].center);
    push(
        "polygon.sub_monge_points_on_circle",
        on_circle(&rep.sub_monge, &monge_circle, r / (d - 2.0)),
    );

    let sum = &c.complementary_point - m;
    let euler = if sum.norm() <= tol.eps_geom * r {
        [&c.centroid, &c.feuerbach_center, &c.monge_point, &c.spatial_center]
            .iter()
            .map(|q| (*q - m).norm())
            .fold(0.0, f64::max)
    } else {
        let line = Line::new(m.clone(), sum)?;
        [&c.centroid, &c.feuerbach_center, &c.monge_point, &c.spatial_center]
            .iter()
            .map(|q| line.distance_to(q))
            .fold(0.0, f64::max)
    };
    push("polygon.euler_line_collinear", euler / r);

    Ok(PolygonVerification {
        circumcenter: v(m),
        claims,
    })
}

/// Vertex of the lifted parallelepiped: `V_S = M + sum_{i in S} (A_i - M)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiftVertex {
    pub subset: Vec<usize>,
    pub point: Vec<f64>,
}

/// All `2^(d+1)` projected parallelepiped vertices, ordered by subset
/// bitmask (bit `i` set when `A_i - M` is included).
pub fn parallelepiped_lift(p: &CyclicPolygon) -> Result<Vec<LiftVertex>> {
    let n = p.vertices.len();
    if n > MAX_LIFT_VERTICES {
        return Err(GeomError::InvalidInput(format!(
            "parallelepiped lift limited to {MAX_LIFT_VERTICES} vertices, got {n}"
        )));
    }
    let offsets: Vec<Point> = p.vertices.iter().map(|a| a - &p.center).collect();
    Ok((0u32..1 << n)
        .map(|mask| {
            let subset: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let point = subset
                .iter()
                .fold(p.center.clone(), |acc, &i| acc + &offsets[i]);
            LiftVertex {
                subset,
                point: v(&point),
            }
        })
        .collect())
}

/// Point dividing the main diagonal `[V_empty, V_full]` in the ratio `1:k`.
pub fn main_diagonal_point(lift: &[LiftVertex], k: f64) -> Option<Point> {
    let start = pt(&lift.first()?.point);
    let end = pt(&lift.last()?.point);
    Some(&start + (end - &start) / (1.0 + k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::point;

    fn square(norm: NormSpec) -> CyclicPolygon {
        CyclicPolygon::new(
            vec![
                point(&[1.0, 0.0]),
                point(&[0.0, 1.0]),
                point(&[-1.0, 0.0]),
                point(&[0.0, -1.0]),
            ],
            point(&[0.0, 0.0]),
            1.0,
            norm,
            &Tolerances::default(),
        )
        .unwrap()
    }

    fn deg(a: &[f64]) -> Vec<f64> {
        a.iter().map(|x| x.to_radians()).collect()
    }

    #[test]
    fn square_centers_all_at_origin() {
        for norm in [NormSpec::Euclidean, NormSpec::lp(1.0).unwrap(), NormSpec::lp(3.0).unwrap()] {
            let c = polygon_centers(&square(norm));
            for q in [&c.centroid, &c.feuerbach_center, &c.monge_point, &c.complementary_point, &c.spatial_center] {
                assert!(q.norm() < 1e-15);
            }
        }
        let ver = verify_polygon_theorems(&square(NormSpec::lp(1.0).unwrap()), &Tolerances::default()).unwrap();
        assert!(ver.all_passed(), "{:#?}", ver.claims);
    }

    #[test]
    fn pentagon_center_formulas() {
        let tol = Tolerances::default();
        let p = CyclicPolygon::from_angles(NormSpec::Euclidean, point(&[0.5, -1.0]), 2.0, &deg(&[0.0, 50.0, 130.0, 200.0, 280.0]), &tol)
            .unwrap();
        let s = p.offset_sum();
        assert!(s.norm() > 0.1);
        let m = p.center().clone();
        let c = polygon_centers(&p);
        let close = |a: &Point, b: Point| (a - b).amax() < 1e-14;
        assert!(close(&c.centroid, &m + &s / 5.0));
        assert!(close(&c.feuerbach_center, &m + &s / 4.0));
        assert!(close(&c.monge_point, &m + &s / 3.0));
        assert!(close(&c.complementary_point, &m + &s));
        assert!(close(&c.spatial_center, &m + &s / 2.0));
    }

    #[test]
    fn euclidean_pentagon_passes_all_checks() {
        let tol = Tolerances::default();
        let p = CyclicPolygon::from_angles(NormSpec::Euclidean, point(&[0.0, 0.0]), 1.0, &deg(&[0.0, 50.0, 130.0, 200.0, 280.0]), &tol)
            .unwrap();
        let ver = verify_polygon_theorems(&p, &tol).unwrap();
        assert!(ver.claims.len() >= 8);
        for c in &ver.claims {
            assert!(c.value <= 1e-9, "{c:?}");
        }
    }

    #[test]
    fn l1_pentagon_passes_all_checks() {
        let tol = Tolerances::default();
        let l1 = NormSpec::lp(1.0).unwrap();
        let p = CyclicPolygon::from_angles(l1.clone(), point(&[0.0, 0.0]), 1.0, &deg(&[10.0, 80.0, 150.0, 215.0, 300.0]), &tol)
            .unwrap();
        for a in p.vertices() {
            assert!((a.lp_norm(1) - 1.0).abs() < 1e-15);
        }
        let ver = verify_polygon_theorems(&p, &tol).unwrap();
        for c in &ver.claims {
            assert!(c.value <= 1e-9, "{c:?}");
        }
    }

    #[test]
    fn subpolygon_identities() {
        let tol = Tolerances::default();
        let norm = NormSpec::lp(3.0).unwrap();
        let p = CyclicPolygon::from_angles(norm.clone(), point(&[1.0, 2.0]), 1.5, &deg(&[5.0, 70.0, 120.0, 190.0, 250.0, 320.0]), &tol)
            .unwrap();
        let rep = subpolygon_family(&p).unwrap();
        let pm = pt(&rep.complementary_point);
        for (a, sub) in p.vertices().iter().zip(&rep.sub_complementary) {
            let sub = pt(sub);
            assert!((&pm - (&sub + (a - p.center()))).amax() < 1e-14);
            assert!((norm.dist_unchecked(&pm, &sub) - 1.5).abs() < 1e-12);
        }
        for e in &rep.midpoints {
            assert!((norm.dist_unchecked(&pt(e), &pt(&rep.spatial_center)) - 0.75).abs() < 1e-12);
        }
    }

    #[test]
    fn clockwise_input_is_reoriented_and_star_rejected() {
        let tol = Tolerances::default();
        let ccw = CyclicPolygon::from_angles(NormSpec::Euclidean, point(&[0.0, 0.0]), 1.0, &deg(&[0.0, 72.0, 144.0, 216.0, 288.0]), &tol)
            .unwrap();
        let mut cw: Vec<Point> = ccw.vertices().to_vec();
        cw[1..].reverse();
        let p = CyclicPolygon::new(cw, point(&[0.0, 0.0]), 1.0, NormSpec::Euclidean, &tol).unwrap();
        assert_eq!(p.vertices(), ccw.vertices());

        let star = deg(&[0.0, 144.0, 288.0, 72.0, 216.0]);
        assert!(matches!(
            CyclicPolygon::from_angles(NormSpec::Euclidean, point(&[0.0, 0.0]), 1.0, &star, &tol),
            Err(GeomError::InvalidPolygon(_))
        ));
        let bowtie = deg(&[0.0, 90.0, 270.0, 180.0]);
        assert!(CyclicPolygon::from_angles(NormSpec::Euclidean, point(&[0.0, 0.0]), 1.0, &bowtie, &tol).is_err());
    }

    #[test]
    fn polygon_validation_errors() {
        let tol = Tolerances::default();
        let tri = deg(&[0.0, 120.0, 240.0]);
        assert!(CyclicPolygon::from_angles(NormSpec::Euclidean, point(&[0.0, 0.0]), 1.0, &tri, &tol).is_err());
        let off = CyclicPolygon::new(
            vec![point(&[1.0, 0.0]), point(&[0.0, 1.0]), point(&[-1.0, 0.0]), point(&[0.0, -1.1])],
            point(&[0.0, 0.0]),
            1.0,
            NormSpec::Euclidean,
            &tol,
        );
        assert!(matches!(off, Err(GeomError::InvalidPolygon(_))));
    }

    #[test]
    fn lift_examples() {
        let tol = Tolerances::default();
        let p = CyclicPolygon::from_angles(NormSpec::lp(1.0).unwrap(), point(&[0.0, 0.0]), 1.0, &deg(&[10.0, 80.0, 150.0, 215.0, 300.0]), &tol)
            .unwrap();
        let lift = parallelepiped_lift(&p).unwrap();
        assert_eq!(lift.len(), 32);
        let c = polygon_centers(&p);
        for (i, a) in p.vertices().iter().enumerate() {
            assert_eq!(pt(&lift[1 << i].point), *a);
        }
        assert_eq!(pt(&lift[0].point), *p.center());
        assert!((pt(&lift[31].point) - &c.complementary_point).amax() < 1e-14);
        assert!((main_diagonal_point(&lift, 1.0).unwrap() - &c.spatial_center).amax() < 1e-14);
        assert!((main_diagonal_point(&lift, 4.0).unwrap() - &c.centroid).amax() < 1e-14);
        assert!((main_diagonal_point(&lift, 3.0).unwrap() - &c.feuerbach_center).amax() < 1e-14);
        assert!((main_diagonal_point(&lift, 2.0).unwrap() - &c.monge_point).amax() < 1e-14);
        for mask in 0..32usize {
            let comp = 31 - mask;
            let expect = &c.complementary_point - (pt(&lift[mask].point) - p.center());
            assert!((pt(&lift[comp].point) - expect).amax() < 1e-14);
        }
    }

    #[test]
    fn lift_rejects_huge_polygons() {
        let tol = Tolerances::default();
        let angles: Vec<f64> = (0..21).map(|k| k as f64 * std::f64::consts::TAU / 21.0).collect();
        let p = CyclicPolygon::from_angles(NormSpec::Euclidean, point(&[0.0, 0.0]), 1.0, &angles, &tol).unwrap();
        assert!(parallelepiped_lift(&p).is_err());
    }
}
