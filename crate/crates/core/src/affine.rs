//! Norm-free affine primitives.
//!
//! Incidence, ratios and concurrency are affine notions, so every test here
//! measures distances in an auxiliary Euclidean metric regardless of the
//! ambient norm. Tolerances are scaled by the coordinate magnitude of the
//! objects involved.

use nalgebra::{DMatrix, DVector};

use crate::error::{GeomError, Result};
use crate::linalg;
use crate::tolerance::Tolerances;

pub type Point = DVector<f64>;
pub type Vector = DVector<f64>;

/// Builds a point from coordinates.
pub fn point(coords: &[f64]) -> Point {
    DVector::from_column_slice(coords)
}

fn magnitude<'a>(points: impl IntoIterator<Item = &'a Point>) -> f64 {
    points.into_iter().map(|p| p.amax()).fold(1.0, f64::max)
}

fn check_dims(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(GeomError::DimensionMismatch { expected, got });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Line {
    base: Point,
    direction: Vector,
}

impl Line {
    pub fn new(base: Point, direction: Vector) -> Result<Self> {
        check_dims(base.len(), direction.len())?;
        if direction.iter().all(|&x| x == 0.0) {
            return Err(GeomError::ZeroVector);
        }
        Ok(Self { base, direction })
    }

    pub fn base(&self) -> &Point {
        &self.base
    }

    pub fn direction(&self) -> &Vector {
        &self.direction
    }

    pub fn at(&self, t: f64) -> Point {
        &self.base + &self.direction * t
    }

    /// Euclidean distance from `p` to the line.
    pub fn distance_to(&self, p: &Point) -> f64 {
        let u = self.direction.normalize();
        let w = p - &self.base;
        let along = w.dot(&u);
        (w - u * along).norm()
    }

    /// Orthogonal projector onto the complement of the direction.
    fn normal_projector(&self) -> DMatrix<f64> {
        let u = self.direction.normalize();
        DMatrix::identity(u.len(), u.len()) - &u * u.transpose()
    }
}

pub fn line_through(p: &Point, q: &Point) -> Result<Line> {
    check_dims(p.len(), q.len())?;
    if p == q {
        return Err(GeomError::CoincidentPoints);
    }
    Line::new(p.clone(), q - p)
}

pub fn point_on_line(line: &Line, p: &Point, tol: &Tolerances) -> bool {
    if p.len() != line.base.len() {
        return false;
    }
    line.distance_to(p) <= tol.scaled(magnitude([&line.base, p]))
}

/// Common point of a family of lines together with its certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct Concurrence {
    /// Least-squares intersection point.
    pub point: Point,
    /// Largest Euclidean distance from `point` to any of the lines.
    pub residual: f64,
    /// Coordinate magnitude used to scale the tolerance.
    pub scale: f64,
}

/// Least-squares meeting point of the lines and the largest distance from
/// it to any line. `Ok(None)` when all lines are parallel but not all equal.
pub fn concurrence(lines: &[Line]) -> Result<Option<Concurrence>> {
    let first = lines
        .first()
        .ok_or_else(|| GeomError::InvalidInput("at least two lines are required".into()))?;
    if lines.len() < 2 {
        return Err(GeomError::InvalidInput(
            "at least two lines are required".into(),
        ));
    }
    let d = first.base.len();
    for l in lines {
        check_dims(d, l.base.len())?;
    }
    let scale = magnitude(lines.iter().map(|l| &l.base));

    let directions: Vec<Vector> = lines.iter().map(|l| l.direction.normalize()).collect();
    if linalg::rank(&directions, 1e-12) < 2 {
        // All parallel: either one line repeated, or no common point.
        let tol = 1e-12 * scale;
        if lines.iter().all(|l| first.distance_to(&l.base) <= tol) {
            return Err(GeomError::AllParallel);
        }
        return Ok(None);
    }

    let mut a = DMatrix::zeros(d, d);
    let mut b = DVector::zeros(d);
    for l in lines {
        let proj = l.normal_projector();
        b += &proj * &l.base;
        a += proj;
    }
    let Some((point, _, _)) = linalg::least_squares(&a, &b) else {
        return Ok(None);
    };
    let residual = lines
        .iter()
        .map(|l| l.distance_to(&point))
        .fold(0.0, f64::max);
    let scale = scale.max(point.amax());
    Ok(Some(Concurrence {
        point,
        residual,
        scale,
    }))
}

/// The common point of all lines, if they meet within
/// `eps_geom * max(1, coordinate magnitude)`.
pub fn lines_concurrent(lines: &[Line], tol: &Tolerances) -> Result<Option<Point>> {
    Ok(concurrence(lines)?
        .filter(|c| c.residual <= tol.scaled(c.scale))
        .map(|c| c.point))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub start: Point,
    pub end: Point,
}

impl Segment {
    pub fn new(start: Point, end: Point) -> Result<Self> {
        check_dims(start.len(), end.len())?;
        Ok(Self { start, end })
    }

    pub fn midpoint(&self) -> Point {
        (&self.start + &self.end) * 0.5
    }

    /// Affine parameter `t` of the orthogonal projection of `p` onto the
    /// supporting line, with `start` at 0 and `end` at 1.
    pub fn parameter_of(&self, p: &Point) -> Result<f64> {
        let dir = &self.end - &self.start;
        let len2 = dir.norm_squared();
        if len2 == 0.0 {
            return Err(GeomError::CoincidentPoints);
        }
        Ok((p - &self.start).dot(&dir) / len2)
    }

    /// Ratio `m:n` (normalised to `m + n = 1`) in which `p` divides the segment.
    pub fn ratio_of(&self, p: &Point) -> Result<(f64, f64)> {
        let t = self.parameter_of(p)?;
        Ok((t, 1.0 - t))
    }
}

/// The point dividing `segment` internally in the ratio `m:n`.
pub fn divide_internally(segment: &Segment, m: f64, n: f64) -> Result<Point> {
    if !(m.is_finite() && n.is_finite()) || m < 0.0 || n < 0.0 || m + n == 0.0 {
        return Err(GeomError::InvalidRatio { m, n });
    }
    Ok(&segment.start + (&segment.end - &segment.start) * (m / (m + n)))
}

/// `center + ratio (p - center)`.
pub fn homothety(center: &Point, ratio: f64, p: &Point) -> Point {
    center + (p - center) * ratio
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hyperplane {
    base: Point,
    spanning: Vec<Vector>,
    normal: Vector,
}

impl Hyperplane {
    /// Hyperplane through `base` spanned by `d-1` independent vectors.
    pub fn new(base: Point, spanning: Vec<Vector>) -> Result<Self> {
        let d = base.len();
        if spanning.len() + 1 != d {
            return Err(GeomError::DegenerateBasis(format!(
                "a hyperplane in dimension {d} needs {} spanning vectors, got {}",
                d.saturating_sub(1),
                spanning.len()
            )));
        }
        for s in &spanning {
            check_dims(d, s.len())?;
        }
        let normal = if d == 1 {
            DVector::from_element(1, 1.0)
        } else {
            let units: Vec<Vector> = spanning
                .iter()
                .map(|s| {
                    let n = s.norm();
                    if n == 0.0 {
                        s.clone()
                    } else {
                        s / n
                    }
                })
                .collect();
            linalg::cofactor_normal(&units)
        };
        let len = normal.norm();
        if len <= 1e-12 {
            return Err(GeomError::DegenerateBasis(
                "spanning vectors do not have rank d-1".into(),
            ));
        }
        Ok(Self {
            base,
            spanning,
            normal: normal / len,
        })
    }

    pub fn base(&self) -> &Point {
        &self.base
    }

    pub fn spanning(&self) -> &[Vector] {
        &self.spanning
    }

    /// Unit normal in the auxiliary Euclidean metric.
    pub fn unit_normal(&self) -> &Vector {
        &self.normal
    }

    pub fn distance_to(&self, p: &Point) -> f64 {
        self.normal.dot(&(p - &self.base)).abs()
    }
}

pub fn hyperplane_contains(h: &Hyperplane, p: &Point, tol: &Tolerances) -> bool {
    if p.len() != h.base.len() {
        return false;
    }
    h.distance_to(p) <= tol.scaled(magnitude([&h.base, p]))
}

/// Least-squares intersection point of hyperplanes with the largest distance
/// from it to any of them.
///
/// A rank-deficient but consistent system (the hyperplanes share a flat of
/// positive dimension) is reported as [`GeomError::NotGeneralPosition`]; a
/// rank-deficient inconsistent one (e.g. parallel hyperplanes) as `Ok(None)`.
pub fn hyperplane_meet(hyperplanes: &[Hyperplane], tol: &Tolerances) -> Result<Option<(Point, f64)>> {
    let first = hyperplanes
        .first()
        .ok_or_else(|| GeomError::InvalidInput("no hyperplanes given".into()))?;
    let d = first.base.len();
    for h in hyperplanes {
        check_dims(d, h.base.len())?;
    }
    let k = hyperplanes.len();
    let a = DMatrix::from_fn(k, d, |r, c| hyperplanes[r].normal[c]);
    let b = DVector::from_fn(k, |r, _| hyperplanes[r].normal.dot(&hyperplanes[r].base));
    let scale = magnitude(hyperplanes.iter().map(|h| &h.base));
    let Some((x, _, _)) = linalg::least_squares(&a, &b) else {
        return Ok(None);
    };
    let residual = hyperplanes
        .iter()
        .map(|h| h.distance_to(&x))
        .fold(0.0, f64::max);
    let normals: Vec<Vector> = hyperplanes.iter().map(|h| h.normal.clone()).collect();
    let full_rank = k >= d && linalg::rank(&normals, 1e-10) == d;
    let consistent = residual <= tol.scaled(scale.max(x.amax()));
    match (full_rank, consistent) {
        (true, _) => Ok(Some((x, residual))),
        (false, true) => Err(GeomError::NotGeneralPosition(format!(
            "{k} hyperplanes in dimension {d} do not meet in a single point"
        ))),
        (false, false) => Ok(None),
    }
}

/// The single common point of the hyperplanes, if it exists at tolerance.
pub fn hyperplanes_intersection(hyperplanes: &[Hyperplane], tol: &Tolerances) -> Result<Option<Point>> {
    Ok(hyperplane_meet(hyperplanes, tol)?.and_then(|(x, residual)| {
        let scale = magnitude(hyperplanes.iter().map(|h| &h.base)).max(x.amax());
        (residual <= tol.scaled(scale)).then_some(x)
    }))
}
