//! Simplices, their faces and centroids, and the Euclidean orthocentricity
//! oracle.
//!
//! Faces are index sets into the single vertex array of a [`Simplex`]; every
//! derived point is recomputed from that array.

use itertools::Itertools;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::affine::{lines_concurrent, Line, Point, Segment};
use crate::error::{GeomError, Result};
use crate::linalg;
use crate::tolerance::Tolerances;

/// A `d`-simplex: `d + 1` affinely independent points in `d`-space.
#[derive(Debug, Clone, PartialEq)]
pub struct Simplex {
    vertices: Vec<Point>,
}

impl Simplex {
    pub fn new(vertices: Vec<Point>, tol: &Tolerances) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(GeomError::InvalidInput(format!(
                "a simplex needs at least 3 vertices (d >= 2), got {n}"
            )));
        }
        let d = n - 1;
        for v in &vertices {
            if v.len() != d {
                return Err(GeomError::DimensionMismatch {
                    expected: d,
                    got: v.len(),
                });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(GeomError::InvalidInput("non-finite coordinate".into()));
            }
        }
        let simplex = Self { vertices };
        let scale = simplex.euclidean_diameter();
        let det = simplex.edge_determinant();
        if scale == 0.0 || det.abs() <= tol.eps_geom * scale.powi(d as i32) {
            return Err(GeomError::GeneralPositionViolated(format!(
                "edge determinant {det:e} is below tolerance for diameter {scale:e}"
            )));
        }
        Ok(simplex)
    }

    pub fn from_coords(coords: &[Vec<f64>], tol: &Tolerances) -> Result<Self> {
        Self::new(coords.iter().map(|c| Point::from_column_slice(c)).collect(), tol)
    }

    /// Dimension `d` of the ambient space.
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &Point {
        &self.vertices[i]
    }

    /// Determinant of the edge vectors `A_i - A_0`, `i = 1..d`.
    pub fn edge_determinant(&self) -> f64 {
        let d = self.dim();
        let a0 = &self.vertices[0];
        DMatrix::from_fn(d, d, |r, c| self.vertices[c + 1][r] - a0[r]).determinant()
    }

    /// Largest Euclidean distance between two vertices.
    pub fn euclidean_diameter(&self) -> f64 {
        self.vertices
            .iter()
            .tuple_combinations()
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Affine image `x -> linear * x + shift` of the simplex.
    pub fn map_affine(&self, linear: &DMatrix<f64>, shift: &Point, tol: &Tolerances) -> Result<Self> {
        Self::new(
            self.vertices.iter().map(|v| linear * v + shift).collect(),
            tol,
        )
    }

    /// Sum of `A_i - m` over all vertices.
    pub fn vertex_offset_sum(&self, m: &Point) -> Point {
        self.vertices
            .iter()
            .fold(Point::zeros(self.dim()), |acc, a| acc + (a - m))
    }

    /// All ridges (faces with `d - 1` vertices) paired with their opposite edge.
    pub fn ridge_edge_pairs(&self) -> Vec<(FaceIndex, FaceIndex)> {
        let n = self.vertices.len();
        (0..n)
            .combinations(2)
            .map(|edge| {
                let ridge: Vec<usize> = (0..n).filter(|i| !edge.contains(i)).collect();
                (FaceIndex(ridge), FaceIndex(edge))
            })
            .collect()
    }
}

/// A face of a simplex as a sorted, duplicate-free set of vertex indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FaceIndex(Vec<usize>);

impl FaceIndex {
    /// Validated face of a `d`-simplex; the input is sorted.
    pub fn new(mut indices: Vec<usize>, d: usize) -> Result<Self> {
        if indices.is_empty() {
            return Err(GeomError::InvalidFace("empty index set".into()));
        }
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(GeomError::InvalidFace(format!("duplicate index in {indices:?}")));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i > d) {
            return Err(GeomError::InvalidFace(format!(
                "index {bad} out of range for a {d}-simplex"
            )));
        }
        Ok(Self(indices))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Indices of `{0..=d}` not in this face.
    pub fn complement(&self, d: usize) -> FaceIndex {
        FaceIndex((0..=d).filter(|i| !self.0.contains(i)).collect())
    }
}

pub fn centroid(t: &Simplex) -> Point {
    let n = t.vertices.len() as f64;
    t.vertices
        .iter()
        .fold(Point::zeros(t.dim()), |acc, v| acc + v)
        / n
}

/// Centroid of the vertices indexed by `face`.
pub fn face_centroid(t: &Simplex, face: &FaceIndex) -> Result<Point> {
    let checked = FaceIndex::new(face.0.clone(), t.dim())?;
    let n = checked.len() as f64;
    Ok(checked
        .0
        .iter()
        .fold(Point::zeros(t.dim()), |acc, &i| acc + &t.vertices[i])
        / n)
}

/// Centroid `G_j` of the facet opposite vertex `j`.
pub fn facet_centroid(t: &Simplex, j: usize) -> Point {
    let d = t.dim() as f64;
    let total = t
        .vertices
        .iter()
        .fold(Point::zeros(t.dim()), |acc, v| acc + v);
    (total - &t.vertices[j]) / d
}

/// Segment from the centroid of `ridge` to the midpoint of its opposite edge.
///
/// In the plane a ridge is a single vertex and the quasi-median is a median.
pub fn quasi_median(t: &Simplex, ridge: &FaceIndex) -> Result<Segment> {
    let d = t.dim();
    let ridge = FaceIndex::new(ridge.0.clone(), d)?;
    if ridge.len() != d - 1 {
        return Err(GeomError::InvalidFace(format!(
            "a ridge of a {d}-simplex has {} vertices, got {}",
            d - 1,
            ridge.len()
        )));
    }
    let edge = ridge.complement(d);
    Segment::new(face_centroid(t, &ridge)?, face_centroid(t, &edge)?)
}

/// Whether every pair of vertex-disjoint edges is perpendicular.
pub fn euclid_is_orthocentric(t: &Simplex, tol: &Tolerances) -> bool {
    let n = t.vertices.len();
    if n <= 3 {
        return true;
    }
    let scale = t.euclidean_diameter();
    let limit = tol.eps_geom * scale * scale;
    let edges: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
    edges.iter().tuple_combinations().all(|(&(i, j), &(k, l))| {
        if i == k || i == l || j == k || j == l {
            return true;
        }
        let u = &t.vertices[j] - &t.vertices[i];
        let w = &t.vertices[l] - &t.vertices[k];
        u.dot(&w).abs() <= limit
    })
}

/// Euclidean altitude through `A_i`, perpendicular to the opposite facet.
pub fn euclid_altitude(t: &Simplex, i: usize) -> Result<Line> {
    let facet: Vec<usize> = (0..t.vertices.len()).filter(|&k| k != i).collect();
    let origin = &t.vertices[facet[0]];
    let spans: Vec<Point> = facet[1..]
        .iter()
        .map(|&k| &t.vertices[k] - origin)
        .collect();
    Line::new(t.vertices[i].clone(), linalg::cofactor_normal(&spans))
}

/// Common point of the Euclidean altitudes, for orthocentric simplices.
pub fn euclid_orthocenter(t: &Simplex, tol: &Tolerances) -> Result<Option<Point>> {
    if !euclid_is_orthocentric(t, tol) {
        return Ok(None);
    }
    let altitudes = (0..t.vertices.len())
        .map(|i| euclid_altitude(t, i))
        .collect::<Result<Vec<_>>>()?;
    lines_concurrent(&altitudes, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::point;

    fn trirectangular() -> Simplex {
        Simplex::from_coords(
            &[
                vec![0.0, 0.0, 0.0],
                vec![2.0, 0.0, 0.0],
                vec![0.0, 2.0, 0.0],
                vec![0.0, 0.0, 2.0],
            ],
            &Tolerances::default(),
        )
        .unwrap()
    }

    fn close(a: &Point, b: &Point) -> bool {
        (a - b).amax() < 1e-12
    }

    #[test]
    fn centroids() {
        let tol = Tolerances::default();
        let tri = Simplex::from_coords(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]], &tol).unwrap();
        assert!(close(&centroid(&tri), &point(&[1.0 / 3.0, 1.0 / 3.0])));
        let t = trirectangular();
        assert!(close(&centroid(&t), &point(&[0.5, 0.5, 0.5])));
        let reg = Simplex::from_coords(
            &[
                vec![1.0, 1.0, 1.0],
                vec![1.0, -1.0, -1.0],
                vec![-1.0, 1.0, -1.0],
                vec![-1.0, -1.0, 1.0],
            ],
            &tol,
        )
        .unwrap();
        assert!(close(&centroid(&reg), &point(&[0.0, 0.0, 0.0])));
    }

    #[test]
    fn face_centroids() {
        let t = trirectangular();
        let f = |ix: Vec<usize>| face_centroid(&t, &FaceIndex::new(ix, 3).unwrap()).unwrap();
        assert!(close(&f(vec![1, 2, 3]), &point(&[2.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0])));
        assert!(close(&f(vec![0, 1]), &point(&[1.0, 0.0, 0.0])));
        assert!(close(&f(vec![2, 3]), &point(&[0.0, 1.0, 1.0])));
        assert!(close(&facet_centroid(&t, 0), &f(vec![1, 2, 3])));
    }

    #[test]
    fn face_index_validation() {
        assert!(FaceIndex::new(vec![], 3).is_err());
        assert!(FaceIndex::new(vec![1, 1], 3).is_err());
        assert!(FaceIndex::new(vec![4], 3).is_err());
        assert_eq!(FaceIndex::new(vec![3, 1], 3).unwrap().indices(), &[1, 3]);
    }

    #[test]
    fn quasi_median_examples() {
        let t = trirectangular();
        let q = quasi_median(&t, &FaceIndex::new(vec![2, 3], 3).unwrap()).unwrap();
        assert!(close(&q.start, &point(&[0.0, 1.0, 1.0])));
        assert!(close(&q.end, &point(&[1.0, 0.0, 0.0])));
        assert!(quasi_median(&t, &FaceIndex::new(vec![1], 3).unwrap()).is_err());

        let tol = Tolerances::default();
        let tri = Simplex::from_coords(&[vec![0.0, 0.0], vec![4.0, 0.0], vec![0.0, 2.0]], &tol).unwrap();
        let q = quasi_median(&tri, &FaceIndex::new(vec![0], 2).unwrap()).unwrap();
        assert!(close(&q.start, &point(&[0.0, 0.0])));
        assert!(close(&q.end, &point(&[2.0, 1.0])));
    }

    #[test]
    fn general_position_is_enforced() {
        let tol = Tolerances::default();
        let flat = Simplex::from_coords(
            &[
                vec![0.0, 0.0, 0.0],
                vec![1.0, 0.0, 0.0],
                vec![0.0, 1.0, 0.0],
                vec![1.0, 1.0, 0.0],
            ],
            &tol,
        );
        assert!(matches!(flat, Err(GeomError::GeneralPositionViolated(_))));
        assert!(Simplex::from_coords(&[vec![0.0, 0.0], vec![1.0, 0.0]], &tol).is_err());
        assert!(matches!(
            Simplex::from_coords(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0, 2.0]], &tol),
            Err(GeomError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn orthocentric_examples() {
        let tol = Tolerances::default();
        // Oracle: dot products of the three disjoint edge pairs.
        let t = trirectangular();
        let v = t.vertices();
        for ((i, j), (k, l)) in [((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))] {
            assert_eq!((&v[j] - &v[i]).dot(&(&v[l] - &v[k])), 0.0);
        }
        assert!(euclid_is_orthocentric(&t, &tol));
        let h = euclid_orthocenter(&t, &tol).unwrap().unwrap();
        assert!(h.norm() < 1e-12);

        let t2 = Simplex::from_coords(
            &[
                vec![0.0, 0.0, 0.0],
                vec![3.0, 0.0, 0.0],
                vec![0.0, 2.0, 0.0],
                vec![0.0, 0.0, 2.0],
            ],
            &tol,
        )
        .unwrap();
        assert!(euclid_is_orthocentric(&t2, &tol));
        assert!(euclid_orthocenter(&t2, &tol).unwrap().unwrap().norm() < 1e-12);

        let tri = Simplex::from_coords(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]], &tol).unwrap();
        assert!(euclid_orthocenter(&tri, &tol).unwrap().unwrap().norm() < 1e-12);

        let generic = Simplex::from_coords(
            &[
                vec![0.1, 0.2, -0.3],
                vec![1.7, 0.4, 0.2],
                vec![0.3, 1.9, 0.5],
                vec![-0.2, 0.6, 1.4],
            ],
            &tol,
        )
        .unwrap();
        assert!(!euclid_is_orthocentric(&generic, &tol));
        assert_eq!(euclid_orthocenter(&generic, &tol).unwrap(), None);
    }
}
