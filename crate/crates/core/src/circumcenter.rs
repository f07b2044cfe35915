//! Locating and certifying circumcenters of simplices in normed spaces.
//!
//! A circumcenter is a point `M` with all vertices at the same norm distance
//! `R`. In non-smooth norms it may fail to exist or form a whole set; the
//! solver reports one representative and the grid oracle can enumerate the
//! candidates on a lattice.

use std::collections::{HashSet, VecDeque};

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::affine::Point;
use crate::error::{GeomError, Result};
use crate::norms::NormSpec;
use crate::optimize::{levenberg_marquardt, nelder_mead, NelderMeadConfig, PolishConfig};
use crate::simplex::{centroid, Simplex};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CircumStatus {
    Found,
    /// No center located at tolerance. This never certifies nonexistence.
    NotFound,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircumResult {
    pub status: CircumStatus,
    pub center: Option<Vec<f64>>,
    pub radius: Option<f64>,
    /// `sqrt(phi) / diameter` at the reported point.
    pub residual: f64,
    pub starts_used: usize,
}

impl CircumResult {
    pub fn is_found(&self) -> bool {
        self.status == CircumStatus::Found
    }

    pub fn center_point(&self) -> Option<Point> {
        self.center.as_deref().map(Point::from_column_slice)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Number of starting points; `None` means `8 + d`.
    pub starts: Option<usize>,
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            starts: None,
            seed: 0x5eed_c1bc,
        }
    }
}

/// Largest norm distance between two vertices.
pub fn norm_diameter(spec: &NormSpec, t: &Simplex) -> f64 {
    t.vertices()
        .iter()
        .tuple_combinations()
        .map(|(a, b)| spec.dist_unchecked(a, b))
        .fold(0.0, f64::max)
}

/// Distances `||A_i - m||` of all vertices.
pub fn vertex_distances(spec: &NormSpec, t: &Simplex, m: &Point) -> Vec<f64> {
    t.vertices().iter().map(|a| spec.dist_unchecked(a, m)).collect()
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Residuals `||A_i - m|| - rho(m)`, `rho` the mean distance.
fn residuals(spec: &NormSpec, t: &Simplex, m: &DVector<f64>) -> DVector<f64> {
    if !m.iter().all(|v| v.is_finite()) {
        return DVector::from_element(t.vertices().len(), f64::INFINITY);
    }
    let dists = vertex_distances(spec, t, m);
    let rho = mean(&dists);
    DVector::from_iterator(dists.len(), dists.into_iter().map(|x| x - rho))
}

/// `phi(m) = sum_i (||A_i - m|| - rho(m))^2`.
pub fn circum_objective(spec: &NormSpec, t: &Simplex, m: &Point) -> f64 {
    residuals(spec, t, m).norm_squared()
}

fn check_compatible(spec: &NormSpec, t: &Simplex, m: Option<&Point>) -> Result<()> {
    spec.validate()?;
    spec.check_dim(t.dim())?;
    if let Some(m) = m {
        if m.len() != t.dim() {
            return Err(GeomError::DimensionMismatch {
                expected: t.dim(),
                got: m.len(),
            });
        }
    }
    Ok(())
}

/// Mean vertex distance `R` when every vertex lies within
/// `eps_geom * diameter` of it, otherwise `None`.
pub fn is_circumcenter(spec: &NormSpec, t: &Simplex, m: &Point, tol: &Tolerances) -> Result<Option<f64>> {
    check_compatible(spec, t, Some(m))?;
    let dists = vertex_distances(spec, t, m);
    let r = mean(&dists);
    let dev = dists.iter().map(|x| (x - r).abs()).fold(0.0, f64::max);
    let scale = norm_diameter(spec, t);
    Ok((dev <= tol.eps_geom * scale && r > 0.0).then_some(r))
}

/// Euclidean circumcenter from the linear equidistance system
/// `2 (A_i - A_0) . M = |A_i|^2 - |A_0|^2`.
pub fn euclidean_circumcenter(t: &Simplex) -> Result<Point> {
    let d = t.dim();
    let a0 = t.vertex(0);
    let lhs = DMatrix::from_fn(d, d, |r, c| 2.0 * (t.vertex(r + 1)[c] - a0[c]));
    let rhs = DVector::from_fn(d, |r, _| t.vertex(r + 1).norm_squared() - a0.norm_squared());
    lhs.lu()
        .solve(&rhs)
        .ok_or_else(|| GeomError::GeneralPositionViolated("singular equidistance system".into()))
}

#[derive(Debug, Clone)]
struct Candidate {
    x: Point,
    phi: f64,
    radius: f64,
}

fn starting_points(t: &Simplex, count: usize, seed: u64, spread: f64) -> Vec<Point> {
    let g = centroid(t);
    let mut starts = vec![g.clone()];
    starts.extend(t.vertices().iter().cloned());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while starts.len() < count {
        let offset = DVector::from_fn(t.dim(), |_, _| {
            let z: f64 = StandardNormal.sample(&mut rng);
            z * spread
        });
        starts.push(&g + offset);
    }
    starts.truncate(count.max(1));
    starts
}

fn local_search(spec: &NormSpec, t: &Simplex, start: &Point, scale: f64, tol: &Tolerances) -> Candidate {
    let target = tol.eps_geom * scale;
    let threshold = target * target;
    let res = |x: &DVector<f64>| residuals(spec, t, x);
    let phi = |x: &DVector<f64>| residuals(spec, t, x).norm_squared();
    let polish = PolishConfig {
        fd_step: 1e-7,
        scale,
        max_iters: 200,
        target: scale * 1e-15,
    };

    let mut best = levenberg_marquardt(&res, start, &polish);
    if best.value > threshold {
        let nm = NelderMeadConfig {
            initial_step: 0.1 * scale,
            f_tol: (scale * 1e-15).powi(2),
            x_tol: scale * 1e-14,
            max_evals: tol.max_iters,
            restarts: 8,
        };
        let descended = nelder_mead(&phi, &best.x, &nm);
        let polished = levenberg_marquardt(&res, &descended.x, &polish);
        let refined = if polished.value <= descended.value {
            polished
        } else {
            descended
        };
        if refined.value < best.value {
            best = refined;
        }
    }
    if !best.x.iter().all(|v| v.is_finite()) {
        return Candidate {
            x: start.clone(),
            phi: f64::INFINITY,
            radius: f64::NAN,
        };
    }
    let radius = mean(&vertex_distances(spec, t, &best.x));
    Candidate {
        phi: circum_objective(spec, t, &best.x),
        x: best.x,
        radius,
    }
}

fn lexicographic(a: &Point, b: &Point) -> std::cmp::Ordering {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

/// Locates a circumcenter by multi-start local search on `phi`.
///
/// Each start runs a finite-difference Levenberg-Marquardt descent on the
/// residual vector, falling back to restarted Nelder-Mead when that stalls.
/// Among the starts that reach `phi <= (eps_geom * diameter)^2`, the center
/// with the smallest radius is reported (ties broken lexicographically). The
/// Euclidean norm bypasses the search and solves the linear system.
pub fn solve_circumcenter_with(
    spec: &NormSpec,
    t: &Simplex,
    tol: &Tolerances,
    opts: &SolverOptions,
) -> Result<CircumResult> {
    check_compatible(spec, t, None)?;
    let scale = norm_diameter(spec, t);
    if scale == 0.0 {
        return Err(GeomError::GeneralPositionViolated("zero diameter".into()));
    }

    if matches!(spec, NormSpec::Euclidean) {
        let m = euclidean_circumcenter(t)?;
        let residual = circum_objective(spec, t, &m).sqrt() / scale;
        let radius = mean(&vertex_distances(spec, t, &m));
        let found = residual <= tol.eps_geom;
        return Ok(CircumResult {
            status: if found { CircumStatus::Found } else { CircumStatus::NotFound },
            center: Some(m.as_slice().to_vec()),
            radius: found.then_some(radius),
            residual,
            starts_used: 0,
        });
    }

    let count = opts.starts.unwrap_or(8 + t.dim()).max(1);
    let starts = starting_points(t, count, opts.seed, 0.5 * scale);
    let candidates: Vec<Candidate> = starts
        .par_iter()
        .map(|s| local_search(spec, t, s, scale, tol))
        .collect();

    let threshold = (tol.eps_geom * scale).powi(2);
    let radius_tie = tol.eps_geom * scale;
    let found = candidates
        .iter()
        .filter(|c| c.phi <= threshold && c.radius.is_finite() && c.radius > 0.0)
        .min_by(|a, b| {
            if (a.radius - b.radius).abs() <= radius_tie {
                lexicographic(&a.x, &b.x)
            } else {
                a.radius.total_cmp(&b.radius)
            }
        });
    if let Some(c) = found {
        return Ok(CircumResult {
            status: CircumStatus::Found,
            center: Some(c.x.as_slice().to_vec()),
            radius: Some(c.radius),
            residual: c.phi.sqrt() / scale,
            starts_used: starts.len(),
        });
    }
    let best = candidates
        .iter()
        .min_by(|a, b| a.phi.total_cmp(&b.phi).then_with(|| lexicographic(&a.x, &b.x)))
        .expect("at least one start");
    Ok(CircumResult {
        status: CircumStatus::NotFound,
        center: None,
        radius: None,
        residual: best.phi.sqrt() / scale,
        starts_used: starts.len(),
    })
}

pub fn solve_circumcenter(spec: &NormSpec, t: &Simplex, tol: &Tolerances) -> Result<CircumResult> {
    solve_circumcenter_with(spec, t, tol, &SolverOptions::default())
}

/// Axis-aligned box for the grid oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundingBox {
    pub lo: Point,
    pub hi: Point,
}

impl BoundingBox {
    /// Coordinate bounding box of the simplex grown by `margin` on each side.
    pub fn around(t: &Simplex, margin: f64) -> Self {
        let d = t.dim();
        let lo = DVector::from_fn(d, |k, _| {
            t.vertices().iter().map(|v| v[k]).fold(f64::INFINITY, f64::min) - margin
        });
        let hi = DVector::from_fn(d, |k, _| {
            t.vertices().iter().map(|v| v[k]).fold(f64::NEG_INFINITY, f64::max) + margin
        });
        Self { lo, hi }
    }
}

/// Connected group of grid points accepted by the oracle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridCluster {
    /// `(point, mean vertex distance)` pairs.
    pub points: Vec<(Vec<f64>, f64)>,
}

pub const DEFAULT_GRID_CAP: u128 = 10_000_000;

/// Brute-force circumcenter candidates on a lattice, for `d <= 3`.
///
/// A lattice point is accepted when `max_i | ||A_i - M|| - mean | <= 2 h k`
/// with `h` the grid step and `k = max(1, max ||c||/2)` over the `+-1`
/// corner vectors `c`, so that the lattice point nearest to any exact center
/// is always accepted. Accepted points are grouped into connected components
/// under the `3^d - 1` neighbourhood.
pub fn grid_oracle_circumcenters(
    spec: &NormSpec,
    t: &Simplex,
    step: f64,
    bbox: &BoundingBox,
    cap: u128,
) -> Result<Vec<GridCluster>> {
    check_compatible(spec, t, None)?;
    let d = t.dim();
    if d > 3 {
        return Err(GeomError::InvalidInput(format!(
            "the grid oracle supports d <= 3, got {d}"
        )));
    }
    if !(step.is_finite() && step > 0.0) {
        return Err(GeomError::InvalidInput(format!("grid step must be positive, got {step}")));
    }
    if bbox.lo.len() != d || bbox.hi.len() != d {
        return Err(GeomError::DimensionMismatch {
            expected: d,
            got: bbox.lo.len(),
        });
    }
    let counts: Vec<usize> = (0..d)
        .map(|k| ((bbox.hi[k] - bbox.lo[k]).max(0.0) / step).floor() as usize + 1)
        .collect();
    let cells = counts.iter().fold(1u128, |acc, &c| acc.saturating_mul(c as u128));
    if cells > cap {
        return Err(GeomError::GridTooLarge { cells, cap });
    }

    let corner_norm = (0..1u32 << d)
        .map(|bits| {
            let c = DVector::from_fn(d, |k, _| if bits >> k & 1 == 1 { 1.0 } else { -1.0 });
            spec.norm_unchecked(&c)
        })
        .fold(0.0, f64::max);
    let threshold = 2.0 * step * (corner_norm / 2.0).max(1.0);

    let at = |idx: &[usize]| DVector::from_fn(d, |k, _| bbox.lo[k] + idx[k] as f64 * step);
    let mut accepted: Vec<Vec<usize>> = Vec::new();
    let mut idx = vec![0usize; d];
    'outer: loop {
        let m = at(&idx);
        let dists = vertex_distances(spec, t, &m);
        let r = mean(&dists);
        if dists.iter().all(|x| (x - r).abs() <= threshold) {
            accepted.push(idx.clone());
        }
        for k in 0..d {
            idx[k] += 1;
            if idx[k] < counts[k] {
                continue 'outer;
            }
            idx[k] = 0;
        }
        break;
    }

    let mut unvisited: HashSet<Vec<usize>> = accepted.iter().cloned().collect();
    let offsets: Vec<Vec<i64>> = (0..d)
        .map(|_| -1i64..=1)
        .multi_cartesian_product()
        .filter(|o| o.iter().any(|&x| x != 0))
        .collect();
    let mut clusters = Vec::new();
    for seed in &accepted {
        if !unvisited.remove(seed) {
            continue;
        }
        let mut members = vec![seed.clone()];
        let mut queue = VecDeque::from([seed.clone()]);
        while let Some(cur) = queue.pop_front() {
            for o in &offsets {
                let next: Option<Vec<usize>> = cur
                    .iter()
                    .zip(o)
                    .map(|(&c, &dlt)| usize::try_from(c as i64 + dlt).ok())
                    .collect();
                if let Some(next) = next {
                    if unvisited.remove(&next) {
                        members.push(next.clone());
                        queue.push_back(next);
                    }
                }
            }
        }
        members.sort();
        clusters.push(GridCluster {
            points: members
                .iter()
                .map(|ix| {
                    let m = at(ix);
                    let r = mean(&vertex_distances(spec, t, &m));
                    (m.as_slice().to_vec(), r)
                })
                .collect(),
        });
    }
    Ok(clusters)
}
