//! Seeded random instance generators for the property suites.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::affine::Point;
use crate::error::Result;
use crate::norms::NormSpec;
use crate::polygon::CyclicPolygon;
use crate::simplex::Simplex;
use crate::tolerance::Tolerances;

fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, d: usize) -> DVector<f64> {
    DVector::from_fn(d, |_, _| StandardNormal.sample(rng))
}

/// Uniformly random point on the Euclidean unit sphere.
pub fn unit_direction<R: Rng + ?Sized>(rng: &mut R, d: usize) -> DVector<f64> {
    loop {
        let g = gaussian_vector(rng, d);
        let n = g.norm();
        if n > 1e-3 {
            return g / n;
        }
    }
}

/// Random point on the unit sphere of `norm`, by radial projection.
pub fn norm_sphere_point<R: Rng + ?Sized>(rng: &mut R, norm: &NormSpec, d: usize) -> DVector<f64> {
    let u = unit_direction(rng, d);
    let len = norm.norm_unchecked(&u);
    u / len
}

/// `|det| / diam^d` of a regular simplex, used to reject slivers.
fn regular_quality(d: usize) -> f64 {
    ((d + 1) as f64).sqrt() / 2f64.powf(d as f64 / 2.0)
}

fn quality(t: &Simplex) -> f64 {
    t.edge_determinant().abs() / t.euclidean_diameter().powi(t.dim() as i32)
}

/// Random `d`-simplex with vertices in `[-1, 1]^d`, rejecting slivers whose
/// normalised volume is below a fifth of the regular simplex's.
pub fn random_simplex<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Simplex {
    let tol = Tolerances::default();
    let min_quality = 0.2 * regular_quality(d);
    loop {
        let vertices: Vec<Point> = (0..=d)
            .map(|_| DVector::from_fn(d, |_, _| rng.random_range(-1.0..1.0)))
            .collect();
        if let Ok(t) = Simplex::new(vertices, &tol) {
            if quality(&t) >= min_quality {
                return t;
            }
        }
    }
}

/// Random centrally symmetric polyhedral norm with between `d + 1` and
/// `2d + 2` antipodal vertex pairs.
pub fn random_polyhedral_norm<R: Rng + ?Sized>(rng: &mut R, d: usize) -> NormSpec {
    loop {
        let pairs = rng.random_range(d + 1..=2 * d + 2);
        let mut vertices = Vec::with_capacity(2 * pairs);
        for _ in 0..pairs {
            let v = unit_direction(rng, d) * rng.random_range(0.6..1.4);
            vertices.push(-&v);
            vertices.push(v);
        }
        if let Ok(spec) = NormSpec::polyhedral(vertices) {
            return spec;
        }
    }
}

/// A norm family named on the command line and in the suites.
#[derive(Debug, Clone, PartialEq)]
pub enum NormFamily {
    Euclidean,
    Lp(f64),
    /// Fresh random polyhedral norm per instance.
    RandomPolyhedral,
}

impl NormFamily {
    /// Parses `euclidean`, `l<p>` (e.g. `l1.5`), `linf` or `poly`.
    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "euclidean" | "l2e" => Some(Self::Euclidean),
            "linf" | "inf" | "max" => Some(Self::Lp(f64::INFINITY)),
            "poly" | "polyhedral" => Some(Self::RandomPolyhedral),
            _ => {
                let p: f64 = s.strip_prefix('l')?.parse().ok()?;
                (p >= 1.0).then_some(Self::Lp(p))
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            Self::Euclidean => "euclidean".into(),
            Self::Lp(p) if p.is_infinite() => "linf".into(),
            Self::Lp(p) => format!("l{p}"),
            Self::RandomPolyhedral => "poly".into(),
        }
    }

    /// Whether the family can be used in dimension `d`.
    pub fn supports_dim(&self, d: usize) -> bool {
        match self {
            Self::RandomPolyhedral => d <= 3,
            _ => true,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, d: usize) -> NormSpec {
        match self {
            Self::Euclidean => NormSpec::Euclidean,
            Self::Lp(p) => NormSpec::Lp(*p),
            Self::RandomPolyhedral => random_polyhedral_norm(rng, d),
        }
    }
}

/// Random invertible affine map `x -> a x + b` with condition number
/// bounded by construction (singular values in `[0.5, 2]`).
pub fn random_affine_map<R: Rng + ?Sized>(rng: &mut R, d: usize) -> (DMatrix<f64>, DVector<f64>) {
    let q1 = random_orthogonal(rng, d);
    let q2 = random_orthogonal(rng, d);
    let s = DMatrix::from_diagonal(&DVector::from_fn(d, |_, _| rng.random_range(0.5..2.0)));
    let shift = DVector::from_fn(d, |_, _| rng.random_range(-3.0..3.0));
    (q1 * s * q2, shift)
}

pub fn random_orthogonal<R: Rng + ?Sized>(rng: &mut R, d: usize) -> DMatrix<f64> {
    let g = DMatrix::from_fn(d, d, |_, _| StandardNormal.sample(rng));
    g.qr().q()
}

/// Orthocentric simplex from the corner-orthogonal recipe: `0` and
/// `a_i e_i` for random legs `a_i`, then a random rotation, scaling and
/// translation.
pub fn orthocentric_simplex<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Simplex {
    let tol = Tolerances::default();
    let rot = random_orthogonal(rng, d);
    let scale = rng.random_range(0.5..2.0);
    let shift = DVector::from_fn(d, |_, _| rng.random_range(-2.0..2.0));
    let mut vertices = vec![DVector::zeros(d)];
    for i in 0..d {
        let mut e = DVector::zeros(d);
        e[i] = rng.random_range(0.5..3.0);
        vertices.push(e);
    }
    let vertices = vertices
        .into_iter()
        .map(|v| &rot * v * scale + &shift)
        .collect();
    Simplex::new(vertices, &tol).expect("corner-orthogonal simplex is nondegenerate")
}

/// Simplex whose vertices lie on `S(center, radius)` of `norm` and satisfy
/// `sum_i (A_i - center) = 0`, so every center collapses onto `center`.
///
/// `d - 1` vertices are drawn on the sphere; the last free vertex is moved
/// along an arc of the sphere until the closing vertex `-(sum)` also has
/// norm 1.
pub fn balanced_simplex<R: Rng + ?Sized>(
    rng: &mut R,
    norm: &NormSpec,
    d: usize,
    center: &Point,
    radius: f64,
) -> Simplex {
    let tol = Tolerances::default();
    let min_quality = 0.1 * regular_quality(d);
    loop {
        let ws: Vec<DVector<f64>> = (0..d - 1).map(|_| norm_sphere_point(rng, norm, d)).collect();
        let s = ws.iter().fold(DVector::zeros(d), |acc, w| acc + w);
        let ns = norm.norm_unchecked(&s);
        if !(1e-3..=2.0).contains(&ns) {
            continue;
        }
        let s_hat = &s / s.norm();
        let mut r = unit_direction(rng, d);
        r -= &s_hat * r.dot(&s_hat);
        if r.norm() < 1e-3 {
            continue;
        }
        let r = r.normalize();
        let arc = |theta: f64| {
            let u = &s_hat * theta.cos() + &r * theta.sin();
            let len = norm.norm_unchecked(&u);
            u / len
        };
        // g(0) = ||s|| + 1 > 1 and g(pi) = | ||s|| - 1 | <= 1.
        let g = |theta: f64| norm.norm_unchecked(&(&s + arc(theta))) - 1.0;
        let (mut lo, mut hi) = (0.0, std::f64::consts::PI);
        if g(hi) > 0.0 {
            continue;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let last = arc(hi);
        let closing = -(&s + &last);
        let mut vertices: Vec<Point> = ws;
        vertices.push(last);
        vertices.push(closing);
        let vertices: Vec<Point> = vertices.into_iter().map(|v| center + v * radius).collect();
        if let Ok(t) = Simplex::new(vertices, &tol) {
            if quality(&t) >= min_quality {
                return t;
            }
        }
    }
}

/// Random cyclic polygon with `d + 1` vertices on `S(center, radius)`,
/// angles sorted with a minimum gap so consecutive vertices are distinct.
pub fn random_cyclic_polygon<R: Rng + ?Sized>(
    rng: &mut R,
    norm: &NormSpec,
    d: usize,
    center: &Point,
    radius: f64,
) -> Result<CyclicPolygon> {
    let n = d + 1;
    let tau = std::f64::consts::TAU;
    let min_gap = 0.2 * tau / n as f64;
    let angles = loop {
        let mut a: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..tau)).collect();
        a.sort_by(f64::total_cmp);
        let ok = (0..n).all(|i| {
            let next = if i + 1 < n { a[i + 1] } else { a[0] + tau };
            next - a[i] >= min_gap
        });
        if ok {
            break a;
        }
    };
    CyclicPolygon::from_angles(norm.clone(), center.clone(), radius, &angles, &Tolerances::default())
}
