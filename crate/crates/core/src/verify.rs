//! Randomized property suites behind `mink-centers verify`.
//!
//! Every trial draws its instance from its own seeded generator, so a suite
//! is reproducible from `(seed, trials, dims, norms)` and trials can run in
//! parallel. Each trial yields named [`Residual`]s; the summary aggregates
//! pass counts and the largest residual per claim.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::affine::Point;
use crate::centers::{complementary_point, full_report, monge_point, Residual};
use crate::circumcenter::{is_circumcenter, solve_circumcenter_with, SolverOptions};
use crate::error::{GeomError, Result};
use crate::norms::{
    is_birkhoff_orthogonal, is_isosceles_orthogonal, is_normal_to_hyperplane, min_along_direction, NormSpec,
};
use crate::polygon::verify_polygon_theorems;
use crate::sampling::{
    balanced_simplex, orthocentric_simplex, random_affine_map, random_cyclic_polygon, random_simplex,
    unit_direction, NormFamily,
};
use crate::simplex::euclid_orthocenter;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Simplex,
    Polygon,
    Orthogonality,
    All,
}

impl Suite {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "simplex" => Some(Self::Simplex),
            "polygon" => Some(Self::Polygon),
            "orthogonality" => Some(Self::Orthogonality),
            "all" => Some(Self::All),
            _ => None,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Self::Simplex => "simplex",
            Self::Polygon => "polygon",
            Self::Orthogonality => "orthogonality",
            Self::All => "all",
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub suite: Suite,
    pub trials: usize,
    /// Simplex dimensions, or polygon `d` (vertex count minus one) for the
    /// polygon suite. `None` uses the suite default.
    pub dims: Option<Vec<usize>>,
    pub norms: Option<Vec<NormFamily>>,
    pub seed: u64,
    pub tol: Tolerances,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            suite: Suite::All,
            trials: 100,
            dims: None,
            norms: None,
            seed: 1,
            tol: Tolerances::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimSummary {
    pub claim: String,
    pub checked: usize,
    pub passed: usize,
    pub max_value: f64,
    /// Largest `value / limit` (zero limits count as `value`).
    pub worst_ratio: f64,
}

impl ClaimSummary {
    pub fn all_passed(&self) -> bool {
        self.passed == self.checked
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub suite: String,
    pub trials: usize,
    /// Simplex trials where no circumcenter was located (not a failure for
    /// non-smooth norms).
    pub no_center: usize,
    pub claims: Vec<ClaimSummary>,
}

impl SuiteSummary {
    pub fn all_passed(&self) -> bool {
        self.claims.iter().all(ClaimSummary::all_passed)
    }

    pub fn claim(&self, name: &str) -> Option<&ClaimSummary> {
        self.claims.iter().find(|c| c.claim == name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifySummary {
    pub suites: Vec<SuiteSummary>,
}

impl VerifySummary {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(SuiteSummary::all_passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for s in &self.suites {
            if s.suite == "simplex" {
                let _ = writeln!(out, "suite {} ({} trials, {} without circumcenter)", s.suite, s.trials, s.no_center);
            } else {
                let _ = writeln!(out, "suite {} ({} trials)", s.suite, s.trials);
            }
            for c in &s.claims {
                let mark = if c.all_passed() { "ok  " } else { "FAIL" };
                let _ = writeln!(
                    out,
                    "  {mark} {:<58} {:>5}/{:<5} max {:.3e}",
                    c.claim, c.passed, c.checked, c.max_value
                );
            }
        }
        let _ = writeln!(out, "{}", if self.all_passed() { "all claims passed" } else { "some claims failed" });
        out
    }
}

fn aggregate(suite: &str, trials: usize, no_center: usize, results: Vec<Vec<Residual>>) -> SuiteSummary {
    let mut map: BTreeMap<String, ClaimSummary> = BTreeMap::new();
    for r in results.into_iter().flatten() {
        let e = map.entry(r.claim.clone()).or_insert_with(|| ClaimSummary {
            claim: r.claim.clone(),
            checked: 0,
            passed: 0,
            max_value: 0.0,
            worst_ratio: 0.0,
        });
        e.checked += 1;
        e.passed += usize::from(r.passed);
        let value = if r.value.is_nan() { f64::INFINITY } else { r.value };
        e.max_value = e.max_value.max(value);
        let ratio = if r.limit > 0.0 { value / r.limit } else { value };
        e.worst_ratio = e.worst_ratio.max(ratio);
    }
    SuiteSummary {
        suite: suite.into(),
        trials,
        no_center,
        claims: map.into_values().collect(),
    }
}

fn trial_rng(seed: u64, suite: u64, i: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(suite);
    rng.set_word_pos(0);
    let offset: u64 = rng.random();
    ChaCha8Rng::seed_from_u64(offset ^ (i as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn flag(claim: &str, ok: bool) -> Residual {
    Residual::new(claim, if ok { 0.0 } else { 1.0 }, 0.0)
}

pub fn default_simplex_norms() -> Vec<NormFamily> {
    vec![
        NormFamily::Euclidean,
        NormFamily::Lp(1.5),
        NormFamily::Lp(3.0),
        NormFamily::Lp(f64::INFINITY),
        NormFamily::RandomPolyhedral,
    ]
}

pub fn default_polygon_norms() -> Vec<NormFamily> {
    vec![
        NormFamily::Euclidean,
        NormFamily::Lp(1.0),
        NormFamily::Lp(f64::INFINITY),
        NormFamily::Lp(3.0),
    ]
}

fn is_smooth(norm: &NormSpec) -> bool {
    norm.is_smooth_and_strictly_convex()
}

/// Outcome of one simplex trial: its residuals and whether a center was found.
pub fn simplex_trial(rng: &mut ChaCha8Rng, d: usize, family: &NormFamily, tol: &Tolerances) -> (Vec<Residual>, bool) {
    let norm = family.sample(rng, d);
    let t = random_simplex(rng, d);
    let opts = SolverOptions {
        starts: None,
        seed: rng.random(),
    };
    let mut out = Vec::new();
    let res = match solve_circumcenter_with(&norm, &t, tol, &opts) {
        Ok(r) => r,
        Err(e) => {
            out.push(Residual::new(format!("solver.error: {e}"), 1.0, 0.0));
            return (out, false);
        }
    };
    if is_smooth(&norm) {
        out.push(flag("solver.smooth_norm_center_found", res.is_found()));
    }
    let found = res.is_found();
    if let Some(m) = res.center_point().filter(|_| found) {
        let certified = matches!(is_circumcenter(&norm, &t, &m, tol), Ok(Some(_)));
        out.push(flag("solver.found_center_is_certified", certified));
        match full_report(&norm, &t, Some(&m), tol, &opts) {
            Ok(rep) => out.extend(rep.residuals),
            Err(e) => out.push(Residual::new(format!("report.error: {e}"), 1.0, 0.0)),
        }
        out.extend(affine_trial(rng, &t, &m, tol));
    }

    if matches!(family, NormFamily::Euclidean) {
        let o = orthocentric_simplex(rng, d);
        let scale = o.euclidean_diameter();
        let value = crate::circumcenter::euclidean_circumcenter(&o)
            .and_then(|m| {
                let n = monge_point(&o, &m)?;
                let h = euclid_orthocenter(&o, tol)?.ok_or(GeomError::AllParallel)?;
                Ok((n - h).norm())
            })
            .unwrap_or(f64::INFINITY);
        out.push(Residual::new("euclidean.monge_point_is_orthocenter", value, 1e-8 * scale.max(1.0)));
    }

    out.extend(collapse_trial(rng, &norm, d, tol));
    (out, found)
}

fn affine_trial(rng: &mut ChaCha8Rng, t: &crate::simplex::Simplex, m: &Point, tol: &Tolerances) -> Vec<Residual> {
    let d = t.dim();
    let (a, b) = random_affine_map(rng, d);
    let Ok(image) = t.map_affine(&a, &b, tol) else {
        return vec![flag("affine.image_is_simplex", false)];
    };
    let m2 = &a * m + &b;
    let scale = image.euclidean_diameter().max(1.0);
    let mut out = Vec::new();
    for (name, f) in [
        ("affine.monge_point_commutes", monge_point as fn(&_, &_) -> Result<Point>),
        ("affine.complementary_point_commutes", complementary_point),
    ] {
        let value = match (f(t, m), f(&image, &m2)) {
            (Ok(p), Ok(q)) => (&a * p + &b - q).norm(),
            _ => f64::INFINITY,
        };
        out.push(Residual::new(name, value, 1e-8 * scale));
    }
    out
}

fn collapse_trial(rng: &mut ChaCha8Rng, norm: &NormSpec, d: usize, tol: &Tolerances) -> Vec<Residual> {
    let center = DVector::from_fn(d, |_, _| rng.random_range(-2.0..2.0));
    let radius = rng.random_range(0.5..2.0);
    let t = balanced_simplex(rng, norm, d, &center, radius);
    match full_report(norm, &t, Some(&center), tol, &SolverOptions::default()) {
        Ok(rep) => {
            let spread = [&rep.centroid, &rep.monge_point, &rep.complementary_point, &rep.feuerbach_center]
                .iter()
                .map(|p| {
                    p.iter()
                        .zip(center.iter())
                        .map(|(x, y)| (x - y).abs())
                        .fold(0.0, f64::max)
                })
                .fold(0.0, f64::max);
            vec![
                flag("collapse.flagged", rep.collapsed),
                Residual::new("collapse.centers_coincide", spread, 1e-10 * radius.max(1.0)),
            ]
        }
        Err(e) => vec![Residual::new(format!("collapse.error: {e}"), 1.0, 0.0)],
    }
}

fn combos(dims: &[usize], norms: &[NormFamily]) -> Vec<(usize, NormFamily)> {
    let mut out = Vec::new();
    for n in norms {
        for &d in dims {
            if n.supports_dim(d) {
                out.push((d, n.clone()));
            }
        }
    }
    out
}

fn run_simplex(opts: &VerifyOptions) -> Result<SuiteSummary> {
    let dims = opts.dims.clone().unwrap_or_else(|| vec![2, 3, 4, 5]);
    if let Some(&d) = dims.iter().find(|&&d| d < 2) {
        return Err(GeomError::InvalidInput(format!("simplex dimension must be >= 2, got {d}")));
    }
    let norms = opts.norms.clone().unwrap_or_else(default_simplex_norms);
    let cases = combos(&dims, &norms);
    if cases.is_empty() || opts.trials == 0 {
        return Err(GeomError::InvalidInput("empty suite".into()));
    }
    let results: Vec<(Vec<Residual>, bool)> = (0..opts.trials)
        .into_par_iter()
        .map(|i| {
            let (d, fam) = &cases[i % cases.len()];
            let mut rng = trial_rng(opts.seed, 1, i);
            simplex_trial(&mut rng, *d, fam, &opts.tol)
        })
        .collect();
    let no_center = results.iter().filter(|(_, f)| !f).count();
    Ok(aggregate(
        "simplex",
        opts.trials,
        no_center,
        results.into_iter().map(|(r, _)| r).collect(),
    ))
}

pub fn polygon_trial(rng: &mut ChaCha8Rng, d: usize, family: &NormFamily, tol: &Tolerances) -> Vec<Residual> {
    let norm = family.sample(rng, 2);
    let center = DVector::from_fn(2, |_, _| rng.random_range(-2.0..2.0));
    let radius = rng.random_range(0.5..3.0);
    match random_cyclic_polygon(rng, &norm, d, &center, radius).and_then(|p| verify_polygon_theorems(&p, tol)) {
        Ok(v) => v.claims,
        Err(e) => vec![Residual::new(format!("polygon.error: {e}"), 1.0, 0.0)],
    }
}

fn run_polygon(opts: &VerifyOptions) -> Result<SuiteSummary> {
    let dims = opts.dims.clone().unwrap_or_else(|| (3..=8).collect());
    if let Some(&d) = dims.iter().find(|&&d| d < 3) {
        return Err(GeomError::InvalidInput(format!("polygon d must be >= 3, got {d}")));
    }
    let norms = opts.norms.clone().unwrap_or_else(default_polygon_norms);
    let cases = combos(&dims, &norms);
    if cases.is_empty() || opts.trials == 0 {
        return Err(GeomError::InvalidInput("empty suite".into()));
    }
    let results: Vec<Vec<Residual>> = (0..opts.trials)
        .into_par_iter()
        .map(|i| {
            let (d, fam) = &cases[i % cases.len()];
            let mut rng = trial_rng(opts.seed, 2, i);
            polygon_trial(&mut rng, *d, fam, &opts.tol)
        })
        .collect();
    Ok(aggregate("polygon", opts.trials, 0, results))
}

/// Orthogonality claims on one random pair in dimension `d`.
pub fn orthogonality_trial(rng: &mut ChaCha8Rng, d: usize, family: &NormFamily, tol: &Tolerances) -> Vec<Residual> {
    let norm = family.sample(rng, d);
    let x = unit_direction(rng, d) * rng.random_range(0.5..2.0);
    let y = unit_direction(rng, d) * rng.random_range(0.5..2.0);
    let mut out = Vec::new();

    let sym = matches!(
        (is_isosceles_orthogonal(&norm, &x, &y, tol), is_isosceles_orthogonal(&norm, &y, &x, tol)),
        (Ok(a), Ok(b)) if a == b
    );
    out.push(flag("isosceles.symmetric", sym));

    // Equal-length x and y always give x + y ⊥_I x - y.
    let yn = &y * (norm.norm_unchecked(&x) / norm.norm_unchecked(&y));
    let iso = is_isosceles_orthogonal(&norm, &(&x + &yn), &(&x - &yn), tol).unwrap_or(false);
    out.push(flag("isosceles.rhombus_diagonals", iso));

    // Foot of the minimum along y is Birkhoff orthogonal to y.
    let (alpha, _) = match min_along_direction(&norm, &x, &y, tol) {
        Ok(v) => v,
        Err(e) => return vec![Residual::new(format!("birkhoff.error: {e}"), 1.0, 0.0)],
    };
    let foot = &x + &y * alpha;
    if norm.norm_unchecked(&foot) > 1e-6 {
        out.push(flag(
            "birkhoff.minimum_foot_is_orthogonal",
            is_birkhoff_orthogonal(&norm, &foot, &y, tol).unwrap_or(false),
        ));
        let lam = rng.random_range(-3.0..3.0_f64);
        let mu = rng.random_range(-3.0..3.0_f64);
        if lam.abs() > 0.1 && mu.abs() > 0.1 {
            out.push(flag(
                "birkhoff.homogeneous",
                is_birkhoff_orthogonal(&norm, &(&foot * lam), &(&y * mu), tol).unwrap_or(false),
            ));
        }
        if matches!(norm, NormSpec::Euclidean) {
            let cos = foot.dot(&y) / (foot.norm() * y.norm());
            out.push(Residual::new("birkhoff.euclidean_is_perpendicular", cos.abs(), 1e-6));
        }
    }

    if matches!(norm, NormSpec::Euclidean) && d >= 2 {
        let q = crate::sampling::random_orthogonal(rng, d);
        let v = q.column(0).into_owned();
        let basis: Vec<DVector<f64>> = (1..d).map(|k| q.column(k).into_owned()).collect();
        out.push(flag(
            "normality.euclidean_perpendicular_is_normal",
            is_normal_to_hyperplane(&norm, &v, &basis, tol).unwrap_or(false),
        ));
    }
    out
}

fn run_orthogonality(opts: &VerifyOptions) -> Result<SuiteSummary> {
    let dims = opts.dims.clone().unwrap_or_else(|| vec![2, 3, 4]);
    if let Some(&d) = dims.iter().find(|&&d| d < 2) {
        return Err(GeomError::InvalidInput(format!("dimension must be >= 2, got {d}")));
    }
    let norms = opts.norms.clone().unwrap_or_else(default_simplex_norms);
    let cases = combos(&dims, &norms);
    if cases.is_empty() || opts.trials == 0 {
        return Err(GeomError::InvalidInput("empty suite".into()));
    }
    let results: Vec<Vec<Residual>> = (0..opts.trials)
        .into_par_iter()
        .map(|i| {
            let (d, fam) = &cases[i % cases.len()];
            let mut rng = trial_rng(opts.seed, 3, i);
            orthogonality_trial(&mut rng, *d, fam, &opts.tol)
        })
        .collect();
    Ok(aggregate("orthogonality", opts.trials, 0, results))
}

/// Runs the selected suite(s). Zero trials is an input error.
pub fn run_verify(opts: &VerifyOptions) -> Result<VerifySummary> {
    opts.tol.validate()?;
    if opts.trials == 0 {
        return Err(GeomError::InvalidInput("empty suite".into()));
    }
    let suites = match opts.suite {
        Suite::Simplex => vec![run_simplex(opts)?],
        Suite::Polygon => vec![run_polygon(opts)?],
        Suite::Orthogonality => vec![run_orthogonality(opts)?],
        Suite::All => {
            // A dimension list meant for simplices may not suit polygons.
            let poly = VerifyOptions { dims: None, ..opts.clone() };
            vec![run_simplex(opts)?, run_polygon(&poly)?, run_orthogonality(opts)?]
        }
    };
    Ok(VerifySummary { suites })
}

impl std::fmt::Display for Suite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}
