//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Expected values come from oracles written here, not from the library's
//! own center formulas: distances use a separate norm evaluator for the
//! `l_p` family, Monge lines and M-hyperplanes are rebuilt from vertex
//! coordinates, and the Euclidean orthocenter is a least-squares solve of
//! the altitude conditions.

use std::process::ExitCode;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use mink_centers::centers::{complementary_point, full_report, monge_point};
use mink_centers::circumcenter::{
    grid_oracle_circumcenters, is_circumcenter, solve_circumcenter_with, BoundingBox, SolverOptions, DEFAULT_GRID_CAP,
};
use mink_centers::norms::eval_norm;
use mink_centers::polygon::verify_polygon_theorems;
use mink_centers::sampling::{
    balanced_simplex, orthocentric_simplex, random_affine_map, random_cyclic_polygon, random_simplex, NormFamily,
};
use mink_centers::simplex::euclid_orthocenter;
use mink_centers::{NormSpec, Point, Simplex, Tolerances};

const CONCURRENCY_TOL: f64 = 1e-8;
const RATIO_TOL: f64 = 1e-10;
const SPHERE_TOL: f64 = 1e-8;
const WORKED_TOL: f64 = 1e-10;
const ORTHO_TOL: f64 = 1e-8;
const POLYGON_TOL: f64 = 1e-8;
const CIRCUM_TOL: f64 = 1e-8;
const AFFINE_TOL: f64 = 1e-8;
const COLLAPSE_TOL: f64 = 1e-10;

fn norm_of(spec: &NormSpec, v: &DVector<f64>) -> f64 {
    match spec {
        NormSpec::Euclidean => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
        NormSpec::Lp(p) if p.is_infinite() => v.iter().fold(0.0, |m, x| m.max(x.abs())),
        NormSpec::Lp(p) => v.iter().map(|x| x.abs().powf(*p)).sum::<f64>().powf(1.0 / p),
        NormSpec::Polyhedral(_) => eval_norm(spec, v).unwrap(),
    }
}

fn dist(spec: &NormSpec, a: &Point, b: &Point) -> f64 {
    norm_of(spec, &(a - b))
}

fn mean_of(points: &[&Point]) -> Point {
    let d = points[0].len();
    points.iter().fold(DVector::zeros(d), |acc, p| acc + *p) / points.len() as f64
}

fn offset_sum(t: &Simplex, m: &Point) -> DVector<f64> {
    t.vertices().iter().fold(DVector::zeros(m.len()), |acc, a| acc + (a - m))
}

fn line_distance(base: &Point, dir: &DVector<f64>, p: &Point) -> f64 {
    let u = dir / dir.norm();
    let w = p - base;
    (&w - &u * u.dot(&w)).norm()
}

/// Distance from `p` to the affine span of `base + span(dirs)`, or `None`
/// when the directions do not span a hyperplane.
fn hyperplane_distance(base: &Point, dirs: &[DVector<f64>], p: &Point) -> Option<f64> {
    let d = base.len();
    let a = DMatrix::from_columns(dirs);
    let svd = a.clone().svd(true, false);
    let s = &svd.singular_values;
    let smax = s.max();
    if s.len() != d - 1 || s.min() <= 1e-8 * smax.max(1e-300) {
        return None;
    }
    let q = svd.u.unwrap();
    let w = p - base;
    let proj = &q * (q.transpose() * &w);
    Some((w - proj).norm())
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Least-squares orthocenter: `(H - A_i) . (A_j - A_k) = 0` for all
/// `j, k != i`.
fn orthocenter_oracle(t: &Simplex) -> Point {
    let vs = t.vertices();
    let d = t.dim();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for i in 0..=d {
        for j in 0..=d {
            for k in j + 1..=d {
                if i == j || i == k {
                    continue;
                }
                let e = &vs[j] - &vs[k];
                rows.push(e.transpose());
                rhs.push(e.dot(&vs[i]));
            }
        }
    }
    let a = DMatrix::from_rows(&rows);
    let b = DVector::from_vec(rhs);
    a.svd(true, true).solve(&b, 1e-14).unwrap()
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

struct Instance {
    d: usize,
    norm: NormSpec,
    t: Simplex,
    center: Option<(Point, f64)>,
    certified: bool,
}

fn simplex_instances(tol: &Tolerances) -> Vec<Instance> {
    let families = [
        NormFamily::Euclidean,
        NormFamily::Lp(1.5),
        NormFamily::Lp(3.0),
        NormFamily::Lp(f64::INFINITY),
        NormFamily::RandomPolyhedral,
    ];
    let mut cases = Vec::new();
    for f in &families {
        for d in 2..=5 {
            if f.supports_dim(d) {
                cases.push((d, f.clone()));
            }
        }
    }
    (0..500usize)
        .into_par_iter()
        .map(|i| {
            let (d, fam) = &cases[i % cases.len()];
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + i as u64);
            let norm = fam.sample(&mut rng, *d);
            let t = random_simplex(&mut rng, *d);
            let opts = SolverOptions {
                starts: None,
                seed: i as u64,
            };
            let res = solve_circumcenter_with(&norm, &t, tol, &opts).unwrap();
            let center = res
                .center_point()
                .filter(|_| res.is_found())
                .map(|m| (m, res.radius.unwrap()));
            let certified = center
                .as_ref()
                .is_none_or(|(m, _)| matches!(is_circumcenter(&norm, &t, m, tol), Ok(Some(_))));
            Instance {
                d: *d,
                norm,
                t,
                center,
                certified,
            }
        })
        .collect()
}

fn criterion_1(set: &[Instance], elapsed: std::time::Duration) -> (bool, String) {
    let mut worst: f64 = 0.0;
    let mut lines = 0;
    let mut found = 0;
    for inst in set {
        let Some((m, _)) = &inst.center else { continue };
        found += 1;
        let vs = inst.t.vertices();
        let df = inst.d as f64;
        let n_m = m + offset_sum(&inst.t, m) / (df - 1.0);
        let diam = inst.t.euclidean_diameter();
        for edge in subsets(inst.d + 1, 2) {
            let ridge: Vec<usize> = (0..=inst.d).filter(|i| !edge.contains(i)).collect();
            let g_r = mean_of(&ridge.iter().map(|&i| &vs[i]).collect::<Vec<_>>());
            let g_e = mean_of(&[&vs[edge[0]], &vs[edge[1]]]);
            let dir = &g_e - m;
            if dir.norm() <= 1e-12 * diam {
                continue;
            }
            lines += 1;
            worst = worst.max(line_distance(&g_r, &dir, &n_m) / diam);
        }
    }
    (
        worst <= CONCURRENCY_TOL && found > 0 && elapsed.as_secs_f64() < 60.0,
        format!("{found} centers, {lines} Monge lines, max distance to N_M {worst:.2e} x diameter, solved in {elapsed:.1?}"),
    )
}

fn criterion_2(set: &[Instance]) -> (bool, String) {
    let mut worst: f64 = 0.0;
    let mut min_defined = usize::MAX;
    for inst in set {
        let Some((m, _)) = &inst.center else { continue };
        let vs = inst.t.vertices();
        let df = inst.d as f64;
        let n_m = m + offset_sum(&inst.t, m) / (df - 1.0);
        let diam = inst.t.euclidean_diameter();
        let mut defined = 0;
        for edge in subsets(inst.d + 1, 2) {
            let ridge: Vec<usize> = (0..=inst.d).filter(|i| !edge.contains(i)).collect();
            let g_r = mean_of(&ridge.iter().map(|&i| &vs[i]).collect::<Vec<_>>());
            let g_e = mean_of(&[&vs[edge[0]], &vs[edge[1]]]);
            let mut dirs: Vec<DVector<f64>> = ridge[1..].iter().map(|&i| &vs[i] - &vs[ridge[0]]).collect();
            dirs.push(&g_e - m);
            if let Some(dist) = hyperplane_distance(&g_r, &dirs, &n_m) {
                defined += 1;
                worst = worst.max(dist / diam);
            }
        }
        min_defined = min_defined.min(defined);
        if defined < inst.d {
            return (false, format!("only {defined} M-hyperplanes defined in dimension {}", inst.d));
        }
    }
    (
        worst <= CONCURRENCY_TOL,
        format!("max distance to N_M {worst:.2e} x diameter, at least {min_defined} hyperplanes per instance"),
    )
}

fn criterion_3(set: &[Instance], tol: &Tolerances) -> (bool, String) {
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for inst in set {
        let Some((m, _)) = &inst.center else { continue };
        let rep = full_report(&inst.norm, &inst.t, Some(m), tol, &SolverOptions::default()).unwrap();
        if rep.collapsed {
            continue;
        }
        checked += 1;
        let p = |v: &[f64]| Point::from_column_slice(v);
        let (g, n, f, pm) = (p(&rep.centroid), p(&rep.monge_point), p(&rep.feuerbach_center), p(&rep.complementary_point));
        let param = |a: &Point, b: &Point, x: &Point| {
            let ab = b - a;
            (x - a).dot(&ab) / ab.norm_squared()
        };
        let df = inst.d as f64;
        let mut checks = vec![
            (param(m, &pm, &g), 1.0 / (1.0 + df)),
            (param(m, &n, &g), (df - 1.0) / (df + 1.0)),
            (param(&n, m, &f), 1.0 / df),
        ];
        if inst.d >= 3 {
            checks.push((param(m, &pm, &n), 1.0 / (df - 1.0)));
        }
        for (got, want) in checks {
            worst = worst.max((got - want).abs() / want);
        }
    }
    (
        worst <= RATIO_TOL,
        format!("{checked} non-collapsed instances, max relative ratio error {worst:.2e}"),
    )
}

fn criterion_4(set: &[Instance]) -> (bool, String) {
    let mut worst: f64 = 0.0;
    let mut points = 0;
    for inst in set {
        let Some((m, _)) = &inst.center else { continue };
        let vs = inst.t.vertices();
        let df = inst.d as f64;
        let r = vs.iter().map(|a| dist(&inst.norm, a, m)).sum::<f64>() / (df + 1.0);
        let s = offset_sum(&inst.t, m);
        let f_m = m + &s / df;
        let n_m = m + &s / (df - 1.0);
        for i in 0..=inst.d {
            let others: Vec<&Point> = (0..=inst.d).filter(|&j| j != i).map(|j| &vs[j]).collect();
            let g_i = mean_of(&others);
            let l_i = &n_m + (&vs[i] - &n_m) / df;
            for q in [g_i, l_i] {
                worst = worst.max((dist(&inst.norm, &q, &f_m) - r / df).abs() / (r / df));
                points += 1;
            }
        }
    }
    (
        worst <= SPHERE_TOL,
        format!("{points} incidence points, max relative deviation from R/d {worst:.2e}"),
    )
}

fn criterion_5(tol: &Tolerances) -> (bool, String) {
    let t = Simplex::from_coords(
        &[
            vec![0.0, 0.0, 0.0],
            vec![2.0, 0.0, 0.0],
            vec![0.0, 2.0, 0.0],
            vec![0.0, 0.0, 2.0],
        ],
        tol,
    )
    .unwrap();
    // Equidistance from the origin and 2e_k gives x_k = 1.
    let m_hand = [1.0, 1.0, 1.0];
    let r_hand = 3f64.sqrt();
    let f_hand = [1.0 / 3.0; 3];
    let res = solve_circumcenter_with(&NormSpec::Euclidean, &t, tol, &SolverOptions::default()).unwrap();
    let m = res.center_point().unwrap();
    let rep = full_report(&NormSpec::Euclidean, &t, None, tol, &SolverOptions::default()).unwrap();
    let h = orthocenter_oracle(&t);
    let close = |a: &[f64], b: &[f64]| a.iter().zip(b).all(|(x, y)| (x - y).abs() <= WORKED_TOL);
    let checks = [
        close(m.as_slice(), &m_hand),
        (res.radius.unwrap() - r_hand).abs() <= WORKED_TOL,
        close(&rep.monge_point, &[0.0, 0.0, 0.0]),
        close(&rep.monge_point, h.as_slice()),
        close(&rep.feuerbach_center, &f_hand),
        (rep.feuerbach_radius - r_hand / 3.0).abs() <= WORKED_TOL,
    ];
    (
        checks.iter().all(|c| *c),
        format!(
            "M = {:?}, R = {:.12}, N_M = {:?}, F_M = {:?}, r = {:.12}",
            m.as_slice(),
            res.radius.unwrap(),
            rep.monge_point,
            rep.feuerbach_center,
            rep.feuerbach_radius
        ),
    )
}

fn criterion_6(tol: &Tolerances) -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(66);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let t = orthocentric_simplex(&mut rng, 3);
        let res = solve_circumcenter_with(&NormSpec::Euclidean, &t, tol, &SolverOptions::default()).unwrap();
        let m = res.center_point().unwrap();
        let n = monge_point(&t, &m).unwrap();
        let h = orthocenter_oracle(&t);
        let h_lib = euclid_orthocenter(&t, tol).unwrap().unwrap();
        worst = worst.max((&n - &h).norm()).max((&n - &h_lib).norm());
    }
    (
        worst <= ORTHO_TOL,
        format!("100 orthocentric tetrahedra, max |N_M - H| {worst:.2e}"),
    )
}

fn criterion_7(tol: &Tolerances) -> (bool, String) {
    let norms = [
        NormSpec::Euclidean,
        NormSpec::Lp(1.0),
        NormSpec::Lp(f64::INFINITY),
        NormSpec::Lp(3.0),
    ];
    let results: Vec<(f64, bool)> = (0..300usize)
        .into_par_iter()
        .map(|i| {
            let d = 3 + i % 6;
            let norm = &norms[(i / 6) % norms.len()];
            let mut rng = ChaCha8Rng::seed_from_u64(7000 + i as u64);
            let c = DVector::from_fn(2, |_, _| rng.random_range(-2.0..2.0));
            let r = rng.random_range(0.5..3.0);
            let p = random_cyclic_polygon(&mut rng, norm, d, &c, r).unwrap();
            let lib_ok = verify_polygon_theorems(&p, tol).unwrap().all_passed();
            (polygon_oracle(norm, p.vertices(), &c, r), lib_ok)
        })
        .collect();
    let worst = results.iter().map(|r| r.0).fold(0.0, f64::max);
    let lib_ok = results.iter().all(|r| r.1);
    (
        worst <= POLYGON_TOL && lib_ok,
        format!("300 polygons, d = 3..8, max residual {worst:.2e} x R, library claims all passed: {lib_ok}"),
    )
}

/// Largest relative residual over the polygon circle and pencil identities.
fn polygon_oracle(norm: &NormSpec, vs: &[Point], m: &Point, r: f64) -> f64 {
    let n = vs.len();
    let df = (n - 1) as f64;
    let s = vs.iter().fold(DVector::zeros(2), |acc, a| acc + (a - m));
    let pm = m + &s;
    let cm = m + &s / 2.0;
    let fm = m + &s / df;
    let nm = m + &s / (df - 1.0);
    let c3 = m + &s / (df - 2.0);
    let on = |p: &Point, c: &Point, rad: f64| (dist(norm, p, c) - rad).abs() / r;
    let mut worst: f64 = 0.0;
    for a in vs {
        let sub = &s - (a - m);
        let pm_i = m + &sub;
        let cm_i = m + &sub / 2.0;
        let nm_i = m + &sub / (df - 2.0);
        let g_i = m + &sub / df;
        let e_i = (a + &pm) / 2.0;
        let l_i = &nm + (a - &nm) / df;
        worst = worst
            .max(on(&pm, &pm_i, r))
            .max(on(&e_i, &cm, r / 2.0))
            .max(on(&cm, &cm_i, r / 2.0))
            .max(on(&cm_i, &cm, r / 2.0))
            .max(on(&g_i, &fm, r / df))
            .max(on(&l_i, &fm, r / df))
            .max(on(&nm_i, &c3, r / (df - 2.0)));
        let to_pm = &pm_i - a;
        if to_pm.norm() > 1e-9 * r {
            worst = worst.max(line_distance(a, &to_pm, &cm) / r);
        }
        let to_nm = &nm_i - a;
        if to_nm.norm() > 1e-9 * r {
            worst = worst.max(line_distance(a, &to_nm, &nm) / r);
            let split = a + (&nm_i - a) * ((df - 2.0) / (df - 1.0));
            worst = worst.max((split - &nm).norm() / r);
        }
    }
    worst
}

fn criterion_8(set: &[Instance], tol: &Tolerances) -> (bool, String) {
    let sound = set.iter().all(|i| i.certified);
    let independent = set.iter().all(|inst| {
        inst.center.as_ref().is_none_or(|(m, r)| {
            let scale = inst
                .t
                .vertices()
                .iter()
                .flat_map(|a| inst.t.vertices().iter().map(move |b| (a, b)))
                .map(|(a, b)| dist(&inst.norm, a, b))
                .fold(0.0, f64::max);
            inst.t
                .vertices()
                .iter()
                .all(|a| (dist(&inst.norm, a, m) - r).abs() <= 2.0 * tol.eps_geom * scale)
        })
    });

    let smooth: Vec<bool> = (0..200usize)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(8000 + i as u64);
            let d = 2 + i % 2;
            let p = rng.random_range(1.2..6.0);
            let norm = NormSpec::Lp(p);
            let t = random_simplex(&mut rng, d);
            let opts = SolverOptions {
                starts: None,
                seed: i as u64,
            };
            let res = solve_circumcenter_with(&norm, &t, tol, &opts).unwrap();
            res.is_found() && matches!(is_circumcenter(&norm, &t, &res.center_point().unwrap(), tol), Ok(Some(_)))
        })
        .collect();
    let smooth_found = smooth.iter().filter(|f| **f).count();

    let l1 = NormSpec::Lp(1.0);
    let tri = Simplex::from_coords(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![-1.0, 0.0]], tol).unwrap();
    let res = solve_circumcenter_with(&l1, &tri, tol, &SolverOptions::default()).unwrap();
    let (tri_ok, grid_ok, center) = match res.center_point().filter(|_| res.is_found()) {
        Some(m) => {
            let ds: Vec<f64> = tri.vertices().iter().map(|a| dist(&l1, a, &m)).collect();
            let ok = ds.iter().all(|x| (x - 1.0).abs() <= CIRCUM_TOL);
            let step = 0.01;
            let bbox = BoundingBox::around(&tri, 1.0);
            let clusters = grid_oracle_circumcenters(&l1, &tri, step, &bbox, DEFAULT_GRID_CAP).unwrap();
            let near = clusters.iter().flat_map(|c| c.points.iter()).any(|(g, _)| {
                g.iter().zip(m.iter()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) <= step
            });
            (ok, near, format!("{:?}", m.as_slice()))
        }
        None => (false, false, "none".into()),
    };
    (
        sound && independent && smooth_found == 200 && tri_ok && grid_ok,
        format!(
            "found centers certified: {sound}/{independent}, smooth l_p {smooth_found}/200, \
             l1 unit triangle center {center} distances 1 +- 1e-8: {tri_ok}, grid corroborates: {grid_ok}"
        ),
    )
}

fn criterion_9(tol: &Tolerances) -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let d = 2 + i % 4;
        let t = random_simplex(&mut rng, d);
        let m = DVector::from_fn(d, |_, _| rng.random_range(-1.0..1.0));
        let (a, b) = random_affine_map(&mut rng, d);
        let image = Simplex::new(t.vertices().iter().map(|v| &a * v + &b).collect(), tol).unwrap();
        let m2 = &a * &m + &b;
        let scale = image.euclidean_diameter().max(1.0);
        let dn = (&a * monge_point(&t, &m).unwrap() + &b - monge_point(&image, &m2).unwrap()).norm();
        let dp = (&a * complementary_point(&t, &m).unwrap() + &b - complementary_point(&image, &m2).unwrap()).norm();
        worst = worst.max(dn / scale).max(dp / scale);
    }
    (
        worst <= AFFINE_TOL,
        format!("100 affine maps, max commutation defect {worst:.2e} x diameter"),
    )
}

fn criterion_10(tol: &Tolerances) -> (bool, String) {
    let norms = [
        NormSpec::Euclidean,
        NormSpec::Lp(1.0),
        NormSpec::Lp(1.5),
        NormSpec::Lp(3.0),
        NormSpec::Lp(f64::INFINITY),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let mut worst: f64 = 0.0;
    let mut flagged = true;
    let mut count = 0;
    for norm in &norms {
        for d in 2..=5 {
            for _ in 0..5 {
                let c = DVector::from_fn(d, |_, _| rng.random_range(-2.0..2.0));
                let radius = rng.random_range(0.5..2.0);
                let t = balanced_simplex(&mut rng, norm, d, &c, radius);
                let rep = full_report(norm, &t, Some(&c), tol, &SolverOptions::default()).unwrap();
                flagged &= rep.collapsed;
                for p in [&rep.center, &rep.centroid, &rep.monge_point, &rep.complementary_point, &rep.feuerbach_center] {
                    let gap = p.iter().zip(c.iter()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
                    worst = worst.max(gap);
                }
                count += 1;
            }
        }
    }
    (
        flagged && worst <= COLLAPSE_TOL,
        format!("{count} balanced simplices, all flagged: {flagged}, max center spread {worst:.2e}"),
    )
}

fn main() -> ExitCode {
    let tol = Tolerances::default();
    let start = Instant::now();
    let set = simplex_instances(&tol);
    let generated = start.elapsed();

    let results: Vec<(&str, (bool, String))> = vec![
        ("monge concurrency", criterion_1(&set, generated)),
        ("M-hyperplane intersection", criterion_2(&set)),
        ("Euler ratios", criterion_3(&set, &tol)),
        ("Feuerbach sphere incidence", criterion_4(&set)),
        ("worked tetrahedron", criterion_5(&tol)),
        ("Euclidean orthocentric cross-check", criterion_6(&tol)),
        ("cyclic polygon identities", criterion_7(&tol)),
        ("circumcenter solver soundness", criterion_8(&set, &tol)),
        ("affine invariance", criterion_9(&tol)),
        ("collapse detection", criterion_10(&tol)),
    ];
    let missing = set.iter().filter(|i| i.center.is_none()).count();
    println!(
        "instance set: 500 simplices, {} with a located circumcenter, {missing} without",
        500 - missing
    );
    let mut all = true;
    for (k, (name, (ok, detail))) in results.iter().enumerate() {
        all &= ok;
        println!("criterion {:>2} {:<36} {}  {}", k + 1, name, verdict(*ok), detail);
    }
    println!("total time {:.1?}", start.elapsed());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
