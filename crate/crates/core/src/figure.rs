//! Static SVG 1.1 figures of planar instances.
//!
//! Edges are drawn thin, the Euler segment `[M, P_M]` bold, circles of the
//! norm as sampled outlines, and radii as dotted segments. Every reported
//! center gets exactly one `<circle class="marker">` element.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::instance::{ReportBody, ReportFile};
use crate::norms::NormSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Show {
    Euler,
    Feuerbach,
    Monge,
    CliffordLift,
}

impl Show {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "euler" => Some(Self::Euler),
            "feuerbach" => Some(Self::Feuerbach),
            "monge" => Some(Self::Monge),
            "clifford-lift" => Some(Self::CliffordLift),
            _ => None,
        }
    }
}

/// Largest lift drawn; `2^n` vertices and `n 2^(n-1)` edges.
const MAX_FIGURE_LIFT: usize = 10;
const OUTLINE_SAMPLES: usize = 720;

type P2 = [f64; 2];

fn p2(v: &[f64]) -> P2 {
    [v[0], v[1]]
}

fn add(a: P2, b: P2) -> P2 {
    [a[0] + b[0], a[1] + b[1]]
}

fn sub(a: P2, b: P2) -> P2 {
    [a[0] - b[0], a[1] - b[1]]
}

fn scale(a: P2, s: f64) -> P2 {
    [a[0] * s, a[1] * s]
}

/// Points of the unit circle of `norm`, by radial projection of evenly
/// spaced directions (the axes and diagonals are among them).
fn unit_outline(norm: &NormSpec) -> Vec<P2> {
    (0..OUTLINE_SAMPLES)
        .map(|k| {
            let th = std::f64::consts::TAU * k as f64 / OUTLINE_SAMPLES as f64;
            let u = nalgebra::DVector::from_vec(vec![th.cos(), th.sin()]);
            let n = norm.norm_unchecked(&u);
            [u[0] / n, u[1] / n]
        })
        .collect()
}

struct NormCircle {
    name: String,
    center: P2,
    radius: f64,
    /// Point on the circle the dotted radius is drawn to.
    radius_end: P2,
}

struct Marker {
    name: &'static str,
    at: P2,
}

struct Scene {
    norm: NormSpec,
    outline: Vec<P2>,
    polygon: Vec<P2>,
    euler: Option<(P2, P2)>,
    circles: Vec<NormCircle>,
    lines: Vec<(P2, P2)>,
    segments: Vec<(P2, P2)>,
    markers: Vec<Marker>,
}

impl Scene {
    fn circle(&mut self, name: &str, center: P2, radius: f64, towards: P2) {
        let dir = sub(towards, center);
        let len = self
            .norm
            .norm_unchecked(&nalgebra::DVector::from_vec(dir.to_vec()));
        let radius_end = if len > 0.0 {
            add(center, scale(dir, radius / len))
        } else {
            add(center, [radius, 0.0])
        };
        self.circles.push(NormCircle {
            name: name.into(),
            center,
            radius,
            radius_end,
        });
    }

    fn circle_points(&self, c: &NormCircle) -> Vec<P2> {
        self.outline
            .iter()
            .map(|u| add(c.center, scale(*u, c.radius)))
            .collect()
    }

    fn bounds(&self) -> (P2, P2) {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        let mut eat = |p: P2| {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        };
        self.polygon.iter().for_each(|p| eat(*p));
        self.markers.iter().for_each(|m| eat(m.at));
        for c in &self.circles {
            self.circle_points(c).into_iter().for_each(&mut eat);
        }
        for (a, b) in &self.segments {
            eat(*a);
            eat(*b);
        }
        let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-9);
        let pad = 0.08 * span;
        ([lo[0] - pad, lo[1] - pad], [hi[0] + pad, hi[1] + pad])
    }
}

/// Clips the infinite line through `a` and `b` to the box.
fn clip_line(a: P2, b: P2, lo: P2, hi: P2) -> Option<(P2, P2)> {
    let d = sub(b, a);
    let (mut t0, mut t1) = (f64::NEG_INFINITY, f64::INFINITY);
    for k in 0..2 {
        if d[k].abs() < 1e-15 {
            if a[k] < lo[k] || a[k] > hi[k] {
                return None;
            }
        } else {
            let (s, e) = ((lo[k] - a[k]) / d[k], (hi[k] - a[k]) / d[k]);
            t0 = t0.max(s.min(e));
            t1 = t1.min(s.max(e));
        }
    }
    (t0 < t1).then(|| (add(a, scale(d, t0)), add(a, scale(d, t1))))
}

fn simplex_scene(rep: &ReportFile, show: Show) -> Result<Scene> {
    let ReportBody::Simplex(c) = &rep.report else {
        unreachable!()
    };
    let crate::instance::Problem::Simplex(s) = &rep.instance.problem else {
        unreachable!()
    };
    let verts: Vec<P2> = s.vertices.iter().map(|v| p2(v)).collect();
    let m = p2(&c.center);
    let pm = p2(&c.complementary_point);
    let mut scene = Scene {
        norm: rep.instance.norm.clone(),
        outline: unit_outline(&rep.instance.norm),
        polygon: verts.clone(),
        euler: Some((m, pm)),
        circles: Vec::new(),
        lines: Vec::new(),
        segments: Vec::new(),
        markers: vec![
            Marker { name: "M", at: m },
            Marker { name: "G", at: p2(&c.centroid) },
            Marker { name: "F_M", at: p2(&c.feuerbach_center) },
            Marker { name: "N_M", at: p2(&c.monge_point) },
            Marker { name: "P_M", at: pm },
        ],
    };
    scene.circle("circumcircle", m, c.radius, verts[0]);
    match show {
        Show::Euler => {}
        Show::Feuerbach => {
            let towards = p2(&c.facet_centroids[0]);
            scene.circle("feuerbach", p2(&c.feuerbach_center), c.feuerbach_radius, towards);
        }
        Show::Monge => {
            // In the plane a ridge is a vertex and its opposite edge the
            // other two vertices.
            for i in 0..3 {
                let (j, k) = ((i + 1) % 3, (i + 2) % 3);
                let mid = scale(add(verts[j], verts[k]), 0.5);
                let dir = sub(mid, m);
                if dir[0].hypot(dir[1]) > 1e-12 {
                    scene.lines.push((verts[i], add(verts[i], dir)));
                }
            }
        }
        Show::CliffordLift => scene.segments = lift_edges(&verts, m)?,
    }
    Ok(scene)
}

fn polygon_scene(rep: &ReportFile, show: Show) -> Result<Scene> {
    let ReportBody::Polygon(out) = &rep.report else {
        unreachable!()
    };
    let crate::instance::Problem::Polygon(poly) = &rep.instance.problem else {
        unreachable!()
    };
    let r = &out.report;
    let verts: Vec<P2> = poly.vertices.iter().map(|v| p2(v)).collect();
    let m = p2(&r.circumcenter);
    let pm = p2(&r.complementary_point);
    let mut scene = Scene {
        norm: rep.instance.norm.clone(),
        outline: unit_outline(&rep.instance.norm),
        polygon: verts.clone(),
        euler: Some((m, pm)),
        circles: Vec::new(),
        lines: Vec::new(),
        segments: Vec::new(),
        markers: vec![
            Marker { name: "M", at: m },
            Marker { name: "G", at: p2(&r.centroid) },
            Marker { name: "F_M", at: p2(&r.feuerbach_center) },
            Marker { name: "N_M", at: p2(&r.monge_point) },
            Marker { name: "P_M", at: pm },
            Marker { name: "C_M", at: p2(&r.spatial_center) },
        ],
    };
    scene.circle("circumcircle", m, r.radius, verts[0]);
    match show {
        Show::Euler => {}
        Show::Feuerbach => {
            for (circle, towards) in r.circles.iter().zip([&r.midpoints[0], &r.sub_centroids[0], &r.sub_monge[0]]) {
                scene.circle(&circle.name, p2(&circle.center), circle.radius, p2(towards));
            }
        }
        Show::Monge => {
            for (a, n) in verts.iter().zip(&r.sub_monge) {
                let n = p2(n);
                if sub(n, *a)[0].hypot(sub(n, *a)[1]) > 1e-12 {
                    scene.lines.push((*a, n));
                }
            }
        }
        Show::CliffordLift => scene.segments = lift_edges(&verts, m)?,
    }
    Ok(scene)
}

/// Edges of the projected parallelepiped spanned by `A_i - M` at `M`.
fn lift_edges(verts: &[P2], m: P2) -> Result<Vec<(P2, P2)>> {
    let n = verts.len();
    if n > MAX_FIGURE_LIFT {
        return Err(GeomError::InvalidInput(format!(
            "lift figures are limited to {MAX_FIGURE_LIFT} vertices, got {n}"
        )));
    }
    let offsets: Vec<P2> = verts.iter().map(|a| sub(*a, m)).collect();
    let corner = |mask: usize| {
        (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .fold(m, |acc, i| add(acc, offsets[i]))
    };
    let mut edges = Vec::new();
    for mask in 0..1usize << n {
        for (i, off) in offsets.iter().enumerate() {
            if mask >> i & 1 == 0 {
                let a = corner(mask);
                edges.push((a, add(a, *off)));
            }
        }
    }
    Ok(edges)
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Renders a planar report as an SVG document `width` pixels wide.
pub fn render_svg(rep: &ReportFile, show: Show, width: u32) -> Result<String> {
    if rep.instance.dim() != 2 {
        return Err(GeomError::InvalidInput("figures are planar only".into()));
    }
    if width < 16 {
        return Err(GeomError::InvalidInput(format!("width must be at least 16 px, got {width}")));
    }
    let scene = match rep.report {
        ReportBody::Simplex(_) => simplex_scene(rep, show)?,
        ReportBody::Polygon(_) => polygon_scene(rep, show)?,
    };
    let (lo, hi) = scene.bounds();
    let w = width as f64;
    let k = w / (hi[0] - lo[0]);
    let h = ((hi[1] - lo[1]) * k).ceil().max(1.0);
    let tx = |p: P2| [(p[0] - lo[0]) * k, h - (p[1] - lo[1]) * k];
    let fmt = |p: P2| {
        let q = tx(p);
        format!("{:.3},{:.3}", q[0], q[1])
    };
    let stroke = (w / 400.0).max(0.5);

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>"#);

    for c in &scene.circles {
        let pts: Vec<String> = scene.circle_points(c).into_iter().map(fmt).collect();
        let _ = writeln!(
            s,
            r##"<polygon class="norm-circle" data-name="{}" points="{}" fill="none" stroke="#4a6fa5" stroke-width="{stroke:.2}"/>"##,
            xml_escape(&c.name),
            pts.join(" ")
        );
        let _ = writeln!(
            s,
            r##"<polyline class="radius" points="{} {}" fill="none" stroke="#4a6fa5" stroke-width="{stroke:.2}" stroke-dasharray="1,{:.2}"/>"##,
            fmt(c.center),
            fmt(c.radius_end),
            3.0 * stroke
        );
    }
    for (a, b) in &scene.segments {
        let _ = writeln!(
            s,
            r##"<polyline class="lift" points="{} {}" fill="none" stroke="#999999" stroke-width="{:.2}"/>"##,
            fmt(*a),
            fmt(*b),
            0.6 * stroke
        );
    }
    for (a, b) in &scene.lines {
        if let Some((p, q)) = clip_line(*a, *b, lo, hi) {
            let _ = writeln!(
                s,
                r##"<polyline class="monge-line" points="{} {}" fill="none" stroke="#b5651d" stroke-width="{stroke:.2}"/>"##,
                fmt(p),
                fmt(q)
            );
        }
    }
    let pts: Vec<String> = scene.polygon.iter().map(|p| fmt(*p)).collect();
    let _ = writeln!(
        s,
        r#"<polygon class="edges" points="{}" fill="none" stroke="black" stroke-width="{stroke:.2}"/>"#,
        pts.join(" ")
    );
    if let Some((a, b)) = scene.euler {
        let _ = writeln!(
            s,
            r#"<polyline class="euler" points="{} {}" fill="none" stroke="black" stroke-width="{:.2}"/>"#,
            fmt(a),
            fmt(b),
            3.0 * stroke
        );
    }
    let rad = 2.5 * stroke;
    for mk in &scene.markers {
        let q = tx(mk.at);
        let _ = writeln!(
            s,
            r#"<circle class="marker" data-center="{}" cx="{:.3}" cy="{:.3}" r="{rad:.2}" fill="black"/>"#,
            mk.name, q[0], q[1]
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.3}" y="{:.3}" font-family="serif" font-size="{:.1}">{}</text>"#,
            q[0] + 1.5 * rad,
            q[1] - 1.5 * rad,
            8.0 * stroke,
            xml_escape(mk.name)
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}
