use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_mink-centers"));
    c.env_remove("MINK_CENTERS_EPS_GEOM");
    c
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn centers(name: &str) -> Value {
    let o = run(&["centers", fixture(name).to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn coords(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

#[test]
fn trirectangular_monge_point_is_the_right_angle_vertex() {
    let rep = centers("trirectangular.json");
    let body = &rep["report"]["simplex"];
    for x in coords(&body["monge_point"]) {
        assert!(x.abs() < 1e-12);
    }
    for x in coords(&body["center"]) {
        assert!((x - 1.0).abs() < 1e-12);
    }
    assert_eq!(rep["diagnostics"]["all_passed"], true);
}

#[test]
fn out_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rep.json");
    let o = run(&["centers", fixture("trirectangular.json").to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let rep: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(rep["report"]["simplex"].is_object());
}

#[test]
fn coplanar_points_fail_with_code_one() {
    let o = run(&["centers", fixture("coplanar.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("general position violated"), "{}", stderr(&o));
}

#[test]
fn assumed_center_for_l1_triangle() {
    let o = run(&["centers", fixture("l1_triangle.json").to_str().unwrap(), "--assume-center", "0,0"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rep: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((rep["report"]["simplex"]["radius"].as_f64().unwrap() - 1.0).abs() < 1e-15);
    assert_eq!(rep["diagnostics"]["center_source"], "assumed");
}

#[test]
fn missing_circumcenter_exits_two() {
    let o = run(&["centers", fixture("parallelogram.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stderr(&o).contains("no circumcenter"));
}

#[test]
fn output_is_deterministic() {
    for name in ["l1_triangle.json", "unit_triangle.json", "l1_pentagon.json"] {
        let a = run(&["centers", fixture(name).to_str().unwrap()]);
        let b = run(&["centers", fixture(name).to_str().unwrap()]);
        assert!(a.status.success(), "{name}: {}", stderr(&a));
        assert_eq!(a.stdout, b.stdout, "{name}");
    }
}

fn as_floats(v: &Value) -> Value {
    match v {
        Value::Number(n) => serde_json::json!(n.as_f64().unwrap()),
        Value::Array(a) => Value::Array(a.iter().map(as_floats).collect()),
        Value::Object(o) => Value::Object(o.iter().map(|(k, x)| (k.clone(), as_floats(x))).collect()),
        other => other.clone(),
    }
}

#[test]
fn report_echoes_the_instance() {
    let text = std::fs::read_to_string(fixture("l1_pentagon.json")).unwrap();
    let inst: Value = serde_json::from_str(&text).unwrap();
    let rep = centers("l1_pentagon.json");
    assert_eq!(as_floats(&rep["instance"]["problem"]), as_floats(&inst["problem"]));
    assert_eq!(rep["diagnostics"]["center_source"], "given");
    assert_eq!(rep["diagnostics"]["all_passed"], true);

    let dir = tempfile::tempdir().unwrap();
    let echo = dir.path().join("echo.json");
    std::fs::write(&echo, serde_json::to_string(&rep["instance"]).unwrap()).unwrap();
    let again = run(&["centers", echo.to_str().unwrap()]);
    assert_eq!(serde_json::from_slice::<Value>(&again.stdout).unwrap(), rep);
}

#[test]
fn env_var_sets_eps_geom() {
    let o = bin()
        .args(["centers", fixture("unit_triangle.json").to_str().unwrap()])
        .env("MINK_CENTERS_EPS_GEOM", "1e-7")
        .output()
        .unwrap();
    assert!(o.status.success());
    let rep: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rep["diagnostics"]["tolerances"]["eps_geom"].as_f64(), Some(1e-7));

    let bad = bin()
        .args(["centers", fixture("unit_triangle.json").to_str().unwrap()])
        .env("MINK_CENTERS_EPS_GEOM", "tiny")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn verify_rejects_an_empty_suite() {
    let o = run(&["verify", "--trials", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("empty suite"));
}

#[test]
fn verify_simplex_and_polygon_suites_pass() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("summary.json");
    let o = run(&["verify", "--suite", "simplex", "--trials", "200", "--dims", "2,3,4", "--json", json.to_str().unwrap()]);
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(o.status.success(), "{text}");
    assert!(text.contains("all claims passed"));
    let summary: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(summary["suites"][0]["trials"], 200);

    let o = run(&["verify", "--suite", "polygon", "--trials", "200"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn verify_rejects_unknown_norm_family() {
    let o = run(&["verify", "--norms", "l0.5x"]);
    assert_eq!(o.status.code(), Some(1));
}

fn figure(name: &str, show: &str) -> String {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig.svg");
    let o = run(&["figure", fixture(name).to_str().unwrap(), "--show", show, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    std::fs::read_to_string(out).unwrap()
}

fn markers(svg: &str) -> (f64, f64, Vec<(String, f64, f64)>) {
    let doc = roxmltree::Document::parse(svg).expect("well-formed svg");
    let root = doc.root_element();
    let w: f64 = root.attribute("width").unwrap().parse().unwrap();
    let h: f64 = root.attribute("height").unwrap().parse().unwrap();
    let ms = doc
        .descendants()
        .filter(|n| n.has_tag_name("circle") && n.attribute("class") == Some("marker"))
        .map(|n| {
            (
                n.attribute("data-center").unwrap().to_string(),
                n.attribute("cx").unwrap().parse().unwrap(),
                n.attribute("cy").unwrap().parse().unwrap(),
            )
        })
        .collect();
    (w, h, ms)
}

#[test]
fn pentagon_figure_has_six_markers_on_canvas() {
    let (w, h, ms) = markers(&figure("l1_pentagon.json", "feuerbach"));
    assert_eq!(ms.len(), 6);
    for (name, x, y) in &ms {
        assert!((0.0..=w).contains(x) && (0.0..=h).contains(y), "{name} at ({x}, {y})");
    }
}

#[test]
fn euclidean_triangle_markers_are_collinear() {
    let (_, _, ms) = markers(&figure("unit_triangle.json", "euler"));
    assert_eq!(ms.len(), 5);
    let find = |k: &str| ms.iter().find(|m| m.0 == k).map(|m| (m.1, m.2)).unwrap();
    let (m, p) = (find("M"), find("P_M"));
    let n = find("N_M");
    // Coordinates are printed to three decimals.
    assert!((n.0 - p.0).abs() < 2e-3 && (n.1 - p.1).abs() < 2e-3);
    let len = ((p.0 - m.0).powi(2) + (p.1 - m.1).powi(2)).sqrt();
    for (_, x, y) in &ms {
        let cross = (p.0 - m.0) * (y - m.1) - (p.1 - m.1) * (x - m.0);
        assert!(cross.abs() / len < 5e-3);
    }
}

#[test]
fn figure_refuses_three_dimensions() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig.svg");
    let o = run(&["figure", fixture("trirectangular.json").to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("figures are planar only"));
    assert!(!out.exists());
}

#[test]
fn oracle_finds_the_trirectangular_center() {
    let o = run(&["oracle", fixture("trirectangular.json").to_str().unwrap(), "--step", "0.1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let clusters: Value = serde_json::from_slice(&o.stdout).unwrap();
    let hit = clusters.as_array().unwrap().iter().any(|c| {
        c["points"].as_array().unwrap().iter().any(|pair| {
            let x = coords(&pair[0]);
            x.iter().all(|v| (v - 1.0).abs() < 0.11)
        })
    });
    assert!(hit, "{clusters}");
}
