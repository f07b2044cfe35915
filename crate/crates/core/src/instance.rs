//! Instance and report files: one JSON object per file.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::affine::Point;
use crate::centers::{full_report, CentersReport, Residual};
use crate::circumcenter::{is_circumcenter, solve_circumcenter_with, CircumStatus, SolverOptions};
use crate::error::{GeomError, Result};
use crate::norms::NormSpec;
use crate::polygon::{subpolygon_family, verify_polygon_theorems, CyclicPolygon, PolygonReport};
use crate::simplex::Simplex;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimplexRecord {
    pub vertices: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolygonRecord {
    pub vertices: Vec<Vec<f64>>,
    pub center: Vec<f64>,
    pub radius: f64,
    /// Defaults to the instance norm; must agree with it when given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm: Option<NormSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Problem {
    Simplex(SimplexRecord),
    Polygon(PolygonRecord),
}

/// Partial tolerance overrides; missing fields keep their defaults.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_geom: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_opt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iters: Option<usize>,
}

impl ToleranceOverrides {
    pub fn apply(&self, base: Tolerances) -> Result<Tolerances> {
        let eps_geom = self.eps_geom.unwrap_or(base.eps_geom);
        Tolerances::new(
            eps_geom,
            self.eps_opt.unwrap_or(base.eps_opt.min(eps_geom)),
            self.max_iters.unwrap_or(base.max_iters),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub norm: NormSpec,
    pub problem: Problem,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<ToleranceOverrides>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

fn points(rows: &[Vec<f64>]) -> Vec<Point> {
    rows.iter().map(|r| Point::from_column_slice(r)).collect()
}

impl InstanceFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| GeomError::InvalidInput(format!("instance: {e}")))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| GeomError::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serialises")
    }

    /// Tolerances from `base` with the file's overrides applied.
    pub fn tolerances(&self, base: Tolerances) -> Result<Tolerances> {
        self.tolerances.unwrap_or_default().apply(base)
    }

    pub fn dim(&self) -> usize {
        match &self.problem {
            Problem::Simplex(s) => s.vertices.first().map_or(0, Vec::len),
            Problem::Polygon(p) => p.center.len(),
        }
    }

    pub fn simplex(&self, tol: &Tolerances) -> Result<Simplex> {
        match &self.problem {
            Problem::Simplex(s) => {
                let t = Simplex::new(points(&s.vertices), tol)?;
                self.norm.check_dim(t.dim())?;
                Ok(t)
            }
            Problem::Polygon(_) => Err(GeomError::InvalidInput("instance holds a polygon".into())),
        }
    }

    pub fn polygon(&self, tol: &Tolerances) -> Result<CyclicPolygon> {
        match &self.problem {
            Problem::Polygon(p) => {
                if let Some(n) = &p.norm {
                    if n != &self.norm {
                        return Err(GeomError::InvalidInput(
                            "polygon norm differs from the instance norm".into(),
                        ));
                    }
                }
                CyclicPolygon::new(
                    points(&p.vertices),
                    Point::from_column_slice(&p.center),
                    p.radius,
                    self.norm.clone(),
                    tol,
                )
            }
            Problem::Simplex(_) => Err(GeomError::InvalidInput("instance holds a simplex".into())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolygonOutcome {
    pub report: PolygonReport,
    pub claims: Vec<Residual>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportBody {
    Simplex(CentersReport),
    Polygon(PolygonOutcome),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub tolerances: Tolerances,
    pub seed: u64,
    /// `assumed`, `solved` or `given` (polygons carry their center).
    pub center_source: String,
    pub solver_status: Option<CircumStatus>,
    pub solver_residual: Option<f64>,
    pub starts_used: usize,
    pub all_passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub instance: InstanceFile,
    pub report: ReportBody,
    pub residuals: Vec<Residual>,
    pub diagnostics: Diagnostics,
}

impl ReportFile {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| GeomError::InvalidInput(format!("report: {e}")))
    }
}

pub const DEFAULT_SEED: u64 = 0x5eed_c1bc;

/// Computes every center of the instance.
///
/// Simplices use `assume_center` when it is certified as a circumcenter and
/// the solver otherwise. Polygons carry their own center, so `assume_center`
/// is rejected for them.
pub fn run_centers(inst: &InstanceFile, base: Tolerances, assume_center: Option<&[f64]>) -> Result<ReportFile> {
    let tol = inst.tolerances(base)?;
    let seed = inst.seed.unwrap_or(DEFAULT_SEED);
    let opts = SolverOptions { starts: None, seed };
    match &inst.problem {
        Problem::Simplex(_) => {
            let t = inst.simplex(&tol)?;
            let assumed = match assume_center {
                Some(c) => {
                    let m = Point::from_column_slice(c);
                    if m.len() != t.dim() {
                        return Err(GeomError::DimensionMismatch {
                            expected: t.dim(),
                            got: m.len(),
                        });
                    }
                    is_circumcenter(&inst.norm, &t, &m, &tol)?.map(|_| m)
                }
                None => None,
            };
            let (m, source, status, residual, starts) = match assumed {
                Some(m) => (m, "assumed", None, None, 0),
                None => {
                    let res = solve_circumcenter_with(&inst.norm, &t, &tol, &opts)?;
                    let m = res
                        .center_point()
                        .filter(|_| res.is_found())
                        .ok_or(GeomError::CircumcenterNotFound {
                            residual: res.residual,
                        })?;
                    (m, "solved", Some(res.status), Some(res.residual), res.starts_used)
                }
            };
            let rep = full_report(&inst.norm, &t, Some(&m), &tol, &opts)?;
            let residuals = rep.residuals.clone();
            Ok(ReportFile {
                instance: inst.clone(),
                diagnostics: Diagnostics {
                    tolerances: tol,
                    seed,
                    center_source: source.into(),
                    solver_status: status,
                    solver_residual: residual,
                    starts_used: starts,
                    all_passed: rep.all_passed(),
                },
                report: ReportBody::Simplex(rep),
                residuals,
            })
        }
        Problem::Polygon(_) => {
            if assume_center.is_some() {
                return Err(GeomError::InvalidInput(
                    "--assume-center applies to simplex instances only".into(),
                ));
            }
            let p = inst.polygon(&tol)?;
            let report = subpolygon_family(&p)?;
            let verification = verify_polygon_theorems(&p, &tol)?;
            let all_passed = verification.all_passed();
            Ok(ReportFile {
                instance: inst.clone(),
                residuals: verification.claims.clone(),
                report: ReportBody::Polygon(PolygonOutcome {
                    report,
                    claims: verification.claims,
                }),
                diagnostics: Diagnostics {
                    tolerances: tol,
                    seed,
                    center_source: "given".into(),
                    solver_status: None,
                    solver_residual: None,
                    starts_used: 0,
                    all_passed,
                },
            })
        }
    }
}

/// Writes `contents` next to `path` and renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let io = |e: std::io::Error| GeomError::InvalidInput(format!("cannot write {}: {e}", path.display()));
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => std::path::PathBuf::from("."),
    };
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let mut f = fs::File::create(&tmp).map_err(io)?;
    f.write_all(contents.as_bytes()).map_err(io)?;
    f.sync_all().map_err(io)?;
    drop(f);
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        io(e)
    })
}
