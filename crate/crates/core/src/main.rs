use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use mink_centers::circumcenter::{grid_oracle_circumcenters, BoundingBox, DEFAULT_GRID_CAP};
use mink_centers::figure::{render_svg, Show};
use mink_centers::instance::{run_centers, write_atomic, InstanceFile};
use mink_centers::sampling::NormFamily;
use mink_centers::tolerance::EPS_GEOM_ENV;
use mink_centers::verify::{run_verify, Suite, VerifyOptions};
use mink_centers::{GeomError, Tolerances};

#[derive(Parser)]
#[command(name = "mink-centers", version, about = "Simplex and cyclic polygon centers in normed spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Simplex,
    Polygon,
    Orthogonality,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum ShowArg {
    Euler,
    Feuerbach,
    Monge,
    CliffordLift,
}

#[derive(Subcommand)]
enum Command {
    /// Compute every center of an instance and write a report.
    Centers {
        instance: PathBuf,
        /// Report path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override eps_geom.
        #[arg(long)]
        tol: Option<f64>,
        /// Circumcenter to use when it certifies, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        assume_center: Option<Vec<f64>>,
    },
    /// Run randomized property suites.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Dimensions (polygon suite: d, one less than the vertex count).
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<usize>>,
        /// Norm families: euclidean, l<p>, linf, poly.
        #[arg(long, value_delimiter = ',')]
        norms: Option<Vec<String>>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        tol: Option<f64>,
        /// Also write the summary as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Draw a planar instance as SVG.
    Figure {
        instance: PathBuf,
        #[arg(long, default_value = "fig.svg")]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "euler")]
        show: ShowArg,
        #[arg(long, default_value_t = 800)]
        width: u32,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Enumerate grid points that are approximate circumcenters (d <= 3).
    Oracle {
        instance: PathBuf,
        #[arg(long)]
        step: f64,
        /// Box margin around the simplex, in coordinate units.
        #[arg(long, default_value_t = 1.0)]
        margin: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<GeomError> for Failure {
    fn from(e: GeomError) -> Self {
        let code = if matches!(e, GeomError::CircumcenterNotFound { .. }) { 2 } else { 1 };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

fn tolerances(tol: Option<f64>) -> Result<Tolerances, Failure> {
    let base = Tolerances::from_env()?;
    Ok(match tol {
        Some(eps) => base.with_eps_geom(eps)?,
        None => base,
    })
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => Ok(write_atomic(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Centers {
            instance,
            out,
            tol,
            assume_center,
        } => {
            let tol = tolerances(tol)?;
            let inst = InstanceFile::read(&instance)?;
            let rep = run_centers(&inst, tol, assume_center.as_deref())?;
            emit(out.as_deref(), &rep.to_json())?;
            Ok(0)
        }
        Command::Verify {
            suite,
            trials,
            dims,
            norms,
            seed,
            tol,
            json,
        } => {
            let norms = norms
                .map(|list| {
                    list.iter()
                        .map(|s| NormFamily::parse(s).ok_or_else(|| input_error(format!("unknown norm family `{s}`"))))
                        .collect::<Result<Vec<_>, _>>()
                })
                .transpose()?;
            let opts = VerifyOptions {
                suite: match suite {
                    SuiteArg::Simplex => Suite::Simplex,
                    SuiteArg::Polygon => Suite::Polygon,
                    SuiteArg::Orthogonality => Suite::Orthogonality,
                    SuiteArg::All => Suite::All,
                },
                trials,
                dims,
                norms,
                seed,
                tol: tolerances(tol)?,
            };
            let summary = run_verify(&opts)?;
            print!("{}", summary.render());
            if let Some(p) = json {
                let text = serde_json::to_string_pretty(&summary).expect("summary serialises");
                write_atomic(&p, &(text + "\n"))?;
            }
            Ok(if summary.all_passed() { 0 } else { 1 })
        }
        Command::Figure {
            instance,
            out,
            show,
            width,
            tol,
        } => {
            let tol = tolerances(tol)?;
            let inst = InstanceFile::read(&instance)?;
            if inst.dim() != 2 {
                return Err(input_error("figures are planar only"));
            }
            let rep = run_centers(&inst, tol, None)?;
            let show = match show {
                ShowArg::Euler => Show::Euler,
                ShowArg::Feuerbach => Show::Feuerbach,
                ShowArg::Monge => Show::Monge,
                ShowArg::CliffordLift => Show::CliffordLift,
            };
            write_atomic(&out, &render_svg(&rep, show, width)?)?;
            Ok(0)
        }
        Command::Oracle {
            instance,
            step,
            margin,
            out,
        } => {
            let tol = tolerances(None)?;
            let inst = InstanceFile::read(&instance)?;
            let t = inst.simplex(&inst.tolerances(tol)?)?;
            let bbox = BoundingBox::around(&t, margin);
            let clusters = grid_oracle_circumcenters(&inst.norm, &t, step, &bbox, DEFAULT_GRID_CAP)?;
            let text = serde_json::to_string_pretty(&clusters).expect("clusters serialise");
            emit(out.as_deref(), &(text + "\n"))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            if f.code == 2 {
                eprintln!("hint: pass --assume-center or check {EPS_GEOM_ENV}");
            }
            ExitCode::from(f.code)
        }
    }
}
