//! The `quasumb` command-line front end.
//!
//! Subcommands: `classify`, `curvature`, `umbilic-locus`, `mesh`,
//! `reconstruct case1|case2`, and `verify`. Exit codes: 0 on success, 1 on
//! a domain or spec error (with a diagnostic on stderr), 2 on usage errors.

pub mod verify;

use crate::error::{Error, Result};
use crate::export::{
    grid_surface_csv, grid_surface_obj, mesh_csv, mesh_obj, report_json, write_output, MeshFormat,
};
use crate::expr::parse_expr;
use crate::flow::{reconstruct_case2, FrameState};
use crate::generators::{case1_cylinder, ruled_null_surface_on, ThetaSpec};
use crate::loci::{classify_surface, umbilic_locus, GridRange};
use crate::mink::{MVec3, NullFrame};
use crate::surface::{BuiltinSurface, SurfaceSpec, CLASS_TOL};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use std::ffi::OsString;
use std::path::PathBuf;

/// Environment variable capping the rayon worker count.
pub const THREADS_ENV: &str = "QUASUMB_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "quasumb",
    version,
    about = "Geometry of timelike surfaces in 3-dimensional Minkowski space"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify every grid node by shape-operator type and print a verdict
    Classify {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Relative classification tolerance
        #[arg(long, default_value_t = CLASS_TOL)]
        tol: f64,
        /// Emit the full report as JSON
        #[arg(long)]
        json: bool,
        /// Output path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate K, H, and the discriminant over a grid (CSV)
    Curvature {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = CLASS_TOL)]
        tol: f64,
        /// Emit an extrema summary as JSON instead of the table
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Trace umbilic points by bisection along v for each u sample
    #[command(name = "umbilic-locus")]
    UmbilicLocus {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = CLASS_TOL)]
        tol: f64,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export the surface as an OBJ or CSV mesh
    Mesh {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// obj or csv
        #[arg(long, default_value = "obj")]
        format: String,
        #[arg(long, default_value_t = CLASS_TOL)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rebuild a surface from its defining functions
    Reconstruct {
        #[command(subcommand)]
        family: ReconstructCmd,
    },
    /// Run a named verification pipeline
    Verify {
        /// ex1, ex2, ex3, ex4, liouville, backlund, case1, or case2
        #[arg(long)]
        example: String,
    },
}

#[derive(Subcommand, Debug)]
enum ReconstructCmd {
    /// Flat cylinder from a profile function f(u) (closed form)
    Case1 {
        /// Profile function f(u)
        #[arg(long = "f", allow_hyphen_values = true)]
        profile: String,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value = "obj")]
        format: String,
        #[arg(long, default_value_t = CLASS_TOL)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Nonzero-mean surface from H(u) and k(u) (frame integration)
    Case2 {
        /// Mean curvature H(u)
        #[arg(long = "H", allow_hyphen_values = true)]
        mean: String,
        /// Free chart function k(u)
        #[arg(long = "k", allow_hyphen_values = true)]
        gauge: String,
        #[command(flatten)]
        grid: GridArgs,
        /// RK4 step in parameter length
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        #[arg(long, default_value = "obj")]
        format: String,
        #[arg(long, default_value_t = CLASS_TOL)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct GridArgs {
    /// u range as lo:hi:n
    #[arg(long = "u", value_parser = parse_cli_range, allow_hyphen_values = true)]
    u: GridRange,
    /// v range as lo:hi:n
    #[arg(long = "v", value_parser = parse_cli_range, allow_hyphen_values = true)]
    v: GridRange,
}

fn parse_cli_range(text: &str) -> std::result::Result<GridRange, String> {
    let r = GridRange::parse(text).map_err(|e| e.to_string())?;
    if r.n < 2 {
        return Err("grid sizes must be at least 2".into());
    }
    Ok(r)
}

/// Exactly one surface source must be given.
#[derive(Args, Debug)]
struct SpecArgs {
    /// Builtin id: ex1, ex2, ex3, ex4, hyperboloid, timelike-plane
    #[arg(long)]
    builtin: Option<String>,
    /// Component expressions "x0,x1,x2" in u and v
    #[arg(long, allow_hyphen_values = true)]
    surface: Option<String>,
    /// Base-curve direction angle theta1(u) of a null ruled surface
    #[arg(long, allow_hyphen_values = true)]
    theta1: Option<String>,
    /// Ruling direction angle theta2(u)
    #[arg(long, allow_hyphen_values = true)]
    theta2: Option<String>,
    /// Flat-cylinder profile f(u)
    #[arg(long = "f", allow_hyphen_values = true)]
    profile: Option<String>,
    /// Mean curvature H(u) of a nonzero-mean spec
    #[arg(long = "H", allow_hyphen_values = true)]
    mean: Option<String>,
    /// Free chart function k(u) of a nonzero-mean spec
    #[arg(long = "k", allow_hyphen_values = true)]
    gauge: Option<String>,
}

impl SpecArgs {
    fn build(&self, u_hint: Option<GridRange>) -> Result<SurfaceSpec> {
        let sources = [
            self.builtin.is_some(),
            self.surface.is_some(),
            self.theta1.is_some() || self.theta2.is_some(),
            self.profile.is_some(),
            self.mean.is_some() || self.gauge.is_some(),
        ];
        if sources.iter().filter(|&&s| s).count() != 1 {
            return Err(Error::InvalidInput(
                "give exactly one of --builtin, --surface, --theta1/--theta2, --f, or --H/--k"
                    .into(),
            ));
        }
        if let Some(b) = &self.builtin {
            return Ok(SurfaceSpec::Builtin(b.parse::<BuiltinSurface>()?));
        }
        if let Some(s) = &self.surface {
            return SurfaceSpec::parse_triple(s);
        }
        if self.theta1.is_some() || self.theta2.is_some() {
            let (Some(t1), Some(t2)) = (&self.theta1, &self.theta2) else {
                return Err(Error::InvalidInput(
                    "--theta1 and --theta2 must be given together".into(),
                ));
            };
            let spec = ThetaSpec::parse(t1, t2)?;
            let (lo, hi) = match u_hint {
                Some(r) => (r.lo, r.hi),
                None => crate::generators::DEFAULT_INTERVAL,
            };
            return ruled_null_surface_on(&spec, lo, hi, MVec3::ZERO);
        }
        if let Some(f) = &self.profile {
            return case1_cylinder(parse_expr(f)?, NullFrame::standard(), MVec3::ZERO);
        }
        let (Some(h), Some(k)) = (&self.mean, &self.gauge) else {
            return Err(Error::InvalidInput(
                "--H and --k must be given together".into(),
            ));
        };
        Ok(SurfaceSpec::Case2 {
            mean: parse_expr(h)?,
            gauge: parse_expr(k)?,
        })
    }
}

fn reject_case2(spec: &SurfaceSpec) -> Result<()> {
    if matches!(spec, SurfaceSpec::Case2 { .. }) {
        return Err(Error::UnsupportedSpec(
            "a --H/--k spec has no pointwise chart; use `reconstruct case2`",
        ));
    }
    Ok(())
}

/// Run the CLI on the given argument list and return the process exit code.
/// Never panics or propagates errors past this boundary.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    init_thread_pool();
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn init_thread_pool() {
    if let Ok(val) = std::env::var(THREADS_ENV) {
        if let Ok(n) = val.parse::<usize>() {
            if n >= 1 {
                // a failure here just means a pool already exists
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Classify {
            spec,
            grid,
            tol,
            json,
            out,
        } => {
            let s = spec.build(Some(grid.u))?;
            reject_case2(&s)?;
            let report = classify_surface(&s, grid.u, grid.v, tol);
            let text = if json {
                format!("{}\n", report_json(&report))
            } else {
                let mut t = format!("verdict: {}\n", report.verdict);
                t.push_str(&format!(
                    "counts: umbilic {}, quasi-umbilic {}, real-diagonalizable {}, complex-diagonalizable {}, not-timelike {}, failed {}\n",
                    report.counts.umbilic,
                    report.counts.quasi_umbilic,
                    report.counts.real_diagonalizable,
                    report.counts.complex_diagonalizable,
                    report.counts.not_timelike,
                    report.counts.failed,
                ));
                if let (Some(k), Some(h), Some(d)) = (
                    report.gauss_curvature,
                    report.mean_curvature,
                    report.discriminant,
                ) {
                    t.push_str(&format!("K in [{:.6e}, {:.6e}]\n", k.min, k.max));
                    t.push_str(&format!("H in [{:.6e}, {:.6e}]\n", h.min, h.max));
                    t.push_str(&format!("H^2-K in [{:.6e}, {:.6e}]\n", d.min, d.max));
                }
                t.push_str(&format!("umbilic locus samples: {}\n", report.umbilic_locus.len()));
                t
            };
            write_output(out.as_deref(), &text)
        }
        Command::Curvature {
            spec,
            grid,
            tol,
            json,
            out,
        } => {
            let s = spec.build(Some(grid.u))?;
            reject_case2(&s)?;
            let text = if json {
                let report = classify_surface(&s, grid.u, grid.v, tol);
                let summary = serde_json::json!({
                    "gauss_curvature": report.gauss_curvature,
                    "mean_curvature": report.mean_curvature,
                    "discriminant": report.discriminant,
                });
                format!("{}\n", serde_json::to_string_pretty(&summary).expect("serializable"))
            } else {
                mesh_csv(&s, grid.u, grid.v, tol)?
            };
            write_output(out.as_deref(), &text)
        }
        Command::UmbilicLocus {
            spec,
            grid,
            tol,
            json,
            out,
        } => {
            let s = spec.build(Some(grid.u))?;
            reject_case2(&s)?;
            let samples = umbilic_locus(&s, grid.u, grid.v, tol)?;
            let text = if json {
                format!(
                    "{}\n",
                    serde_json::to_string_pretty(&samples).expect("serializable")
                )
            } else {
                let mut t = String::from("u,v\n");
                for (u, v) in &samples {
                    t.push_str(&format!(
                        "{},{}\n",
                        crate::export::fmt_f64(*u),
                        crate::export::fmt_f64(*v)
                    ));
                }
                t
            };
            write_output(out.as_deref(), &text)
        }
        Command::Mesh {
            spec,
            grid,
            format,
            tol,
            out,
        } => {
            let s = spec.build(Some(grid.u))?;
            reject_case2(&s)?;
            let text = match format.parse::<MeshFormat>()? {
                MeshFormat::Obj => mesh_obj(&s, grid.u, grid.v)?,
                MeshFormat::Csv => mesh_csv(&s, grid.u, grid.v, tol)?,
            };
            write_output(out.as_deref(), &text)
        }
        Command::Reconstruct { family } => match family {
            ReconstructCmd::Case1 {
                profile,
                grid,
                format,
                tol,
                out,
            } => {
                let spec = case1_cylinder(parse_expr(&profile)?, NullFrame::standard(), MVec3::ZERO)?;
                let text = match format.parse::<MeshFormat>()? {
                    MeshFormat::Obj => mesh_obj(&spec, grid.u, grid.v)?,
                    MeshFormat::Csv => mesh_csv(&spec, grid.u, grid.v, tol)?,
                };
                write_output(out.as_deref(), &text)
            }
            ReconstructCmd::Case2 {
                mean,
                gauge,
                grid,
                step,
                format,
                tol,
                out,
            } => {
                let init = FrameState::standard_at(MVec3::ZERO);
                let surface = reconstruct_case2(
                    &parse_expr(&mean)?,
                    &parse_expr(&gauge)?,
                    &init,
                    (grid.u.lo, grid.u.hi, grid.u.n),
                    (grid.v.lo, grid.v.hi, grid.v.n),
                    step,
                )?;
                let text = match format.parse::<MeshFormat>()? {
                    MeshFormat::Obj => grid_surface_obj(&surface)?,
                    MeshFormat::Csv => grid_surface_csv(&surface, tol)?,
                };
                write_output(out.as_deref(), &text)
            }
        },
        Command::Verify { example } => {
            let checks = verify::run(&example)?;
            let mut failed = 0usize;
            for c in &checks {
                let tag = if c.pass { "PASS" } else { "FAIL" };
                println!("[{tag}] {}: {}", c.name, c.detail);
                if !c.pass {
                    failed += 1;
                }
            }
            if failed > 0 {
                return Err(Error::InvalidInput(format!(
                    "{failed} verification check(s) failed"
                )));
            }
            Ok(())
        }
    }
}
