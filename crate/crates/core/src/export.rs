//! Mesh and report exports: Wavefront OBJ, CSV tables, and JSON reports.
//!
//! OBJ vertices are written `v x1 x2 x0`, putting the timelike coordinate
//! on the third (vertical) axis. CSV numbers carry 17 significant digits.

use crate::error::{Error, Result};
use crate::flow::GridSurface;
use crate::loci::{GlobalReport, GridRange};
use crate::surface::{point_report, surface_point, SurfaceSpec};
use std::fmt::Write as _;

/// Mesh output formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshFormat {
    Obj,
    Csv,
}

impl std::str::FromStr for MeshFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<MeshFormat> {
        match s.to_ascii_lowercase().as_str() {
            "obj" => Ok(MeshFormat::Obj),
            "csv" => Ok(MeshFormat::Csv),
            other => Err(Error::InvalidInput(format!(
                "unknown mesh format `{other}` (expected obj or csv)"
            ))),
        }
    }
}

/// 17 significant digits, C locale.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Sample a spec on a grid; nodes where evaluation fails are None.
fn sample_grid(spec: &SurfaceSpec, u_range: GridRange, v_range: GridRange) -> Vec<Option<crate::mink::MVec3>> {
    let us = u_range.values();
    let vs = v_range.values();
    let mut points = Vec::with_capacity(us.len() * vs.len());
    for &u in &us {
        for &v in &vs {
            points.push(surface_point(spec, u, v).ok());
        }
    }
    points
}

/// OBJ mesh of a spec over a grid: row-major vertices, each quad split into
/// two triangles. Cells touching a failed node are skipped.
pub fn mesh_obj(spec: &SurfaceSpec, u_range: GridRange, v_range: GridRange) -> Result<String> {
    let points = sample_grid(spec, u_range, v_range);
    grid_to_obj(&points, u_range.n, v_range.n)
}

/// OBJ mesh of an already-sampled grid surface.
pub fn grid_surface_obj(grid: &GridSurface) -> Result<String> {
    let points: Vec<Option<crate::mink::MVec3>> = grid.points.iter().map(|&p| Some(p)).collect();
    grid_to_obj(&points, grid.nu(), grid.nv())
}

fn grid_to_obj(points: &[Option<crate::mink::MVec3>], nu: usize, nv: usize) -> Result<String> {
    let mut out = String::new();
    out.push_str("# quasumb mesh; vertical axis is the timelike coordinate x0\n");
    for p in points {
        match p {
            Some(p) => {
                let _ = writeln!(out, "v {} {} {}", fmt_f64(p.x1), fmt_f64(p.x2), fmt_f64(p.x0));
            }
            // keep indexing dense; degenerate placeholder vertex
            None => out.push_str("v 0 0 0\n"),
        }
    }
    for iu in 0..nu.saturating_sub(1) {
        for iv in 0..nv.saturating_sub(1) {
            let a = iu * nv + iv;
            let b = (iu + 1) * nv + iv;
            let c = (iu + 1) * nv + iv + 1;
            let d = iu * nv + iv + 1;
            if [a, b, c, d].iter().any(|&i| points[i].is_none()) {
                continue;
            }
            let _ = writeln!(out, "f {} {} {}", a + 1, b + 1, c + 1);
            let _ = writeln!(out, "f {} {} {}", a + 1, c + 1, d + 1);
        }
    }
    Ok(out)
}

const CSV_HEADER: &str = "u,v,x0,x1,x2,K,H,disc,class";

/// CSV table of a spec over a grid: positions, curvatures, and the point
/// class, one row per node in row-major order. Failed nodes keep their
/// coordinates and flag the failure in the class column.
pub fn mesh_csv(spec: &SurfaceSpec, u_range: GridRange, v_range: GridRange, tol: f64) -> Result<String> {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for &u in &u_range.values() {
        for &v in &v_range.values() {
            let pos = surface_point(spec, u, v).ok();
            let rep = point_report(spec, u, v, tol);
            write_csv_row(&mut out, u, v, pos, &rep);
        }
    }
    Ok(out)
}

/// CSV table of a reconstructed grid surface; curvature data comes from
/// grid finite differences, so boundary nodes carry empty numeric fields.
pub fn grid_surface_csv(grid: &GridSurface, tol: f64) -> Result<String> {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for iu in 0..grid.nu() {
        for iv in 0..grid.nv() {
            let (u, v) = (grid.us[iu], grid.vs[iv]);
            let pos = Some(grid.at(iu, iv));
            let rep = match grid.fd_jet(iu, iv) {
                Some(j) => crate::surface::shape_of_jet(&j).map(|s| crate::surface::classify_point(&s, tol)),
                None => Err(Error::NotRegular { u, v }),
            };
            match grid.fd_jet(iu, iv) {
                Some(_) => write_csv_row(&mut out, u, v, pos, &rep),
                None => {
                    // boundary node: position only
                    let p = grid.at(iu, iv);
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{},,,,boundary",
                        fmt_f64(u),
                        fmt_f64(v),
                        fmt_f64(p.x0),
                        fmt_f64(p.x1),
                        fmt_f64(p.x2)
                    );
                }
            }
        }
    }
    Ok(out)
}

fn write_csv_row(
    out: &mut String,
    u: f64,
    v: f64,
    pos: Option<crate::mink::MVec3>,
    rep: &Result<crate::surface::PointReport>,
) {
    let (x0, x1, x2) = match pos {
        Some(p) => (fmt_f64(p.x0), fmt_f64(p.x1), fmt_f64(p.x2)),
        None => (String::new(), String::new(), String::new()),
    };
    match rep {
        Ok(r) => {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                fmt_f64(u),
                fmt_f64(v),
                x0,
                x1,
                x2,
                fmt_f64(r.k),
                fmt_f64(r.h),
                fmt_f64(r.disc),
                r.class
            );
        }
        Err(e) => {
            let label = match e {
                Error::NotTimelike(_) => "not_timelike",
                Error::NotRegular { .. } => "not_regular",
                _ => "error",
            };
            let _ = writeln!(
                out,
                "{},{},{},{},{},,,,{label}",
                fmt_f64(u),
                fmt_f64(v),
                x0,
                x1,
                x2
            );
        }
    }
}

/// Stable-key JSON for a classification report.
pub fn report_json(r: &GlobalReport) -> String {
    serde_json::to_string_pretty(r).expect("report serialization cannot fail")
}

/// Write text to a path, or to stdout when the path is None.
pub fn write_output(path: Option<&std::path::Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => {
            std::fs::write(p, text)?;
            Ok(())
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Dense OBJ triangle count for an nu x nv grid with no failed cells.
pub fn expected_triangles(nu: usize, nv: usize) -> usize {
    2 * nu.saturating_sub(1) * nv.saturating_sub(1)
}
