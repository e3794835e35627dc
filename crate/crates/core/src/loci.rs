//! Global analysis over parameter grids: umbilic-curve tracing, null-ruling
//! detection, base-curve nondegeneracy, and whole-surface verdicts.

use crate::error::{Error, Result};
use crate::generators::CurveSample;
use crate::surface::{
    point_report, shape_at, surface_jet, PointClass, SurfaceSpec,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// An evenly sampled closed interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridRange {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl GridRange {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<GridRange> {
        if !lo.is_finite() || !hi.is_finite() || lo > hi {
            return Err(Error::InvalidInput(format!(
                "range bounds must be finite and ordered, got {lo}:{hi}"
            )));
        }
        if n == 0 {
            return Err(Error::InvalidInput("grid size must be at least 1".into()));
        }
        Ok(GridRange { lo, hi, n })
    }

    /// Parse the `lo:hi:n` syntax.
    pub fn parse(text: &str) -> Result<GridRange> {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::InvalidInput(format!(
                "expected lo:hi:n, got `{text}`"
            )));
        }
        let lo: f64 = parts[0]
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad range bound `{}`", parts[0])))?;
        let hi: f64 = parts[1]
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad range bound `{}`", parts[1])))?;
        let n: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad sample count `{}`", parts[2])))?;
        GridRange::new(lo, hi, n)
    }

    pub fn values(&self) -> Vec<f64> {
        crate::flow::linspace(self.lo, self.hi, self.n)
    }
}

impl std::fmt::Display for GridRange {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}:{}", self.lo, self.hi, self.n)
    }
}

/// Whole-surface verdicts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    TotallyQuasiUmbilic,
    QuasiUmbilicWithUmbilicCurve,
    TotallyUmbilic,
    Mixed,
    NotTimelike,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::TotallyQuasiUmbilic => "totally_quasi_umbilic",
            Verdict::QuasiUmbilicWithUmbilicCurve => "quasi_umbilic_with_umbilic_curve",
            Verdict::TotallyUmbilic => "totally_umbilic",
            Verdict::Mixed => "mixed",
            Verdict::NotTimelike => "not_timelike",
        };
        f.write_str(s)
    }
}

/// Per-class node counts over a grid.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub umbilic: usize,
    pub quasi_umbilic: usize,
    pub real_diagonalizable: usize,
    pub complex_diagonalizable: usize,
    pub not_timelike: usize,
    pub failed: usize,
}

/// Minimum and maximum of a sampled quantity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extrema {
    pub min: f64,
    pub max: f64,
}

/// Grid classification report.
#[derive(Debug, Clone, Serialize)]
pub struct GlobalReport {
    pub verdict: Verdict,
    pub counts: ClassCounts,
    pub gauss_curvature: Option<Extrema>,
    pub mean_curvature: Option<Extrema>,
    pub discriminant: Option<Extrema>,
    /// Refined umbilic-curve samples (bisection roots), plus any grid nodes
    /// that classified umbilic outright.
    pub umbilic_locus: Vec<(f64, f64)>,
}

/// Fraction of umbilic nodes below which a locus counts as a thin curve
/// rather than a mixed region.
const THIN_LOCUS_FRACTION: f64 = 0.05;

/// Width at which bisection brackets stop shrinking.
const LOCUS_BRACKET_TOL: f64 = 1e-10;

/// Subintervals scanned for sign changes per u sample.
const LOCUS_SCAN_CELLS: usize = 64;

/// Locate umbilic points: for each u sample, bracket sign changes of the
/// dominant off-diagonal entry of S - H*I along v and bisect each bracket
/// down to `1e-10`. Points that do not classify umbilic afterwards are
/// dropped, as are u samples with no bracket. Only the bounds of `v_range`
/// matter; the scan always splits it into 64 subintervals.
pub fn umbilic_locus(
    spec: &SurfaceSpec,
    u_range: GridRange,
    v_range: GridRange,
    tol: f64,
) -> Result<Vec<(f64, f64)>> {
    let us = u_range.values();
    let roots: Vec<Vec<(f64, f64)>> = us
        .par_iter()
        .map(|&u| scan_u_line(spec, u, v_range, tol))
        .collect::<Result<_>>()?;
    Ok(roots.into_iter().flatten().collect())
}

/// Off-diagonal entries of S - H*I; these carry the sign of the nilpotent
/// part along the ruled families (its diagonal vanishes there).
fn nilpotent_entries(spec: &SurfaceSpec, u: f64, v: f64) -> Result<(f64, f64)> {
    let s = shape_at(spec, u, v)?;
    Ok((s.s21, s.s12))
}

fn scan_u_line(
    spec: &SurfaceSpec,
    u: f64,
    v_range: GridRange,
    tol: f64,
) -> Result<Vec<(f64, f64)>> {
    let vs = crate::flow::linspace(v_range.lo, v_range.hi, LOCUS_SCAN_CELLS + 1);
    let mut lower = Vec::with_capacity(vs.len());
    let mut upper = Vec::with_capacity(vs.len());
    for &v in &vs {
        match nilpotent_entries(spec, u, v) {
            Ok((a, b)) => {
                lower.push(Some(a));
                upper.push(Some(b));
            }
            Err(Error::NotTimelike(d)) => return Err(Error::NotTimelike(d)),
            Err(_) => {
                lower.push(None);
                upper.push(None);
            }
        }
    }
    // dominant off-diagonal entry over this scan line
    let amp = |xs: &[Option<f64>]| {
        xs.iter()
            .flatten()
            .fold(0.0_f64, |m, x| m.max(x.abs()))
    };
    let use_lower = amp(&lower) >= amp(&upper);
    let signs = if use_lower { &lower } else { &upper };
    let eval = |v: f64| -> Result<f64> {
        let (a, b) = nilpotent_entries(spec, u, v)?;
        Ok(if use_lower { a } else { b })
    };
    let mut found = Vec::new();
    for i in 0..vs.len() - 1 {
        let (Some(fa), Some(fb)) = (signs[i], signs[i + 1]) else {
            continue;
        };
        if fa == 0.0 {
            found.push(vs[i]);
            continue;
        }
        if fa.signum() * fb.signum() < 0.0 {
            if let Ok(root) = bisect(&eval, vs[i], vs[i + 1], fa) {
                found.push(root);
            }
        }
    }
    let mut out = Vec::new();
    for v in found {
        if let Ok(report) = point_report(spec, u, v, tol) {
            if report.class == PointClass::Umbilic {
                out.push((u, v));
            }
        }
    }
    Ok(out)
}

fn bisect(f: &dyn Fn(f64) -> Result<f64>, mut a: f64, mut b: f64, mut fa: f64) -> Result<f64> {
    for _ in 0..200 {
        if (b - a).abs() <= LOCUS_BRACKET_TOL {
            break;
        }
        let mid = 0.5 * (a + b);
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fa.signum() * fm.signum() < 0.0 {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
    }
    Ok(0.5 * (a + b))
}

/// Null-ruling report over a grid.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RulingReport {
    pub is_ruled_null: bool,
    /// Worst `|<xv,xv>| / |xv|_E^2` over the grid.
    pub max_null_defect: f64,
    /// Worst Euclidean deviation of xvv from the line of xv, relative to
    /// `|xv|_E`.
    pub max_straightness_defect: f64,
}

/// Relative defect threshold for the ruling checks.
const RULING_TOL: f64 = 1e-7;

/// Check that the v-coordinate curves are straight null lines:
/// `<xv, xv> = 0` and `xvv` parallel to `xv` at every grid node.
pub fn detect_null_rulings(
    spec: &SurfaceSpec,
    u_range: GridRange,
    v_range: GridRange,
) -> Result<RulingReport> {
    let us = u_range.values();
    let vs = v_range.values();
    let mut max_null = 0.0_f64;
    let mut max_straight = 0.0_f64;
    for &u in &us {
        for &v in &vs {
            let j = surface_jet(spec, u, v)?;
            let nv2 = j.xv.euclid_norm_sq();
            let null_defect = crate::mink::minkowski_inner(j.xv, j.xv).abs() / nv2;
            let proj = j.xv
                * ((j.xvv.x0 * j.xv.x0 + j.xvv.x1 * j.xv.x1 + j.xvv.x2 * j.xv.x2) / nv2);
            let straightness = (j.xvv - proj).euclid_norm() / nv2.sqrt();
            max_null = max_null.max(null_defect);
            max_straight = max_straight.max(straightness);
        }
    }
    Ok(RulingReport {
        is_ruled_null: max_null <= RULING_TOL && max_straight <= RULING_TOL,
        max_null_defect: max_null,
        max_straightness_defect: max_straight,
    })
}

/// Nondegeneracy report for a base curve.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct NondegeneracyReport {
    pub pass: bool,
    /// Minimum of `|a' x a''|_E / (|a'|_E |a''|_E)` over the samples.
    pub min_independence: f64,
}

/// Measure threshold below which the curve counts as degenerate.
const NONDEGEN_TOL: f64 = 1e-6;

/// Sample the linear independence of the first two derivatives of a curve.
pub fn nondegeneracy_check(
    alpha: impl Fn(f64) -> Result<CurveSample>,
    lo: f64,
    hi: f64,
    n: usize,
) -> Result<NondegeneracyReport> {
    let mut min_measure = f64::INFINITY;
    for u in crate::flow::linspace(lo, hi, n.max(2)) {
        let c = alpha(u)?;
        let n1 = c.d1.euclid_norm();
        let n2 = c.d2.euclid_norm();
        let measure = if n1 == 0.0 || n2 == 0.0 {
            0.0
        } else {
            c.d1.euclid_cross(c.d2).euclid_norm() / (n1 * n2)
        };
        min_measure = min_measure.min(measure);
    }
    Ok(NondegeneracyReport {
        pass: min_measure >= NONDEGEN_TOL,
        min_independence: min_measure,
    })
}

/// Classify every grid node and produce a verdict.
///
/// Per-node failures fold into the counts rather than aborting. When all
/// classified nodes are quasi-umbilic or umbilic, a locus scan refines the
/// verdict: a grid almost never lands exactly on the measure-zero umbilic
/// curve, so the bisection search decides between a totally quasi-umbilic
/// surface and one carrying an umbilic curve.
pub fn classify_surface(
    spec: &SurfaceSpec,
    u_range: GridRange,
    v_range: GridRange,
    tol: f64,
) -> GlobalReport {
    let us = u_range.values();
    let vs = v_range.values();
    let nodes: Vec<(f64, f64)> = us
        .iter()
        .flat_map(|&u| vs.iter().map(move |&v| (u, v)))
        .collect();
    let reports: Vec<(f64, f64, Result<crate::surface::PointReport>)> = nodes
        .par_iter()
        .map(|&(u, v)| (u, v, point_report(spec, u, v, tol)))
        .collect();

    let mut counts = ClassCounts::default();
    let mut kx: Option<Extrema> = None;
    let mut hx: Option<Extrema> = None;
    let mut dx: Option<Extrema> = None;
    let mut umbilic_nodes = Vec::new();
    let fold = |slot: &mut Option<Extrema>, x: f64| {
        *slot = Some(match slot {
            None => Extrema { min: x, max: x },
            Some(e) => Extrema {
                min: e.min.min(x),
                max: e.max.max(x),
            },
        });
    };
    for (u, v, r) in &reports {
        match r {
            Ok(rep) => {
                match rep.class {
                    PointClass::Umbilic => {
                        counts.umbilic += 1;
                        umbilic_nodes.push((*u, *v));
                    }
                    PointClass::QuasiUmbilic => counts.quasi_umbilic += 1,
                    PointClass::RealDiagonalizable => counts.real_diagonalizable += 1,
                    PointClass::ComplexDiagonalizable => counts.complex_diagonalizable += 1,
                }
                fold(&mut kx, rep.k);
                fold(&mut hx, rep.h);
                fold(&mut dx, rep.disc);
            }
            Err(Error::NotTimelike(_)) => counts.not_timelike += 1,
            Err(_) => counts.failed += 1,
        }
    }

    let classified = counts.umbilic
        + counts.quasi_umbilic
        + counts.real_diagonalizable
        + counts.complex_diagonalizable;
    let mut locus = umbilic_nodes;
    let verdict = if counts.not_timelike > 0 {
        Verdict::NotTimelike
    } else if classified == 0 {
        Verdict::Mixed
    } else if counts.umbilic == classified {
        Verdict::TotallyUmbilic
    } else if counts.real_diagonalizable + counts.complex_diagonalizable > 0 {
        Verdict::Mixed
    } else if (counts.umbilic as f64) < THIN_LOCUS_FRACTION * classified as f64 {
        // all quasi-umbilic up to a thin umbilic set; refine with bisection
        if let Ok(refined) = umbilic_locus(spec, u_range, v_range, tol) {
            locus.extend(refined);
        }
        if locus.is_empty() {
            Verdict::TotallyQuasiUmbilic
        } else {
            Verdict::QuasiUmbilicWithUmbilicCurve
        }
    } else {
        Verdict::Mixed
    };

    GlobalReport {
        verdict,
        counts,
        gauss_curvature: kx,
        mean_curvature: hx,
        discriminant: dx,
        umbilic_locus: locus,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{builtin_example, ruled_null_surface_on, RuledNullData, ThetaSpec};
    use crate::mink::MVec3;
    use crate::surface::{BuiltinSurface, CLASS_TOL};

    #[test]
    fn example3_root_at_two_thirds() {
        let spec = builtin_example(BuiltinSurface::Ex3);
        let roots = umbilic_locus(
            &spec,
            GridRange::new(1.0, 1.0, 1).unwrap(),
            GridRange::new(0.0, 2.0, 2).unwrap(),
            CLASS_TOL,
        )
        .unwrap();
        assert!(!roots.is_empty());
        assert!(
            roots.iter().any(|&(_, v)| (v - 2.0 / 3.0).abs() < 1e-9),
            "roots {roots:?}"
        );
    }

    #[test]
    fn example2_locus_empty() {
        let spec = builtin_example(BuiltinSurface::Ex2);
        let roots = umbilic_locus(
            &spec,
            GridRange::new(-3.0, 3.0, 16).unwrap(),
            GridRange::new(-2.0, 2.0, 2).unwrap(),
            CLASS_TOL,
        )
        .unwrap();
        assert!(roots.is_empty(), "unexpected roots {roots:?}");
    }

    #[test]
    fn example4_locus_satisfies_displayed_equation() {
        let spec = builtin_example(BuiltinSurface::Ex4);
        let roots = umbilic_locus(
            &spec,
            GridRange::new(0.0, 2.0 * std::f64::consts::PI, 32).unwrap(),
            GridRange::new(-3.0, 3.0, 2).unwrap(),
            CLASS_TOL,
        )
        .unwrap();
        assert!(!roots.is_empty(), "expected umbilic points on the grid");
        for &(u, v) in &roots {
            let su = u.sin();
            let coeff = 8.0 * (u - su).sin() + 8.0 * su - (2.0 * u + su).sin()
                + (2.0 * u - su).sin()
                - 2.0 * su.sin();
            let offset = 8.0 * (u + 0.5 * su).cos() + 8.0 * (u - 0.5 * su).cos();
            let residual = coeff * v + offset;
            assert!(
                residual.abs() < 1e-6,
                "locus equation residual {residual} at ({u},{v})"
            );
        }
    }

    #[test]
    fn locus_points_reclassify_and_offsets_are_quasi_umbilic() {
        for b in [BuiltinSurface::Ex3, BuiltinSurface::Ex4] {
            let spec = builtin_example(b);
            let (ur, vr) = match b {
                BuiltinSurface::Ex3 => (
                    GridRange::new(0.5, 1.5, 8).unwrap(),
                    GridRange::new(0.0, 2.0, 2).unwrap(),
                ),
                _ => (
                    GridRange::new(1.5, 3.0, 8).unwrap(),
                    GridRange::new(-3.0, 3.0, 2).unwrap(),
                ),
            };
            let roots = umbilic_locus(&spec, ur, vr, CLASS_TOL).unwrap();
            assert!(!roots.is_empty(), "{b:?} produced no locus samples");
            for &(u, v) in &roots {
                let on = point_report(&spec, u, v, CLASS_TOL).unwrap();
                assert_eq!(on.class, PointClass::Umbilic, "{b:?} at ({u},{v})");
                for dv in [-0.05, 0.05] {
                    let off = point_report(&spec, u, v + dv, CLASS_TOL).unwrap();
                    assert_eq!(off.class, PointClass::QuasiUmbilic, "{b:?} at ({u},{v}) + {dv}");
                }
            }
        }
    }

    #[test]
    fn ruling_detection() {
        let grid = GridRange::new(-1.5, 1.5, 9).unwrap();
        let ex2 = builtin_example(BuiltinSurface::Ex2);
        let r = detect_null_rulings(&ex2, grid, grid).unwrap();
        assert!(r.is_ruled_null, "{r:?}");

        let plane = builtin_example(BuiltinSurface::TimelikePlane);
        let r = detect_null_rulings(&plane, grid, grid).unwrap();
        assert!(!r.is_ruled_null);
        assert!(r.max_null_defect > 0.5);

        let cyl = crate::generators::case1_cylinder(
            crate::expr::parse_expr("sin(u)/2").unwrap(),
            crate::mink::NullFrame::standard(),
            MVec3::ZERO,
        )
        .unwrap();
        let r = detect_null_rulings(&cyl, grid, grid).unwrap();
        assert!(r.is_ruled_null, "{r:?}");
    }

    #[test]
    fn nondegeneracy_of_base_curves() {
        let ex2 = RuledNullData::from_theta(&ThetaSpec::parse("u", "u+pi").unwrap(), MVec3::ZERO);
        let r = nondegeneracy_check(|u| ex2.alpha(u), -3.0, 3.0, 64).unwrap();
        assert!(r.pass, "{r:?}");

        let ex1 =
            RuledNullData::from_theta(&ThetaSpec::parse("2*atan(u)", "pi").unwrap(), MVec3::ZERO);
        let r = nondegeneracy_check(|u| ex1.alpha(u), -5.0, 5.0, 64).unwrap();
        assert!(r.pass, "{r:?}");

        let line = |u: f64| {
            Ok(CurveSample {
                p: MVec3::new(u, u, 0.0),
                d1: MVec3::new(1.0, 1.0, 0.0),
                d2: MVec3::ZERO,
            })
        };
        let r = nondegeneracy_check(line, -1.0, 1.0, 16).unwrap();
        assert!(!r.pass);
        assert_eq!(r.min_independence, 0.0);
    }

    #[test]
    fn verdicts_on_reference_surfaces() {
        let pi = std::f64::consts::PI;
        let u64g = GridRange::new(-pi, pi, 64).unwrap();
        let v64g = GridRange::new(-1.0, 1.0, 64).unwrap();
        let r = classify_surface(&builtin_example(BuiltinSurface::Ex2), u64g, v64g, CLASS_TOL);
        assert_eq!(r.verdict, Verdict::TotallyQuasiUmbilic);
        assert_eq!(r.counts.quasi_umbilic, 64 * 64);
        assert!(r.umbilic_locus.is_empty());

        let r = classify_surface(
            &builtin_example(BuiltinSurface::Ex3),
            GridRange::new(0.5, 1.5, 32).unwrap(),
            GridRange::new(0.0, 1.5, 32).unwrap(),
            CLASS_TOL,
        );
        assert_eq!(r.verdict, Verdict::QuasiUmbilicWithUmbilicCurve);
        assert!(!r.umbilic_locus.is_empty());

        let grid = GridRange::new(-2.0, 2.0, 16).unwrap();
        let r = classify_surface(&builtin_example(BuiltinSurface::Hyperboloid), grid, grid, CLASS_TOL);
        assert_eq!(r.verdict, Verdict::TotallyUmbilic);
        assert_eq!(r.counts.umbilic, 16 * 16);

        let r = classify_surface(&builtin_example(BuiltinSurface::TimelikePlane), grid, grid, CLASS_TOL);
        assert_eq!(r.verdict, Verdict::TotallyUmbilic);

        let spacelike = SurfaceSpec::parse_triple("0,u,v").unwrap();
        let r = classify_surface(&spacelike, grid, grid, CLASS_TOL);
        assert_eq!(r.verdict, Verdict::NotTimelike);
    }

    #[test]
    fn random_theta_specs_are_totally_quasi_umbilic() {
        // compact version of the random ruled-family suite
        let mut t = 0.61_f64;
        let mut next = move || {
            t = (t * 127.0 + 0.53).sin().abs();
            t
        };
        for _ in 0..5 {
            let a = 0.5 + 1.5 * next();
            let b = 0.3 * next();
            let c = 0.8 * a * next();
            let d = 0.5 + (std::f64::consts::PI - 0.5) * next();
            let e = (0.4_f64).min((d - 0.1) / 2.0) * next();
            let t1 = format!("{a}*u+{b}*u^3+{c}*sin(u)");
            let t2 = format!("{t1}+{d}+{e}*sin(u)");
            let spec_t = ThetaSpec::parse(&t1, &t2).unwrap();
            let spec = ruled_null_surface_on(&spec_t, -2.0, 2.0, MVec3::ZERO).unwrap();
            let ur = GridRange::new(-2.0, 2.0, 12).unwrap();
            let vr = GridRange::new(-1.0, 1.0, 12).unwrap();
            let report = classify_surface(&spec, ur, vr, CLASS_TOL);
            assert!(
                matches!(
                    report.verdict,
                    Verdict::TotallyQuasiUmbilic | Verdict::QuasiUmbilicWithUmbilicCurve
                ),
                "verdict {:?} for theta1 = {t1}",
                report.verdict
            );
            let rul = detect_null_rulings(&spec, ur, vr).unwrap();
            assert!(rul.is_ruled_null, "{rul:?}");
            let data = RuledNullData::from_theta(&spec_t, MVec3::ZERO);
            let nd = nondegeneracy_check(|u| data.alpha(u), -2.0, 2.0, 32).unwrap();
            assert!(nd.pass, "{nd:?}");
        }
    }
}
