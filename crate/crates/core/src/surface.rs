//! Pointwise extrinsic geometry: fundamental forms, unit normal, shape
//! operator in the coordinate basis, curvatures, and the algebraic
//! classification of a point.
//!
//! Everything here works on the 2-jet of an immersion at a single (u, v).
//! Grid sweeps and verdicts over whole surfaces live in [`crate::loci`].

use crate::error::{Error, Result};
use crate::expr::{eval_jet2, eval_scalar, finite_diff_jet2, integrate, Expr, Jet2, QUAD_TOL};
use crate::mink::{minkowski_cross, minkowski_inner, validate_null_frame, MVec3, NullFrame};
use serde::{Deserialize, Serialize};

/// Relative tolerance for the regularity check `|xu x xv| > 0`.
pub const REG_TOL: f64 = 1e-10;

/// Relative tolerance for the timelike check `E*G - F^2 < 0`.
pub const METRIC_TOL: f64 = 1e-12;

/// Default relative tolerance for the algebraic classification. The
/// discriminant is a difference of squares, so it needs more slack than
/// machine epsilon.
pub const CLASS_TOL: f64 = 1e-7;

/// Builtin example surfaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BuiltinSurface {
    /// Flat null cylinder `(u+v, 2 atan u - u - v, ln(1+u^2))`.
    Ex1,
    /// Circular null ruled surface `(u+v, sin u - v cos u, -cos u - v sin u)`.
    Ex2,
    /// Cubic-angle null ruled surface with an umbilic curve.
    Ex3,
    /// Perturbed hyperboloid ruling, embedded, with an umbilic curve.
    Ex4,
    /// The unperturbed hyperboloid `<x, x> = -1`, totally umbilic.
    Hyperboloid,
    /// The plane `(u, v, 0)`, totally umbilic with vanishing shape operator.
    TimelikePlane,
}

impl std::str::FromStr for BuiltinSurface {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "ex1" => BuiltinSurface::Ex1,
            "ex2" => BuiltinSurface::Ex2,
            "ex3" => BuiltinSurface::Ex3,
            "ex4" => BuiltinSurface::Ex4,
            "hyperboloid" => BuiltinSurface::Hyperboloid,
            "timelike-plane" | "plane" => BuiltinSurface::TimelikePlane,
            other => {
                return Err(Error::InvalidInput(format!(
                    "unknown builtin surface `{other}` (expected ex1..ex4, hyperboloid, timelike-plane)"
                )))
            }
        })
    }
}

/// A description of an immersion x(u, v).
#[derive(Debug, Clone)]
pub enum SurfaceSpec {
    /// One of the builtin examples, with closed-form jets.
    Builtin(BuiltinSurface),
    /// Componentwise expressions in u and v.
    Exprs { x0: Expr, x1: Expr, x2: Expr },
    /// Null ruled surface from two direction angles: the base curve
    /// integrates `(1, cos theta1, sin theta1)` from 0 and the ruling
    /// direction is `(1, cos theta2, sin theta2)`.
    RuledNull {
        theta1: Expr,
        theta2: Expr,
        /// Value of the base curve at u = 0.
        base: MVec3,
    },
    /// Flat cylinder over a convex curve in a lightlike plane; `profile` is
    /// the function f(u) whose exponential scales the second fundamental
    /// form, and `frame`/`origin` are the initial frame data.
    Case1 {
        profile: Expr,
        frame: NullFrame,
        origin: MVec3,
    },
    /// Nonzero-mean-curvature family given by the mean curvature H(u) and a
    /// free chart function k(u); realized by frame integration, so pointwise
    /// jets are not available (see [`crate::flow::reconstruct_case2`]).
    Case2 { mean: Expr, gauge: Expr },
}

impl SurfaceSpec {
    /// Build an expression spec, validating that components use only u and v.
    pub fn from_exprs(x0: Expr, x1: Expr, x2: Expr) -> Result<SurfaceSpec> {
        for e in [&x0, &x1, &x2] {
            e.check_bindings()?;
        }
        Ok(SurfaceSpec::Exprs { x0, x1, x2 })
    }

    /// Parse a comma-separated component triple such as `"u,v,0"`.
    /// Commas inside parentheses do not split.
    pub fn parse_triple(text: &str) -> Result<SurfaceSpec> {
        let mut parts = Vec::new();
        let mut depth = 0usize;
        let mut start = 0usize;
        for (i, c) in text.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => depth = depth.saturating_sub(1),
                ',' if depth == 0 => {
                    parts.push(&text[start..i]);
                    start = i + 1;
                }
                _ => {}
            }
        }
        parts.push(&text[start..]);
        if parts.len() != 3 {
            return Err(Error::InvalidInput(format!(
                "expected three comma-separated components, got {}",
                parts.len()
            )));
        }
        let mut exprs = parts.iter().map(|p| crate::expr::parse_expr(p.trim()));
        let x0 = exprs.next().expect("three parts")?;
        let x1 = exprs.next().expect("three parts")?;
        let x2 = exprs.next().expect("three parts")?;
        SurfaceSpec::from_exprs(x0, x1, x2)
    }
}

/// The 2-jet of an immersion at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceJet {
    pub x: MVec3,
    pub xu: MVec3,
    pub xv: MVec3,
    pub xuu: MVec3,
    pub xuv: MVec3,
    pub xvv: MVec3,
}

fn jets_to_vec(j0: Jet2, j1: Jet2, j2: Jet2) -> SurfaceJet {
    SurfaceJet {
        x: MVec3::new(j0.val, j1.val, j2.val),
        xu: MVec3::new(j0.du, j1.du, j2.du),
        xv: MVec3::new(j0.dv, j1.dv, j2.dv),
        xuu: MVec3::new(j0.duu, j1.duu, j2.duu),
        xuv: MVec3::new(j0.duv, j1.duv, j2.duv),
        xvv: MVec3::new(j0.dvv, j1.dvv, j2.dvv),
    }
}

/// Evaluate the immersion position only (no derivatives).
pub fn surface_point(spec: &SurfaceSpec, u: f64, v: f64) -> Result<MVec3> {
    match spec {
        SurfaceSpec::Builtin(_) | SurfaceSpec::RuledNull { .. } | SurfaceSpec::Case1 { .. } => {
            Ok(surface_jet_unchecked(spec, u, v)?.x)
        }
        SurfaceSpec::Exprs { x0, x1, x2 } => Ok(MVec3::new(
            eval_scalar(x0, u, v)?,
            eval_scalar(x1, u, v)?,
            eval_scalar(x2, u, v)?,
        )),
        SurfaceSpec::Case2 { .. } => Err(Error::UnsupportedSpec(
            "case-2 surfaces are produced by frame integration; use the reconstruction",
        )),
    }
}

/// Componentwise 2-jet of the immersion at (u, v), with a regularity check.
pub fn surface_jet(spec: &SurfaceSpec, u: f64, v: f64) -> Result<SurfaceJet> {
    let j = surface_jet_unchecked(spec, u, v)?;
    let cross = j.xu.euclid_cross(j.xv);
    if cross.euclid_norm() < REG_TOL * j.xu.euclid_norm() * j.xv.euclid_norm() {
        return Err(Error::NotRegular { u, v });
    }
    Ok(j)
}

fn surface_jet_unchecked(spec: &SurfaceSpec, u: f64, v: f64) -> Result<SurfaceJet> {
    match spec {
        SurfaceSpec::Builtin(b) => builtin_jet(*b, u, v),
        SurfaceSpec::Exprs { x0, x1, x2 } => Ok(jets_to_vec(
            eval_jet2(x0, u, v)?,
            eval_jet2(x1, u, v)?,
            eval_jet2(x2, u, v)?,
        )),
        SurfaceSpec::RuledNull {
            theta1,
            theta2,
            base,
        } => ruled_null_jet(theta1, theta2, *base, u, v),
        SurfaceSpec::Case1 {
            profile,
            frame,
            origin,
        } => case1_jet(profile, frame, *origin, u, v),
        SurfaceSpec::Case2 { .. } => Err(Error::UnsupportedSpec(
            "case-2 surfaces are produced by frame integration; use the reconstruction",
        )),
    }
}

fn builtin_jet(b: BuiltinSurface, u: f64, v: f64) -> Result<SurfaceJet> {
    Ok(match b {
        BuiltinSurface::Ex1 => {
            let d = 1.0 + u * u;
            SurfaceJet {
                x: MVec3::new(u + v, 2.0 * u.atan() - u - v, d.ln()),
                xu: MVec3::new(1.0, 2.0 / d - 1.0, 2.0 * u / d),
                xv: MVec3::new(1.0, -1.0, 0.0),
                xuu: MVec3::new(0.0, -4.0 * u / (d * d), 2.0 * (1.0 - u * u) / (d * d)),
                xuv: MVec3::ZERO,
                xvv: MVec3::ZERO,
            }
        }
        BuiltinSurface::Ex2 => {
            let (s, c) = u.sin_cos();
            SurfaceJet {
                x: MVec3::new(u + v, s - v * c, -c - v * s),
                xu: MVec3::new(1.0, c + v * s, s - v * c),
                xv: MVec3::new(1.0, -c, -s),
                xuu: MVec3::new(0.0, -s + v * c, c + v * s),
                xuv: MVec3::new(0.0, s, -c),
                xvv: MVec3::ZERO,
            }
        }
        BuiltinSurface::Ex3 => {
            let th = u * u * u + u;
            let dth = 3.0 * u * u + 1.0;
            let ddth = 6.0 * u;
            let (s, c) = th.sin_cos();
            let ci = integrate(|t| Ok((t * t * t + t).cos()), 0.0, u, QUAD_TOL)?;
            let si = integrate(|t| Ok((t * t * t + t).sin()), 0.0, u, QUAD_TOL)?;
            SurfaceJet {
                x: MVec3::new(u + v, ci - v * c, si - v * s),
                xu: MVec3::new(1.0, c + v * dth * s, s - v * dth * c),
                xv: MVec3::new(1.0, -c, -s),
                xuu: MVec3::new(
                    0.0,
                    -dth * s + v * (ddth * s + dth * dth * c),
                    dth * c - v * (ddth * c - dth * dth * s),
                ),
                xuv: MVec3::new(0.0, dth * s, -dth * c),
                xvv: MVec3::ZERO,
            }
        }
        BuiltinSurface::Ex4 => {
            let m = u + 0.5 * u.sin();
            let dm = 1.0 + 0.5 * u.cos();
            let ddm = -0.5 * u.sin();
            let (su, cu) = u.sin_cos();
            let (sm, cm) = m.sin_cos();
            SurfaceJet {
                x: MVec3::new(v, cu - v * sm, su + v * cm),
                xu: MVec3::new(0.0, -su - v * dm * cm, cu - v * dm * sm),
                xv: MVec3::new(1.0, -sm, cm),
                xuu: MVec3::new(
                    0.0,
                    -cu - v * (ddm * cm - dm * dm * sm),
                    -su - v * (ddm * sm + dm * dm * cm),
                ),
                xuv: MVec3::new(0.0, -dm * cm, -dm * sm),
                xvv: MVec3::ZERO,
            }
        }
        BuiltinSurface::Hyperboloid => {
            // Ruling parameter first, so the computed unit normal is +x and
            // the shape operator is exactly -identity.
            let (s, c) = v.sin_cos();
            SurfaceJet {
                x: MVec3::new(u, c - u * s, s + u * c),
                xu: MVec3::new(1.0, -s, c),
                xv: MVec3::new(0.0, -s - u * c, c - u * s),
                xuu: MVec3::ZERO,
                xuv: MVec3::new(0.0, -c, -s),
                xvv: MVec3::new(0.0, -c + u * s, -s - u * c),
            }
        }
        BuiltinSurface::TimelikePlane => SurfaceJet {
            x: MVec3::new(u, v, 0.0),
            xu: MVec3::new(1.0, 0.0, 0.0),
            xv: MVec3::new(0.0, 1.0, 0.0),
            xuu: MVec3::ZERO,
            xuv: MVec3::ZERO,
            xvv: MVec3::ZERO,
        },
    })
}

fn ruled_null_jet(theta1: &Expr, theta2: &Expr, base: MVec3, u: f64, v: f64) -> Result<SurfaceJet> {
    let t1 = eval_jet2(theta1, u, 0.0)?;
    let t2 = eval_jet2(theta2, u, 0.0)?;
    let (s1, c1) = t1.val.sin_cos();
    let (s2, c2) = t2.val.sin_cos();
    let ci = integrate(|s| Ok(eval_scalar(theta1, s, 0.0)?.cos()), 0.0, u, QUAD_TOL)?;
    let si = integrate(|s| Ok(eval_scalar(theta1, s, 0.0)?.sin()), 0.0, u, QUAD_TOL)?;
    let (d2, dd2) = (t2.du, t2.duu);
    let d1 = t1.du;
    Ok(SurfaceJet {
        x: base + MVec3::new(u + v, ci + v * c2, si + v * s2),
        xu: MVec3::new(1.0, c1 - v * d2 * s2, s1 + v * d2 * c2),
        xv: MVec3::new(1.0, c2, s2),
        xuu: MVec3::new(
            0.0,
            -d1 * s1 - v * (dd2 * s2 + d2 * d2 * c2),
            d1 * c1 + v * (dd2 * c2 - d2 * d2 * s2),
        ),
        xuv: MVec3::new(0.0, -d2 * s2, d2 * c2),
        xvv: MVec3::ZERO,
    })
}

fn case1_jet(profile: &Expr, frame: &NullFrame, origin: MVec3, u: f64, v: f64) -> Result<SurfaceJet> {
    let validity = validate_null_frame(frame, crate::mink::FRAME_TOL);
    if !validity.pass {
        return Err(Error::InvalidFrame("case-1 initial frame", validity.max_defect));
    }
    let f0 = eval_scalar(profile, 0.0, 0.0)?;
    let fu = eval_scalar(profile, u, 0.0)?;
    let e2f = |t: f64| -> Result<f64> { Ok((2.0 * eval_scalar(profile, t, 0.0)?).exp()) };
    // a(u) = int_0^u e^{2f}; b(u) = int_0^u a; c(u) = int_0^u a^2
    let a = integrate(e2f, 0.0, u, QUAD_TOL)?;
    let b = integrate(
        |sig| integrate(e2f, 0.0, sig, QUAD_TOL),
        0.0,
        u,
        QUAD_TOL,
    )?;
    let c = integrate(
        |sig| {
            let inner = integrate(e2f, 0.0, sig, QUAD_TOL)?;
            Ok(inner * inner)
        },
        0.0,
        u,
        QUAD_TOL,
    )?;
    let ef0 = f0.exp();
    let emf0 = (-f0).exp();
    let da = (2.0 * fu).exp();
    Ok(SurfaceJet {
        x: origin + frame.f1 * (u * ef0) + frame.f2 * ((v + 0.5 * c) * emf0) - frame.f3 * b,
        xu: frame.f1 * ef0 + frame.f2 * (0.5 * a * a * emf0) - frame.f3 * a,
        xv: frame.f2 * emf0,
        xuu: frame.f2 * (da * a * emf0) - frame.f3 * da,
        xuv: MVec3::ZERO,
        xvv: MVec3::ZERO,
    })
}

/// Finite-difference 2-jet of the immersion; independent of the exact-jet
/// path, for cross-checking.
pub fn surface_jet_fd(spec: &SurfaceSpec, u: f64, v: f64, h: f64) -> Result<SurfaceJet> {
    let j0 = finite_diff_jet2(|a, b| surface_point(spec, a, b).map(|p| p.x0), u, v, h)?;
    let j1 = finite_diff_jet2(|a, b| surface_point(spec, a, b).map(|p| p.x1), u, v, h)?;
    let j2 = finite_diff_jet2(|a, b| surface_point(spec, a, b).map(|p| p.x2), u, v, h)?;
    Ok(jets_to_vec(j0, j1, j2))
}

/// Coefficients of the first fundamental form in the (u, v) chart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FirstFundamental {
    pub e: f64,
    pub f: f64,
    pub g: f64,
}

impl FirstFundamental {
    pub fn det(&self) -> f64 {
        self.e * self.g - self.f * self.f
    }
}

/// Coefficients of the second fundamental form in the (u, v) chart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecondFundamental {
    pub l: f64,
    pub m: f64,
    pub n: f64,
}

/// E = <xu,xu>, F = <xu,xv>, G = <xv,xv>; errors if the induced metric is
/// not indefinite (E*G - F^2 must be negative at a timelike point).
pub fn first_fundamental(j: &SurfaceJet) -> Result<FirstFundamental> {
    let ff = FirstFundamental {
        e: minkowski_inner(j.xu, j.xu),
        f: minkowski_inner(j.xu, j.xv),
        g: minkowski_inner(j.xv, j.xv),
    };
    let scale = (j.xu.euclid_norm_sq() * j.xv.euclid_norm_sq()).max(1.0);
    if ff.det() >= -METRIC_TOL * scale {
        return Err(Error::NotTimelike(ff.det()));
    }
    Ok(ff)
}

/// Unit spacelike normal `xu x xv / sqrt(-<xu x xv, xu x xv>)`. The sign is
/// fixed by the parameter order: swapping u and v flips the normal and the
/// sign of H.
pub fn unit_normal(j: &SurfaceJet) -> Result<MVec3> {
    let w = minkowski_cross(j.xu, j.xv);
    let q = minkowski_inner(w, w);
    if q >= -METRIC_TOL * w.euclid_norm_sq().max(1.0) {
        return Err(Error::NotTimelike(q));
    }
    Ok(w / (-q).sqrt())
}

/// L = <n,xuu>, M = <n,xuv>, N = <n,xvv> for a unit normal n.
pub fn second_fundamental(j: &SurfaceJet, n: MVec3) -> SecondFundamental {
    SecondFundamental {
        l: minkowski_inner(n, j.xuu),
        m: minkowski_inner(n, j.xuv),
        n: minkowski_inner(n, j.xvv),
    }
}

/// Matrix of the shape operator with respect to the coordinate basis
/// (xu, xv). Columns are images of the basis vectors:
/// `S(xu) = s11*xu + s21*xv`, `S(xv) = s12*xu + s22*xv`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShapeMatrix {
    pub s11: f64,
    pub s12: f64,
    pub s21: f64,
    pub s22: f64,
}

impl ShapeMatrix {
    pub fn det(&self) -> f64 {
        self.s11 * self.s22 - self.s12 * self.s21
    }

    pub fn trace(&self) -> f64 {
        self.s11 + self.s22
    }

    pub fn max_norm(&self) -> f64 {
        self.s11
            .abs()
            .max(self.s12.abs())
            .max(self.s21.abs())
            .max(self.s22.abs())
    }
}

/// S = [[E,F],[F,G]]^-1 [[L,M],[M,N]].
pub fn shape_operator(i: &FirstFundamental, ii: &SecondFundamental) -> Result<ShapeMatrix> {
    let det = i.det();
    let scale = (i.e.abs().max(i.f.abs()).max(i.g.abs())).powi(2).max(1.0);
    if det.abs() <= f64::EPSILON * scale {
        return Err(Error::SingularMetric(det));
    }
    Ok(ShapeMatrix {
        s11: (i.g * ii.l - i.f * ii.m) / det,
        s12: (i.g * ii.m - i.f * ii.n) / det,
        s21: (i.e * ii.m - i.f * ii.l) / det,
        s22: (i.e * ii.n - i.f * ii.m) / det,
    })
}

/// Gauss curvature `K = det S` and mean curvature `H = tr S / 2`.
pub fn curvatures(s: &ShapeMatrix) -> (f64, f64) {
    (s.det(), 0.5 * s.trace())
}

/// Algebraic type of the shape operator at a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointClass {
    Umbilic,
    QuasiUmbilic,
    RealDiagonalizable,
    ComplexDiagonalizable,
}

impl std::fmt::Display for PointClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PointClass::Umbilic => write!(f, "umbilic"),
            PointClass::QuasiUmbilic => write!(f, "quasi_umbilic"),
            PointClass::RealDiagonalizable => write!(f, "real_diagonalizable"),
            PointClass::ComplexDiagonalizable => write!(f, "complex_diagonalizable"),
        }
    }
}

/// Curvatures and classification at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointReport {
    pub k: f64,
    pub h: f64,
    /// Discriminant H^2 - K.
    pub disc: f64,
    pub class: PointClass,
    /// Repeated eigenvalue, present when the discriminant vanishes.
    pub lambda: Option<f64>,
}

/// Classify by the sign of the discriminant H^2 - K at relative tolerance
/// `tol`, splitting the degenerate case by the max-norm of the nilpotent
/// part S - H*I.
pub fn classify_point(s: &ShapeMatrix, tol: f64) -> PointReport {
    let (k, h) = curvatures(s);
    let disc = h * h - k;
    let smax = s.max_norm();
    let scale = (smax * smax).max(1.0);
    if disc > tol * scale {
        return PointReport {
            k,
            h,
            disc,
            class: PointClass::RealDiagonalizable,
            lambda: None,
        };
    }
    if disc < -tol * scale {
        return PointReport {
            k,
            h,
            disc,
            class: PointClass::ComplexDiagonalizable,
            lambda: None,
        };
    }
    let nil = (s.s11 - h)
        .abs()
        .max(s.s12.abs())
        .max(s.s21.abs())
        .max((s.s22 - h).abs());
    let class = if nil <= tol * smax.max(1.0) {
        PointClass::Umbilic
    } else {
        PointClass::QuasiUmbilic
    };
    PointReport {
        k,
        h,
        disc,
        class,
        lambda: Some(h),
    }
}

/// Full pipeline at one point: jet, forms, shape operator, classification.
pub fn point_report(spec: &SurfaceSpec, u: f64, v: f64, tol: f64) -> Result<PointReport> {
    let s = shape_at(spec, u, v)?;
    Ok(classify_point(&s, tol))
}

/// Shape matrix at one point of a spec.
pub fn shape_at(spec: &SurfaceSpec, u: f64, v: f64) -> Result<ShapeMatrix> {
    let j = surface_jet(spec, u, v)?;
    shape_of_jet(&j)
}

/// Shape matrix from an already-computed jet.
pub fn shape_of_jet(j: &SurfaceJet) -> Result<ShapeMatrix> {
    let i = first_fundamental(j)?;
    let n = unit_normal(j)?;
    let ii = second_fundamental(j, n);
    shape_operator(&i, &ii)
}

/// Direction (in the tangent basis) of the repeated eigenvector at a
/// quasi-umbilic point: a kernel vector of the nilpotent part. Returns the
/// ambient tangent vector `w1*xu + w2*xv`, or None when S - H*I is zero
/// (umbilic, where every direction is an eigenvector).
pub fn repeated_eigen_direction(s: &ShapeMatrix, j: &SurfaceJet) -> Option<MVec3> {
    let h = 0.5 * s.trace();
    let n11 = s.s11 - h;
    let n12 = s.s12;
    let n21 = s.s21;
    let n22 = s.s22 - h;
    // kernel candidates from each row of the (nilpotent) matrix
    let c1 = (n12, -n11);
    let c2 = (n22, -n21);
    let pick = if c1.0.abs().max(c1.1.abs()) >= c2.0.abs().max(c2.1.abs()) {
        c1
    } else {
        c2
    };
    if pick.0 == 0.0 && pick.1 == 0.0 {
        return None;
    }
    Some(j.xu * pick.0 + j.xv * pick.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;

    fn ex(b: BuiltinSurface) -> SurfaceSpec {
        SurfaceSpec::Builtin(b)
    }

    #[test]
    fn example2_jet_at_origin() {
        let j = surface_jet(&ex(BuiltinSurface::Ex2), 0.0, 0.0).unwrap();
        assert_eq!(j.x, MVec3::new(0.0, 0.0, -1.0));
        assert_eq!(j.xu, MVec3::new(1.0, 1.0, 0.0));
        assert_eq!(j.xv, MVec3::new(1.0, -1.0, 0.0));
        assert_eq!(j.xuu, MVec3::new(0.0, 0.0, 1.0));
        assert_eq!(j.xuv, MVec3::new(0.0, 0.0, -1.0));
        assert_eq!(j.xvv, MVec3::ZERO);
    }

    #[test]
    fn expression_plane_jet() {
        let spec = SurfaceSpec::parse_triple("u,v,0").unwrap();
        let j = surface_jet(&spec, 3.0, 5.0).unwrap();
        assert_eq!(j.x, MVec3::new(3.0, 5.0, 0.0));
        assert_eq!(j.xuu, MVec3::ZERO);
    }

    #[test]
    fn example3_jet_at_origin() {
        let j = surface_jet(&ex(BuiltinSurface::Ex3), 0.0, 0.0).unwrap();
        assert!((j.xu - MVec3::new(1.0, 1.0, 0.0)).euclid_norm() < 1e-14);
    }

    #[test]
    fn example2_first_fundamental() {
        let j = surface_jet(&ex(BuiltinSurface::Ex2), 0.0, 0.0).unwrap();
        let i = first_fundamental(&j).unwrap();
        assert!((i.e).abs() < 1e-14);
        assert!((i.f - 2.0).abs() < 1e-14);
        assert!((i.g).abs() < 1e-14);
    }

    #[test]
    fn plane_first_fundamental() {
        let j = surface_jet(&ex(BuiltinSurface::TimelikePlane), 0.3, -0.7).unwrap();
        let i = first_fundamental(&j).unwrap();
        assert_eq!((i.e, i.f, i.g), (1.0, 0.0, -1.0));
    }

    #[test]
    fn spacelike_plane_is_not_timelike() {
        let spec = SurfaceSpec::parse_triple("0,u,v").unwrap();
        let j = surface_jet(&spec, 0.1, 0.2).unwrap();
        assert!(matches!(first_fundamental(&j), Err(Error::NotTimelike(_))));
    }

    #[test]
    fn example2_unit_normal() {
        let j = surface_jet(&ex(BuiltinSurface::Ex2), 0.0, 0.0).unwrap();
        let n = unit_normal(&j).unwrap();
        assert!((n - MVec3::new(0.0, 0.0, 1.0)).euclid_norm() < 1e-14);
        // general point matches the closed-form normal
        let (u, v) = (0.9, -0.4);
        let j = surface_jet(&ex(BuiltinSurface::Ex2), u, v).unwrap();
        let n = unit_normal(&j).unwrap();
        let expect = MVec3::new(
            -v / 2.0,
            -u.sin() + v / 2.0 * u.cos(),
            u.cos() + v / 2.0 * u.sin(),
        );
        assert!((n - expect).euclid_norm() < 1e-12);
    }

    #[test]
    fn example3_unit_normal_at_origin() {
        let j = surface_jet(&ex(BuiltinSurface::Ex3), 0.0, 0.0).unwrap();
        let n = unit_normal(&j).unwrap();
        assert!((n - MVec3::new(0.0, 0.0, 1.0)).euclid_norm() < 1e-12);
    }

    #[test]
    fn example2_second_fundamental() {
        let j = surface_jet(&ex(BuiltinSurface::Ex2), 0.0, 0.0).unwrap();
        let n = unit_normal(&j).unwrap();
        let ii = second_fundamental(&j, n);
        assert!((ii.l + 1.0).abs() < 1e-14);
        assert!((ii.m - 1.0).abs() < 1e-14);
        assert!((ii.n).abs() < 1e-14);
    }

    #[test]
    fn plane_second_fundamental_vanishes() {
        let j = surface_jet(&ex(BuiltinSurface::TimelikePlane), 1.0, 2.0).unwrap();
        let n = unit_normal(&j).unwrap();
        let ii = second_fundamental(&j, n);
        assert_eq!((ii.l, ii.m, ii.n), (0.0, 0.0, 0.0));
    }

    #[test]
    fn example2_shape_matrix() {
        let j = surface_jet(&ex(BuiltinSurface::Ex2), 0.0, 0.0).unwrap();
        let s = shape_of_jet(&j).unwrap();
        assert!((s.s11 - 0.5).abs() < 1e-14);
        assert!((s.s12).abs() < 1e-14);
        assert!((s.s21 + 0.5).abs() < 1e-14);
        assert!((s.s22 - 0.5).abs() < 1e-14);
    }

    #[test]
    fn example3_shape_matrix_formula() {
        for (u, v) in [(0.0, 0.0), (0.5, 0.25), (1.0, 2.0 / 3.0), (-1.2, 0.8)] {
            let s = shape_at(&ex(BuiltinSurface::Ex3), u, v).unwrap();
            let half = 0.5 * (3.0 * u * u + 1.0);
            assert!((s.s11 - half).abs() < 1e-11, "s11 at ({u},{v})");
            assert!((s.s12).abs() < 1e-11);
            assert!((s.s21 - (3.0 * u * v - half)).abs() < 1e-11);
            assert!((s.s22 - half).abs() < 1e-11);
        }
    }

    #[test]
    fn example_curvatures() {
        // constant K = 1/4, H = 1/2 on the circular ruled example
        for (u, v) in [(0.0, 0.0), (1.0, 0.5), (-2.0, 1.5), (3.0, -0.9)] {
            let s = shape_at(&ex(BuiltinSurface::Ex2), u, v).unwrap();
            let (k, h) = curvatures(&s);
            assert!((k - 0.25).abs() < 1e-12);
            assert!((h - 0.5).abs() < 1e-12);
        }
        let s = shape_at(&ex(BuiltinSurface::Ex3), 1.0, 0.37).unwrap();
        let (k, h) = curvatures(&s);
        assert!((k - 4.0).abs() < 1e-11);
        assert!((h - 2.0).abs() < 1e-11);
        let zero = ShapeMatrix {
            s11: 0.0,
            s12: 0.0,
            s21: 0.0,
            s22: 0.0,
        };
        assert_eq!(curvatures(&zero), (0.0, 0.0));
    }

    #[test]
    fn classification_cases() {
        let s = shape_at(&ex(BuiltinSurface::Ex2), 0.4, -0.2).unwrap();
        let r = classify_point(&s, CLASS_TOL);
        assert_eq!(r.class, PointClass::QuasiUmbilic);
        assert!((r.lambda.unwrap() - 0.5).abs() < 1e-12);

        let s = shape_at(&ex(BuiltinSurface::Ex3), 1.0, 2.0 / 3.0).unwrap();
        let r = classify_point(&s, CLASS_TOL);
        assert_eq!(r.class, PointClass::Umbilic);

        let diag = ShapeMatrix {
            s11: 2.0,
            s12: 0.0,
            s21: 0.0,
            s22: 3.0,
        };
        assert_eq!(
            classify_point(&diag, CLASS_TOL).class,
            PointClass::RealDiagonalizable
        );

        let rot = ShapeMatrix {
            s11: 0.0,
            s12: 1.0,
            s21: -1.0,
            s22: 0.0,
        };
        let r = classify_point(&rot, CLASS_TOL);
        assert_eq!(r.class, PointClass::ComplexDiagonalizable);
        assert!((r.disc + 1.0).abs() < 1e-15);
    }

    #[test]
    fn self_adjointness_on_builtins() {
        let specs = [
            ex(BuiltinSurface::Ex1),
            ex(BuiltinSurface::Ex2),
            ex(BuiltinSurface::Ex3),
            ex(BuiltinSurface::Ex4),
            ex(BuiltinSurface::Hyperboloid),
        ];
        let mut t = 0.29_f64;
        let mut next = move || {
            t = (t * 73.0 + 0.31).sin() * 2.0;
            t
        };
        for spec in &specs {
            for _ in 0..40 {
                let (u, v) = (next(), next() * 0.5);
                let Ok(j) = surface_jet(spec, u, v) else {
                    continue;
                };
                let Ok(s) = shape_of_jet(&j) else { continue };
                let su = j.xu * s.s11 + j.xv * s.s21;
                let sv = j.xu * s.s12 + j.xv * s.s22;
                let lhs = minkowski_inner(su, j.xv);
                let rhs = minkowski_inner(j.xu, sv);
                let scale = s.max_norm().max(1.0) * j.xu.euclid_norm() * j.xv.euclid_norm();
                assert!(
                    (lhs - rhs).abs() < 1e-9 * scale,
                    "self-adjointness defect {} at ({u},{v})",
                    (lhs - rhs).abs()
                );
            }
        }
    }

    #[test]
    fn discriminant_two_routes_agree() {
        let mut t = 0.41_f64;
        let mut next = move || {
            t = (t * 57.0 + 0.13).sin() * 3.0;
            t
        };
        for _ in 0..200 {
            let s = ShapeMatrix {
                s11: next(),
                s12: next(),
                s21: next(),
                s22: next(),
            };
            let (k, h) = curvatures(&s);
            let direct = h * h - k;
            let via_trace = 0.25 * s.trace() * s.trace() - s.det();
            assert!((direct - via_trace).abs() <= 1e-12 * direct.abs().max(1.0));
        }
    }

    #[test]
    fn quasi_umbilic_eigenvector_is_null() {
        let specs = [
            ex(BuiltinSurface::Ex1),
            ex(BuiltinSurface::Ex2),
            ex(BuiltinSurface::Ex3),
        ];
        let mut t = 0.77_f64;
        let mut next = move || {
            t = (t * 91.0 + 0.59).sin() * 2.5;
            t
        };
        let mut checked = 0;
        while checked < 500 {
            let spec = &specs[checked % 3];
            let (u, v) = (next(), next());
            let Ok(j) = surface_jet(spec, u, v) else {
                continue;
            };
            let Ok(s) = shape_of_jet(&j) else { continue };
            let r = classify_point(&s, CLASS_TOL);
            if r.class != PointClass::QuasiUmbilic {
                continue;
            }
            let dir = repeated_eigen_direction(&s, &j).expect("quasi-umbilic has a kernel");
            let cc = crate::mink::causal_class(dir, 1e-7).unwrap();
            assert_eq!(
                cc,
                crate::mink::CausalClass::Null,
                "eigenvector not null at ({u},{v}): <w,w> = {}",
                minkowski_inner(dir, dir)
            );
            checked += 1;
        }
    }

    #[test]
    fn normal_orthogonality_everywhere() {
        let mut t = 0.11_f64;
        let mut next = move || {
            t = (t * 67.0 + 0.43).sin() * 2.0;
            t
        };
        for b in [
            BuiltinSurface::Ex1,
            BuiltinSurface::Ex2,
            BuiltinSurface::Ex3,
            BuiltinSurface::Ex4,
            BuiltinSurface::Hyperboloid,
            BuiltinSurface::TimelikePlane,
        ] {
            for _ in 0..30 {
                let (u, v) = (next(), next() * 0.6);
                let Ok(j) = surface_jet(&ex(b), u, v) else {
                    continue;
                };
                let Ok(n) = unit_normal(&j) else { continue };
                assert!(minkowski_inner(n, j.xu).abs() < 1e-10);
                assert!(minkowski_inner(n, j.xv).abs() < 1e-10);
                assert!((minkowski_inner(n, n) + 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn exact_jets_match_finite_differences() {
        for b in [
            BuiltinSurface::Ex1,
            BuiltinSurface::Ex2,
            BuiltinSurface::Ex3,
            BuiltinSurface::Ex4,
            BuiltinSurface::Hyperboloid,
            BuiltinSurface::TimelikePlane,
        ] {
            let spec = ex(b);
            let (u, v) = (0.6, 0.3);
            let exact = shape_of_jet(&surface_jet(&spec, u, v).unwrap()).unwrap();
            let fd = shape_of_jet(&surface_jet_fd(&spec, u, v, 1e-4).unwrap()).unwrap();
            for (a, b2) in [
                (exact.s11, fd.s11),
                (exact.s12, fd.s12),
                (exact.s21, fd.s21),
                (exact.s22, fd.s22),
            ] {
                assert!((a - b2).abs() < 1e-4, "{a} vs {b2} on {spec:?}");
            }
        }
    }

    #[test]
    fn reparametrization_invariance() {
        // x~(u,v) = x(2u, 0.5v) leaves K, H, and the class unchanged.
        let scaled = SurfaceSpec::parse_triple(
            "(2*u)+(0.5*v), sin(2*u)-(0.5*v)*cos(2*u), -cos(2*u)-(0.5*v)*sin(2*u)",
        )
        .unwrap();
        let base = ex(BuiltinSurface::Ex2);
        for (u, v) in [(0.2, 0.4), (-0.7, 0.9), (1.4, -1.1)] {
            let r1 = point_report(&scaled, u, v, CLASS_TOL).unwrap();
            let r2 = point_report(&base, 2.0 * u, 0.5 * v, CLASS_TOL).unwrap();
            assert!((r1.k - r2.k).abs() < 1e-9);
            assert!((r1.h - r2.h).abs() < 1e-9);
            assert_eq!(r1.class, r2.class);
        }
    }

    #[test]
    fn case2_spec_has_no_pointwise_jet() {
        let spec = SurfaceSpec::Case2 {
            mean: parse_expr("1").unwrap(),
            gauge: parse_expr("-1").unwrap(),
        };
        assert!(matches!(
            surface_jet(&spec, 1.0, 1.0),
            Err(Error::UnsupportedSpec(_))
        ));
    }

    #[test]
    fn degenerate_jet_not_regular() {
        let spec = SurfaceSpec::parse_triple("u+v,u+v,0").unwrap();
        assert!(matches!(
            surface_jet(&spec, 0.0, 0.0),
            Err(Error::NotRegular { .. })
        ));
    }
}
