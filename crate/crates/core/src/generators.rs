//! Constructors for the surface families: angle-parametrized null ruled
//! surfaces, flat cylinders, the builtin examples, and the frame-derivative
//! functions of a ruled parametrization together with the closed-form shape
//! matrix they determine.

use crate::error::{Error, Result};
use crate::expr::{eval_jet2, eval_scalar, integrate, Expr, Var, QUAD_TOL};
use crate::mink::{
    minkowski_cross, minkowski_inner, validate_null_frame, MVec3, NullFrame, FRAME_TOL,
};
use crate::surface::{BuiltinSurface, PointReport, ShapeMatrix, SurfaceSpec};
use std::sync::Arc;

/// Default working interval for spec validation sweeps.
pub const DEFAULT_INTERVAL: (f64, f64) = (-std::f64::consts::PI, std::f64::consts::PI);

/// Samples used when validating a spec on its working interval.
pub const VALIDATION_SAMPLES: usize = 256;

/// Two direction angles defining a null ruled surface: the base curve
/// direction is `(1, cos theta1(u), sin theta1(u))` and the ruling is
/// `(1, cos theta2(u), sin theta2(u))`. Both angles are functions of u.
#[derive(Debug, Clone)]
pub struct ThetaSpec {
    pub theta1: Expr,
    pub theta2: Expr,
}

impl ThetaSpec {
    /// Build from angle expressions; both must be functions of u alone.
    pub fn new(theta1: Expr, theta2: Expr) -> Result<ThetaSpec> {
        for e in [&theta1, &theta2] {
            e.check_bindings()?;
            if e.uses_var(Var::V) {
                return Err(Error::DegenerateSpec(
                    "direction angles must be functions of u alone".into(),
                ));
            }
        }
        Ok(ThetaSpec { theta1, theta2 })
    }

    pub fn parse(theta1: &str, theta2: &str) -> Result<ThetaSpec> {
        ThetaSpec::new(crate::expr::parse_expr(theta1)?, crate::expr::parse_expr(theta2)?)
    }

    /// Check `theta1' != 0` and `theta1 != theta2 (mod 2 pi)` by sampling
    /// the interval.
    pub fn validate_on(&self, lo: f64, hi: f64, samples: usize) -> Result<()> {
        let n = samples.max(2);
        for i in 0..n {
            let u = lo + (hi - lo) * i as f64 / (n - 1) as f64;
            let t1 = eval_jet2(&self.theta1, u, 0.0)?;
            let t2 = eval_scalar(&self.theta2, u, 0.0)?;
            if t1.du.abs() <= 1e-9 {
                return Err(Error::DegenerateSpec(format!(
                    "theta1'({u}) = {:.3e} vanishes",
                    t1.du
                )));
            }
            let gap = (t1.val - t2).rem_euclid(2.0 * std::f64::consts::PI);
            if gap.min(2.0 * std::f64::consts::PI - gap) <= 1e-9 {
                return Err(Error::DegenerateSpec(format!(
                    "theta1({u}) coincides with theta2({u}) mod 2 pi"
                )));
            }
        }
        Ok(())
    }
}

/// Null ruled surface from a [`ThetaSpec`], validated on the default
/// interval, with the base curve starting at the origin.
pub fn ruled_null_surface(t: &ThetaSpec) -> Result<SurfaceSpec> {
    ruled_null_surface_on(t, DEFAULT_INTERVAL.0, DEFAULT_INTERVAL.1, MVec3::ZERO)
}

/// Null ruled surface validated on [lo, hi], with `base` the value of the
/// base curve at u = 0.
pub fn ruled_null_surface_on(t: &ThetaSpec, lo: f64, hi: f64, base: MVec3) -> Result<SurfaceSpec> {
    t.validate_on(lo, hi, VALIDATION_SAMPLES)?;
    Ok(SurfaceSpec::RuledNull {
        theta1: t.theta1.clone(),
        theta2: t.theta2.clone(),
        base,
    })
}

/// Flat cylinder over a convex curve in a lightlike plane. `profile` is the
/// function f(u); the surface is
/// `x = origin + u e^{f(0)} f1 + (v + C(u)/2) e^{-f(0)} f2 - B(u) f3` with
/// `A = int_0^u e^{2f}`, `B = int_0^u A`, `C = int_0^u A^2`.
pub fn case1_cylinder(profile: Expr, frame: NullFrame, origin: MVec3) -> Result<SurfaceSpec> {
    profile.check_bindings()?;
    if profile.uses_var(Var::V) {
        return Err(Error::DegenerateSpec(
            "the cylinder profile must be a function of u alone".into(),
        ));
    }
    let validity = validate_null_frame(&frame, FRAME_TOL);
    if !validity.pass {
        return Err(Error::InvalidFrame("case-1 initial frame", validity.max_defect));
    }
    Ok(SurfaceSpec::Case1 {
        profile,
        frame,
        origin,
    })
}

/// The builtin example surfaces with closed-form jets.
pub fn builtin_example(id: BuiltinSurface) -> SurfaceSpec {
    SurfaceSpec::Builtin(id)
}

/// Position and first two derivatives of a curve at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample {
    pub p: MVec3,
    pub d1: MVec3,
    pub d2: MVec3,
}

type CurveFn = Arc<dyn Fn(f64) -> Result<CurveSample> + Send + Sync>;

/// A ruled-surface datum: a base null curve and a null ruling field along it.
#[derive(Clone)]
pub struct RuledNullData {
    alpha: CurveFn,
    director: CurveFn,
}

impl std::fmt::Debug for RuledNullData {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("RuledNullData {{ .. }}")
    }
}

impl RuledNullData {
    pub fn new(
        alpha: impl Fn(f64) -> Result<CurveSample> + Send + Sync + 'static,
        director: impl Fn(f64) -> Result<CurveSample> + Send + Sync + 'static,
    ) -> RuledNullData {
        RuledNullData {
            alpha: Arc::new(alpha),
            director: Arc::new(director),
        }
    }

    /// Base curve and ruling field of an angle spec.
    pub fn from_theta(t: &ThetaSpec, base: MVec3) -> RuledNullData {
        let theta1 = t.theta1.clone();
        let theta2 = t.theta2.clone();
        RuledNullData {
            alpha: Arc::new(move |u: f64| {
                let j = eval_jet2(&theta1, u, 0.0)?;
                let (s, c) = j.val.sin_cos();
                let ci = integrate(|x| Ok(eval_scalar(&theta1, x, 0.0)?.cos()), 0.0, u, QUAD_TOL)?;
                let si = integrate(|x| Ok(eval_scalar(&theta1, x, 0.0)?.sin()), 0.0, u, QUAD_TOL)?;
                Ok(CurveSample {
                    p: base + MVec3::new(u, ci, si),
                    d1: MVec3::new(1.0, c, s),
                    d2: MVec3::new(0.0, -j.du * s, j.du * c),
                })
            }),
            director: Arc::new(move |u: f64| {
                let j = eval_jet2(&theta2, u, 0.0)?;
                let (s, c) = j.val.sin_cos();
                Ok(CurveSample {
                    p: MVec3::new(1.0, c, s),
                    d1: MVec3::new(0.0, -j.du * s, j.du * c),
                    d2: MVec3::new(
                        0.0,
                        -j.duu * s - j.du * j.du * c,
                        j.duu * c - j.du * j.du * s,
                    ),
                })
            }),
        }
    }

    pub fn alpha(&self, u: f64) -> Result<CurveSample> {
        (self.alpha)(u)
    }

    pub fn director(&self, u: f64) -> Result<CurveSample> {
        (self.director)(u)
    }
}

/// Values at one u of the frame-derivative functions of a normalized ruled
/// frame (`<f1, f2> = 1`): `f1' = h11 f1 + h31 f3`, `f2' = -h11 f2 + h32 f3`,
/// `f3' = h32 f1 + h31 f2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RuledFrameCoeffs {
    pub h11: f64,
    pub h31: f64,
    pub h32: f64,
    /// Max-norm residual of reconstructing the frame derivatives from the
    /// extracted coefficients.
    pub residual: f64,
}

/// Extract (h11, h31, h32) at u by pairing frame derivatives against the
/// dual frame. The director is renormalized to `<f1, f2> = 1` first.
pub fn ruled_frame_derivatives(d: &RuledNullData, u: f64) -> Result<RuledFrameCoeffs> {
    let a = d.alpha(u)?;
    let w = d.director(u)?;
    let f1 = a.d1;
    let f1p = a.d2;
    let n1 = minkowski_inner(f1, f1);
    if n1.abs() > 1e-8 * f1.euclid_norm_sq() {
        return Err(Error::DegenerateFrame {
            u,
            reason: "base curve tangent is not null",
        });
    }
    let nw = minkowski_inner(w.p, w.p);
    if nw.abs() > 1e-8 * w.p.euclid_norm_sq() {
        return Err(Error::DegenerateFrame {
            u,
            reason: "ruling direction is not null",
        });
    }
    let c = minkowski_inner(f1, w.p);
    if c.abs() <= 1e-10 * f1.euclid_norm() * w.p.euclid_norm() {
        return Err(Error::DegenerateFrame {
            u,
            reason: "ruling is not transverse to the base tangent",
        });
    }
    let f2 = w.p / c;
    let cp = minkowski_inner(f1p, w.p) + minkowski_inner(f1, w.d1);
    let f2p = w.d1 / c - w.p * (cp / (c * c));
    let g = minkowski_cross(f1, f2);
    let q = minkowski_inner(g, g);
    if q >= 0.0 {
        return Err(Error::DegenerateFrame {
            u,
            reason: "frame normal is not spacelike",
        });
    }
    let nrm = (-q).sqrt();
    let f3 = g / nrm;

    let h11 = minkowski_inner(f1p, f2);
    let h31 = -minkowski_inner(f1p, f3);
    let h32 = -minkowski_inner(f2p, f3);

    // residual of the frame equations, with f3' computed analytically
    let gp = minkowski_cross(f1p, f2) + minkowski_cross(f1, f2p);
    let nrm_p = -minkowski_inner(gp, g) / nrm;
    let f3p = gp / nrm - g * (nrm_p / (nrm * nrm));
    let r1 = f1p - (f1 * h11 + f3 * h31);
    let r2 = f2p - (f2 * (-h11) + f3 * h32);
    let r3 = f3p - (f1 * h32 + f2 * h31);
    let residual = r1
        .euclid_norm()
        .max(r2.euclid_norm())
        .max(r3.euclid_norm());
    Ok(RuledFrameCoeffs {
        h11,
        h31,
        h32,
        residual,
    })
}

/// Step used for the central difference of h32 in the closed-form shape
/// matrix.
const H32_DIFF_STEP: f64 = 1e-5;

/// Closed-form shape matrix `[[-h32, 0], [-h31 - v h32', -h32]]` of the
/// normalized ruled parametrization `x = alpha + v f2`, with h32' from a
/// central difference.
pub fn shape_closed_form(d: &RuledNullData, u: f64, v: f64) -> Result<ShapeMatrix> {
    let h = ruled_frame_derivatives(d, u)?;
    let hp = ruled_frame_derivatives(d, u + H32_DIFF_STEP)?;
    let hm = ruled_frame_derivatives(d, u - H32_DIFF_STEP)?;
    let h32_prime = (hp.h32 - hm.h32) / (2.0 * H32_DIFF_STEP);
    Ok(ShapeMatrix {
        s11: -h.h32,
        s12: 0.0,
        s21: -h.h31 - v * h32_prime,
        s22: -h.h32,
    })
}

/// Classify a point from the closed-form matrix. A vanishing h31 means the
/// base curve is degenerate (its second derivative is dependent), which the
/// closed form presumes away; flag it instead of classifying.
pub fn closed_form_report(d: &RuledNullData, u: f64, v: f64, tol: f64) -> Result<PointReport> {
    let h = ruled_frame_derivatives(d, u)?;
    if h.h31.abs() <= 1e-10 {
        return Err(Error::DegenerateFrame {
            u,
            reason: "h31 vanishes: base curve is degenerate",
        });
    }
    let s = shape_closed_form(d, u, v)?;
    Ok(crate::surface::classify_point(&s, tol))
}
