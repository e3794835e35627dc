//! The PDE/ODE layer: Liouville and Backlund residuals, the nonzero-mean
//! chart fields, compatibility residuals for the frame PDE system, and
//! numerical integration of the moving-frame equations.
//!
//! The frame of a totally quasi-umbilic surface in null coordinates is
//! governed by connection forms determined by three scalar fields f, g, H:
//!
//! ```text
//! eta^1   = e^f du            eta^2   = e^g dv
//! eta^1_1 = g_u du - f_v dv   eta^3_1 = -(e^f du + H e^g dv)
//! eta^3_2 = -H e^f du
//! ```
//!
//! with the remaining forms fixed by the Gram relations. The fields must
//! satisfy `H_v = 0`, `H_u = 2 f_v e^{f-g}`, `(f+g)_uv = H^2 e^{f+g}`.

use crate::error::{Error, Result};
use crate::expr::{eval_jet2, Expr, Jet2, Var};
use crate::mink::{validate_null_frame, MVec3, NullFrame};
use crate::surface::SurfaceJet;
use std::sync::Arc;

/// Norm bound beyond which frame integration is declared divergent.
const BLOWUP_LIMIT: f64 = 1e12;

/// Value, first partials, and the mixed second partial of a scalar field.
/// This is exactly the jet order the frame equations and their
/// compatibility residuals consume.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MixedJet {
    pub val: f64,
    pub du: f64,
    pub dv: f64,
    pub duv: f64,
}

impl From<Jet2> for MixedJet {
    fn from(j: Jet2) -> Self {
        MixedJet {
            val: j.val,
            du: j.du,
            dv: j.dv,
            duv: j.duv,
        }
    }
}

/// A scalar field on the (u, v) chart, evaluable to a [`MixedJet`].
#[derive(Debug, Clone)]
pub enum ScalarField {
    /// An expression in u and v.
    Expr(Expr),
    /// The negation of an expression.
    NegExpr(Expr),
    /// Identically zero.
    Zero,
    /// The f field of a nonzero-mean chart.
    Case2F(Arc<Case2Fields>),
    /// The g field of a nonzero-mean chart.
    Case2G(Arc<Case2Fields>),
}

impl ScalarField {
    pub fn eval_mixed(&self, u: f64, v: f64) -> Result<MixedJet> {
        match self {
            ScalarField::Expr(e) => Ok(eval_jet2(e, u, v)?.into()),
            ScalarField::NegExpr(e) => Ok(eval_jet2(e, u, v)?.neg().into()),
            ScalarField::Zero => Ok(MixedJet::default()),
            ScalarField::Case2F(c) => Ok(c.eval(u, v)?.f),
            ScalarField::Case2G(c) => Ok(c.eval(u, v)?.g),
        }
    }
}

/// General solution of the Liouville equation `z_uv = e^z` at one point:
/// `z = ln(2 phi'(u) psi'(v) / (phi(u) + psi(v))^2)`.
pub fn liouville_solution(phi: &Expr, psi: &Expr, u: f64, v: f64) -> Result<f64> {
    phi.check_bindings()?;
    psi.check_bindings()?;
    if phi.uses_var(Var::V) || psi.uses_var(Var::U) {
        return Err(Error::InvalidInput(
            "phi must be a function of u and psi a function of v".into(),
        ));
    }
    let jp = eval_jet2(phi, u, v)?;
    let jq = eval_jet2(psi, u, v)?;
    let dphi = jp.du;
    let dpsi = jq.dv;
    if dphi == 0.0 {
        return Err(Error::Domain {
            node: "liouville:phi'",
            value: 0.0,
        });
    }
    if dpsi == 0.0 {
        return Err(Error::Domain {
            node: "liouville:psi'",
            value: 0.0,
        });
    }
    let denom = jp.val + jq.val;
    if denom == 0.0 {
        return Err(Error::Domain {
            node: "liouville:phi+psi",
            value: 0.0,
        });
    }
    let arg = 2.0 * dphi * dpsi / (denom * denom);
    if arg <= 0.0 {
        return Err(Error::Domain {
            node: "liouville:log-argument",
            value: arg,
        });
    }
    Ok(arg.ln())
}

/// Residual `z_uv - e^z` of the Liouville equation, via exact jets.
pub fn liouville_residual(z: &Expr, u: f64, v: f64) -> Result<f64> {
    let j = eval_jet2(z, u, v)?;
    Ok(j.duv - j.val.exp())
}

/// Residuals of the Backlund system relating a Liouville solution z to a
/// wave-equation solution w:
/// `r1 = z_u - w_u - 2 e^{(z+w)/2}`, `r2 = z_v + w_v - e^{(z-w)/2}`.
pub fn backlund_residual(z: &Expr, w: &Expr, u: f64, v: f64) -> Result<(f64, f64)> {
    let jz = eval_jet2(z, u, v)?;
    let jw = eval_jet2(w, u, v)?;
    let r1 = jz.du - jw.du - 2.0 * (0.5 * (jz.val + jw.val)).exp();
    let r2 = jz.dv + jw.dv - (0.5 * (jz.val - jw.val)).exp();
    Ok((r1, r2))
}

/// Jets of the chart fields of a nonzero-mean-curvature surface, derived
/// from the mean curvature H(u) and the free chart function k(u):
///
/// ```text
/// A = -2 H'(u) / (H(u)^2 (u+v)) - k(u)
/// f = ln(A) / 2
/// g = ln(2 / (H^2 (u+v)^2)) - f
/// ```
///
/// The chart excludes `u + v = 0`, `H = 0`, and `A <= 0`; those points
/// surface as domain errors rather than being clamped.
#[derive(Debug, Clone)]
pub struct Case2Fields {
    mean: Expr,
    gauge: Expr,
}

/// Jets of (f, g) at one point of the chart.
#[derive(Debug, Clone, Copy)]
pub struct Case2Eval {
    pub f: MixedJet,
    pub g: MixedJet,
}

impl Case2Fields {
    /// Both arguments must be functions of u alone.
    pub fn new(mean: Expr, gauge: Expr) -> Result<Case2Fields> {
        for e in [&mean, &gauge] {
            e.check_bindings()?;
            if e.uses_var(Var::V) {
                return Err(Error::InvalidInput(
                    "H and k must be functions of u alone".into(),
                ));
            }
        }
        Ok(Case2Fields { mean, gauge })
    }

    pub fn mean(&self) -> &Expr {
        &self.mean
    }

    pub fn eval(&self, u: f64, v: f64) -> Result<Case2Eval> {
        let jh = eval_jet2(&self.mean, u, 0.0)?;
        let jk = eval_jet2(&self.gauge, u, 0.0)?;
        let w = u + v;
        if w == 0.0 {
            return Err(Error::Domain {
                node: "case2:u+v",
                value: 0.0,
            });
        }
        if jh.val == 0.0 {
            return Err(Error::Domain {
                node: "case2:H",
                value: 0.0,
            });
        }
        let (h, hp, hpp) = (jh.val, jh.du, jh.duu);
        // A = p/(q w) - k with p = -2H', q = H^2
        let p = -2.0 * hp;
        let pp = -2.0 * hpp;
        let q = h * h;
        let qp = 2.0 * h * hp;
        let a = p / (q * w) - jk.val;
        if a <= 0.0 {
            return Err(Error::Domain {
                node: "case2:log-argument",
                value: a,
            });
        }
        let a_u = pp / (q * w) - p * qp / (q * q * w) - p / (q * w * w) - jk.du;
        let a_v = -p / (q * w * w);
        let a_uv = -pp / (q * w * w) + p * qp / (q * q * w * w) + 2.0 * p / (q * w * w * w);
        let f = MixedJet {
            val: 0.5 * a.ln(),
            du: a_u / (2.0 * a),
            dv: a_v / (2.0 * a),
            duv: a_uv / (2.0 * a) - a_u * a_v / (2.0 * a * a),
        };
        // g = ln 2 - ln q - 2 ln|w| - f
        let g = MixedJet {
            val: (2.0 / (q * w * w)).ln() - f.val,
            du: -qp / q - 2.0 / w - f.du,
            dv: -2.0 / w - f.dv,
            duv: 2.0 / (w * w) - f.duv,
        };
        Ok(Case2Eval { f, g })
    }
}

/// Values of the chart fields (f, g) at one point.
pub fn case2_forms(mean: &Expr, gauge: &Expr, u: f64, v: f64) -> Result<(f64, f64)> {
    let c = Case2Fields::new(mean.clone(), gauge.clone())?;
    let e = c.eval(u, v)?;
    Ok((e.f.val, e.g.val))
}

/// Residuals of the structure-equation PDE system for fields (f, g, H):
/// `r1 = H_v`, `r2 = H_u - 2 f_v e^{f-g}`, `r3 = (f+g)_uv - H^2 e^{f+g}`.
pub fn pde_residuals(
    f: &ScalarField,
    g: &ScalarField,
    h: &ScalarField,
    u: f64,
    v: f64,
) -> Result<(f64, f64, f64)> {
    let jf = f.eval_mixed(u, v)?;
    let jg = g.eval_mixed(u, v)?;
    let jh = h.eval_mixed(u, v)?;
    let r1 = jh.dv;
    let r2 = jh.du - 2.0 * jf.dv * (jf.val - jg.val).exp();
    let r3 = (jf.duv + jg.duv) - jh.val * jh.val * (jf.val + jg.val).exp();
    Ok((r1, r2, r3))
}

/// Connection-form data for frame integration.
#[derive(Debug, Clone)]
pub enum MCForms {
    /// All coefficient forms vanish; the frame and position stay fixed.
    Zero,
    /// Forms built from the scalar fields (f, g, H).
    Fields {
        f: ScalarField,
        g: ScalarField,
        h: ScalarField,
    },
}

/// Pointwise coefficients of the connection forms on du and dv.
#[derive(Debug, Clone, Copy, Default)]
struct FormCoeffs {
    /// e^f (the du coefficient of eta^1)
    ef: f64,
    /// e^g (the dv coefficient of eta^2)
    eg: f64,
    h: f64,
    g_u: f64,
    f_v: f64,
}

impl MCForms {
    /// The flat-cylinder family: f = f(u), g = -f(u), H = 0.
    pub fn case1(profile: Expr) -> Result<MCForms> {
        profile.check_bindings()?;
        if profile.uses_var(Var::V) {
            return Err(Error::InvalidInput(
                "the case-1 profile must be a function of u alone".into(),
            ));
        }
        Ok(MCForms::Fields {
            f: ScalarField::Expr(profile.clone()),
            g: ScalarField::NegExpr(profile),
            h: ScalarField::Zero,
        })
    }

    /// The nonzero-mean family determined by H(u) and k(u).
    pub fn case2(mean: Expr, gauge: Expr) -> Result<MCForms> {
        let fields = Arc::new(Case2Fields::new(mean.clone(), gauge)?);
        Ok(MCForms::Fields {
            f: ScalarField::Case2F(fields.clone()),
            g: ScalarField::Case2G(fields),
            h: ScalarField::Expr(mean),
        })
    }

    pub fn from_fields(f: ScalarField, g: ScalarField, h: ScalarField) -> MCForms {
        MCForms::Fields { f, g, h }
    }

    fn coeffs(&self, u: f64, v: f64) -> Result<FormCoeffs> {
        match self {
            MCForms::Zero => Ok(FormCoeffs::default()),
            MCForms::Fields { f, g, h } => {
                let jf = f.eval_mixed(u, v)?;
                let jg = g.eval_mixed(u, v)?;
                let jh = h.eval_mixed(u, v)?;
                Ok(FormCoeffs {
                    ef: jf.val.exp(),
                    eg: jg.val.exp(),
                    h: jh.val,
                    g_u: jg.du,
                    f_v: jf.dv,
                })
            }
        }
    }
}

/// Position and adapted null frame at one chart point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameState {
    pub x: MVec3,
    pub f1: MVec3,
    pub f2: MVec3,
    pub f3: MVec3,
}

impl FrameState {
    /// The standard null frame placed at a point.
    pub fn standard_at(x: MVec3) -> FrameState {
        let nf = NullFrame::standard();
        FrameState {
            x,
            f1: nf.f1,
            f2: nf.f2,
            f3: nf.f3,
        }
    }

    pub fn frame(&self) -> NullFrame {
        NullFrame {
            f1: self.f1,
            f2: self.f2,
            f3: self.f3,
        }
    }

    /// Worst deviation of the frame from the six Gram conditions.
    pub fn gram_defect(&self) -> f64 {
        validate_null_frame(&self.frame(), 0.0).max_defect
    }

    fn scaled(&self, c: f64) -> FrameState {
        FrameState {
            x: self.x * c,
            f1: self.f1 * c,
            f2: self.f2 * c,
            f3: self.f3 * c,
        }
    }

    fn plus(&self, o: &FrameState) -> FrameState {
        FrameState {
            x: self.x + o.x,
            f1: self.f1 + o.f1,
            f2: self.f2 + o.f2,
            f3: self.f3 + o.f3,
        }
    }

    fn max_abs(&self) -> f64 {
        [self.x, self.f1, self.f2, self.f3]
            .iter()
            .map(|m| m.x0.abs().max(m.x1.abs()).max(m.x2.abs()))
            .fold(0.0, f64::max)
    }
}

/// Result of a frame integration: final state plus the Gram defect it
/// accumulated.
#[derive(Debug, Clone, Copy)]
pub struct FrameFlowResult {
    pub state: FrameState,
    pub gram_defect: f64,
}

fn frame_rhs(mc: &MCForms, u: f64, v: f64, du: f64, dv: f64, y: &FrameState) -> Result<FrameState> {
    let c = mc.coeffs(u, v)?;
    let eta1 = c.ef * du;
    let eta2 = c.eg * dv;
    let sigma = c.g_u * du - c.f_v * dv; // eta^1_1
    let p = -(c.ef * du + c.h * c.eg * dv); // eta^3_1
    let q = -c.h * c.ef * du; // eta^3_2
    Ok(FrameState {
        x: y.f1 * eta1 + y.f2 * eta2,
        f1: y.f1 * sigma + y.f3 * p,
        f2: y.f2 * (-sigma) + y.f3 * q,
        f3: y.f1 * q + y.f2 * p,
    })
}

/// Integrate the frame equations along a polyline in the (u, v) chart with
/// classical fixed-step RK4. `step` is the parameter-space step length.
pub fn integrate_frame(
    mc: &MCForms,
    init: &FrameState,
    path: &[(f64, f64)],
    step: f64,
) -> Result<FrameFlowResult> {
    if step <= 0.0 {
        return Err(Error::InvalidInput("step must be positive".into()));
    }
    if path.is_empty() {
        return Err(Error::InvalidInput("path must contain at least one vertex".into()));
    }
    let mut y = *init;
    for seg in path.windows(2) {
        let (p0, p1) = (seg[0], seg[1]);
        let du = p1.0 - p0.0;
        let dv = p1.1 - p0.1;
        let len = (du * du + dv * dv).sqrt();
        if len == 0.0 {
            continue;
        }
        let n = (len / step).ceil() as usize;
        let dt = 1.0 / n as f64;
        for i in 0..n {
            let t = i as f64 * dt;
            let at = |tau: f64| (p0.0 + tau * du, p0.1 + tau * dv);
            let (u1, v1) = at(t);
            let k1 = frame_rhs(mc, u1, v1, du, dv, &y)?;
            let (u2, v2) = at(t + 0.5 * dt);
            let k2 = frame_rhs(mc, u2, v2, du, dv, &y.plus(&k1.scaled(0.5 * dt)))?;
            let k3 = frame_rhs(mc, u2, v2, du, dv, &y.plus(&k2.scaled(0.5 * dt)))?;
            let (u4, v4) = at(t + dt);
            let k4 = frame_rhs(mc, u4, v4, du, dv, &y.plus(&k3.scaled(dt)))?;
            let incr = k1
                .plus(&k2.scaled(2.0))
                .plus(&k3.scaled(2.0))
                .plus(&k4)
                .scaled(dt / 6.0);
            y = y.plus(&incr);
            let norm = y.max_abs();
            if norm > BLOWUP_LIMIT {
                return Err(Error::IntegrationBlowup(norm));
            }
        }
    }
    Ok(FrameFlowResult {
        gram_defect: y.gram_defect(),
        state: y,
    })
}

/// A sampled surface on a rectangular parameter grid, row-major in u.
#[derive(Debug, Clone)]
pub struct GridSurface {
    pub us: Vec<f64>,
    pub vs: Vec<f64>,
    pub points: Vec<MVec3>,
}

impl GridSurface {
    pub fn at(&self, iu: usize, iv: usize) -> MVec3 {
        self.points[iu * self.vs.len() + iv]
    }

    pub fn nu(&self) -> usize {
        self.us.len()
    }

    pub fn nv(&self) -> usize {
        self.vs.len()
    }

    /// Finite-difference 2-jet at an interior node (central differences on
    /// the grid spacing). Returns None on the boundary.
    pub fn fd_jet(&self, iu: usize, iv: usize) -> Option<SurfaceJet> {
        if iu == 0 || iv == 0 || iu + 1 >= self.nu() || iv + 1 >= self.nv() {
            return None;
        }
        let hu = self.us[iu + 1] - self.us[iu];
        let hv = self.vs[iv + 1] - self.vs[iv];
        let c = self.at(iu, iv);
        let pu = self.at(iu + 1, iv);
        let mu = self.at(iu - 1, iv);
        let pv = self.at(iu, iv + 1);
        let mv = self.at(iu, iv - 1);
        let pp = self.at(iu + 1, iv + 1);
        let pm = self.at(iu + 1, iv - 1);
        let mp = self.at(iu - 1, iv + 1);
        let mm = self.at(iu - 1, iv - 1);
        Some(SurfaceJet {
            x: c,
            xu: (pu - mu) / (2.0 * hu),
            xv: (pv - mv) / (2.0 * hv),
            xuu: (pu - c * 2.0 + mu) / (hu * hu),
            xvv: (pv - c * 2.0 + mv) / (hv * hv),
            xuv: (pp - pm - mp + mm) / (4.0 * hu * hv),
        })
    }
}

/// Evenly spaced samples of an interval.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Reconstruct a nonzero-mean surface from (H(u), k(u)) by integrating the
/// frame equations: one sweep along u at the bottom edge of the grid, then
/// a sweep along v for each u sample. `init` is the frame at the grid
/// corner (u_lo, v_lo).
pub fn reconstruct_case2(
    mean: &Expr,
    gauge: &Expr,
    init: &FrameState,
    u_range: (f64, f64, usize),
    v_range: (f64, f64, usize),
    step: f64,
) -> Result<GridSurface> {
    let mc = MCForms::case2(mean.clone(), gauge.clone())?;
    let us = linspace(u_range.0, u_range.1, u_range.2.max(2));
    let vs = linspace(v_range.0, v_range.1, v_range.2.max(2));
    let v0 = vs[0];
    let mut points = vec![MVec3::ZERO; us.len() * vs.len()];
    let mut bottom = Vec::with_capacity(us.len());
    let mut state = *init;
    bottom.push(state);
    for iu in 1..us.len() {
        let res = integrate_frame(&mc, &state, &[(us[iu - 1], v0), (us[iu], v0)], step)?;
        state = res.state;
        bottom.push(state);
    }
    for (iu, start) in bottom.into_iter().enumerate() {
        let mut s = start;
        points[iu * vs.len()] = s.x;
        for iv in 1..vs.len() {
            let res = integrate_frame(&mc, &s, &[(us[iu], vs[iv - 1]), (us[iu], vs[iv])], step)?;
            s = res.state;
            points[iu * vs.len() + iv] = s.x;
        }
    }
    Ok(GridSurface {
        us,
        vs,
        points,
    })
}
