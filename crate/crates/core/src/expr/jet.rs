//! Second-order jet evaluation of expressions, plus a finite-difference
//! oracle with the same shape.

use super::quad::{integrate, QUAD_TOL};
use super::{Expr, Func, Var};
use crate::error::{Error, Result};

/// Value and partial derivatives through second order with respect to (u, v).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet2 {
    pub val: f64,
    pub du: f64,
    pub dv: f64,
    pub duu: f64,
    pub duv: f64,
    pub dvv: f64,
}

impl Jet2 {
    pub fn constant(val: f64) -> Jet2 {
        Jet2 {
            val,
            ..Jet2::default()
        }
    }

    pub fn seed_u(u: f64) -> Jet2 {
        Jet2 {
            val: u,
            du: 1.0,
            ..Jet2::default()
        }
    }

    pub fn seed_v(v: f64) -> Jet2 {
        Jet2 {
            val: v,
            dv: 1.0,
            ..Jet2::default()
        }
    }

    pub fn is_constant(&self) -> bool {
        self.du == 0.0 && self.dv == 0.0 && self.duu == 0.0 && self.duv == 0.0 && self.dvv == 0.0
    }

    pub fn neg(self) -> Jet2 {
        Jet2 {
            val: -self.val,
            du: -self.du,
            dv: -self.dv,
            duu: -self.duu,
            duv: -self.duv,
            dvv: -self.dvv,
        }
    }

    pub fn add(self, o: Jet2) -> Jet2 {
        Jet2 {
            val: self.val + o.val,
            du: self.du + o.du,
            dv: self.dv + o.dv,
            duu: self.duu + o.duu,
            duv: self.duv + o.duv,
            dvv: self.dvv + o.dvv,
        }
    }

    pub fn sub(self, o: Jet2) -> Jet2 {
        self.add(o.neg())
    }

    pub fn mul(self, o: Jet2) -> Jet2 {
        Jet2 {
            val: self.val * o.val,
            du: self.du * o.val + self.val * o.du,
            dv: self.dv * o.val + self.val * o.dv,
            duu: self.duu * o.val + 2.0 * self.du * o.du + self.val * o.duu,
            duv: self.duv * o.val + self.du * o.dv + self.dv * o.du + self.val * o.duv,
            dvv: self.dvv * o.val + 2.0 * self.dv * o.dv + self.val * o.dvv,
        }
    }

    pub fn div(self, o: Jet2) -> Result<Jet2> {
        if o.val == 0.0 {
            return Err(Error::Domain {
                node: "/",
                value: 0.0,
            });
        }
        Ok(self.mul(o.recip()))
    }

    fn recip(self) -> Jet2 {
        // 1/x via the chain rule; caller checks val != 0.
        let inv = 1.0 / self.val;
        self.chain(inv, -inv * inv, 2.0 * inv * inv * inv)
    }

    /// Apply a scalar function with value `g`, derivative `g1`, and second
    /// derivative `g2` at `self.val`.
    fn chain(self, g: f64, g1: f64, g2: f64) -> Jet2 {
        Jet2 {
            val: g,
            du: g1 * self.du,
            dv: g1 * self.dv,
            duu: g2 * self.du * self.du + g1 * self.duu,
            duv: g2 * self.du * self.dv + g1 * self.duv,
            dvv: g2 * self.dv * self.dv + g1 * self.dvv,
        }
    }

    pub fn apply(self, func: Func) -> Result<Jet2> {
        let x = self.val;
        Ok(match func {
            Func::Sin => self.chain(x.sin(), x.cos(), -x.sin()),
            Func::Cos => self.chain(x.cos(), -x.sin(), -x.cos()),
            Func::Tan => {
                let t = x.tan();
                let sec2 = 1.0 + t * t;
                self.chain(t, sec2, 2.0 * t * sec2)
            }
            Func::Atan => {
                let d = 1.0 / (1.0 + x * x);
                self.chain(x.atan(), d, -2.0 * x * d * d)
            }
            Func::Sinh => self.chain(x.sinh(), x.cosh(), x.sinh()),
            Func::Cosh => self.chain(x.cosh(), x.sinh(), x.cosh()),
            Func::Exp => {
                let e = x.exp();
                self.chain(e, e, e)
            }
            Func::Ln => {
                if x <= 0.0 {
                    return Err(Error::Domain {
                        node: "ln",
                        value: x,
                    });
                }
                self.chain(x.ln(), 1.0 / x, -1.0 / (x * x))
            }
            Func::Sqrt => {
                if x < 0.0 || (x == 0.0 && !self.is_constant()) {
                    return Err(Error::Domain {
                        node: "sqrt",
                        value: x,
                    });
                }
                if x == 0.0 {
                    return Ok(Jet2::constant(0.0));
                }
                let r = x.sqrt();
                self.chain(r, 0.5 / r, -0.25 / (r * r * r))
            }
            Func::Abs => {
                if x == 0.0 {
                    if self.is_constant() {
                        return Ok(Jet2::constant(0.0));
                    }
                    return Err(Error::Domain {
                        node: "abs",
                        value: 0.0,
                    });
                }
                self.chain(x.abs(), x.signum(), 0.0)
            }
        })
    }

    pub fn pow(self, exp: Jet2) -> Result<Jet2> {
        if exp.is_constant() {
            let e = exp.val;
            let is_integer = e.fract() == 0.0 && e.abs() <= i32::MAX as f64;
            if is_integer {
                let n = e as i32;
                if self.val == 0.0 && n < 0 {
                    return Err(Error::Domain {
                        node: "^",
                        value: 0.0,
                    });
                }
                let g = self.val.powi(n);
                let g1 = e * self.val.powi(n - 1);
                let g2 = e * (e - 1.0) * self.val.powi(n - 2);
                // powi(_, k<0) at 0 is inf, but those terms are multiplied
                // by a zero coefficient for n in {0, 1}; patch them.
                let g1 = if n == 0 { 0.0 } else { g1 };
                let g2 = if n == 0 || n == 1 { 0.0 } else { g2 };
                return Ok(self.chain(g, g1, g2));
            }
            if self.val <= 0.0 {
                return Err(Error::Domain {
                    node: "^",
                    value: self.val,
                });
            }
            let g = self.val.powf(e);
            let g1 = e * self.val.powf(e - 1.0);
            let g2 = e * (e - 1.0) * self.val.powf(e - 2.0);
            return Ok(self.chain(g, g1, g2));
        }
        // variable exponent: a^b = exp(b * ln a), so the base must be positive
        if self.val <= 0.0 {
            return Err(Error::Domain {
                node: "^",
                value: self.val,
            });
        }
        self.apply(Func::Ln)?.mul(exp).apply(Func::Exp)
    }
}

/// One-variable 2-jet used for integrand derivatives in `s`.
#[derive(Debug, Clone, Copy, Default)]
struct Jet1 {
    val: f64,
    d1: f64,
    d2: f64,
}

impl Jet1 {
    fn constant(val: f64) -> Jet1 {
        Jet1 {
            val,
            ..Jet1::default()
        }
    }

    fn lift(self) -> Jet2 {
        // Present an s-jet through the u slots so Jet2's function and power
        // rules can be reused verbatim.
        Jet2 {
            val: self.val,
            du: self.d1,
            duu: self.d2,
            ..Jet2::default()
        }
    }

    fn lower(j: Jet2) -> Jet1 {
        Jet1 {
            val: j.val,
            d1: j.du,
            d2: j.duu,
        }
    }
}

/// Evaluate at a point of the (u, v) chart without derivatives.
pub fn eval_scalar(e: &Expr, u: f64, v: f64) -> Result<f64> {
    match e {
        Expr::Const(c) => Ok(*c),
        Expr::Var(Var::U) => Ok(u),
        Expr::Var(Var::V) => Ok(v),
        Expr::Var(Var::S) => Err(Error::UnboundVariable('s')),
        Expr::Neg(a) => Ok(-eval_scalar(a, u, v)?),
        Expr::Add(a, b) => Ok(eval_scalar(a, u, v)? + eval_scalar(b, u, v)?),
        Expr::Sub(a, b) => Ok(eval_scalar(a, u, v)? - eval_scalar(b, u, v)?),
        Expr::Mul(a, b) => Ok(eval_scalar(a, u, v)? * eval_scalar(b, u, v)?),
        Expr::Div(a, b) => {
            Jet2::constant(eval_scalar(a, u, v)?).div(Jet2::constant(eval_scalar(b, u, v)?))
                .map(|j| j.val)
        }
        Expr::Pow(a, b) => {
            Jet2::constant(eval_scalar(a, u, v)?).pow(Jet2::constant(eval_scalar(b, u, v)?))
                .map(|j| j.val)
        }
        Expr::Call(f, a) => Jet2::constant(eval_scalar(a, u, v)?).apply(*f).map(|j| j.val),
        Expr::Integ(g) => integrate(|s| eval_in_s(g, s), 0.0, u, QUAD_TOL),
    }
}

/// Evaluate an `integ` body at a value of its bound variable.
fn eval_in_s(e: &Expr, s: f64) -> Result<f64> {
    match e {
        Expr::Const(c) => Ok(*c),
        Expr::Var(Var::S) => Ok(s),
        Expr::Var(w) => Err(Error::UnboundVariable(w.name())),
        Expr::Neg(a) => Ok(-eval_in_s(a, s)?),
        Expr::Add(a, b) => Ok(eval_in_s(a, s)? + eval_in_s(b, s)?),
        Expr::Sub(a, b) => Ok(eval_in_s(a, s)? - eval_in_s(b, s)?),
        Expr::Mul(a, b) => Ok(eval_in_s(a, s)? * eval_in_s(b, s)?),
        Expr::Div(a, b) => Jet2::constant(eval_in_s(a, s)?)
            .div(Jet2::constant(eval_in_s(b, s)?))
            .map(|j| j.val),
        Expr::Pow(a, b) => Jet2::constant(eval_in_s(a, s)?)
            .pow(Jet2::constant(eval_in_s(b, s)?))
            .map(|j| j.val),
        Expr::Call(f, a) => Jet2::constant(eval_in_s(a, s)?).apply(*f).map(|j| j.val),
        // nested integral: integrate the inner body up to this bound value
        Expr::Integ(g) => integrate(|t| eval_in_s(g, t), 0.0, s, QUAD_TOL),
    }
}

/// 2-jet of an `integ` body in its own bound variable.
fn eval_in_s_jet(e: &Expr, s: f64) -> Result<Jet1> {
    match e {
        Expr::Const(c) => Ok(Jet1::constant(*c)),
        Expr::Var(Var::S) => Ok(Jet1 {
            val: s,
            d1: 1.0,
            d2: 0.0,
        }),
        Expr::Var(w) => Err(Error::UnboundVariable(w.name())),
        Expr::Neg(a) => {
            let j = eval_in_s_jet(a, s)?;
            Ok(Jet1 {
                val: -j.val,
                d1: -j.d1,
                d2: -j.d2,
            })
        }
        Expr::Add(a, b) => {
            let (x, y) = (eval_in_s_jet(a, s)?, eval_in_s_jet(b, s)?);
            Ok(Jet1 {
                val: x.val + y.val,
                d1: x.d1 + y.d1,
                d2: x.d2 + y.d2,
            })
        }
        Expr::Sub(a, b) => {
            let (x, y) = (eval_in_s_jet(a, s)?, eval_in_s_jet(b, s)?);
            Ok(Jet1 {
                val: x.val - y.val,
                d1: x.d1 - y.d1,
                d2: x.d2 - y.d2,
            })
        }
        Expr::Mul(a, b) => {
            let (x, y) = (eval_in_s_jet(a, s)?, eval_in_s_jet(b, s)?);
            Ok(Jet1::lower(x.lift().mul(y.lift())))
        }
        Expr::Div(a, b) => {
            let (x, y) = (eval_in_s_jet(a, s)?, eval_in_s_jet(b, s)?);
            Ok(Jet1::lower(x.lift().div(y.lift())?))
        }
        Expr::Pow(a, b) => {
            let (x, y) = (eval_in_s_jet(a, s)?, eval_in_s_jet(b, s)?);
            Ok(Jet1::lower(x.lift().pow(y.lift())?))
        }
        Expr::Call(f, a) => {
            let x = eval_in_s_jet(a, s)?;
            Ok(Jet1::lower(x.lift().apply(*f)?))
        }
        Expr::Integ(g) => Ok(Jet1 {
            val: integrate(|t| eval_in_s(g, t), 0.0, s, QUAD_TOL)?,
            d1: eval_in_s(g, s)?,
            d2: eval_in_s_jet(g, s)?.d1,
        }),
    }
}

/// Evaluate the 2-jet of an expression at (u, v). Derivative slots hold the
/// exact partials; `integ` values come from adaptive quadrature while their
/// derivatives are exact integrand evaluations.
pub fn eval_jet2(e: &Expr, u: f64, v: f64) -> Result<Jet2> {
    match e {
        Expr::Const(c) => Ok(Jet2::constant(*c)),
        Expr::Var(Var::U) => Ok(Jet2::seed_u(u)),
        Expr::Var(Var::V) => Ok(Jet2::seed_v(v)),
        Expr::Var(Var::S) => Err(Error::UnboundVariable('s')),
        Expr::Neg(a) => Ok(eval_jet2(a, u, v)?.neg()),
        Expr::Add(a, b) => Ok(eval_jet2(a, u, v)?.add(eval_jet2(b, u, v)?)),
        Expr::Sub(a, b) => Ok(eval_jet2(a, u, v)?.sub(eval_jet2(b, u, v)?)),
        Expr::Mul(a, b) => Ok(eval_jet2(a, u, v)?.mul(eval_jet2(b, u, v)?)),
        Expr::Div(a, b) => eval_jet2(a, u, v)?.div(eval_jet2(b, u, v)?),
        Expr::Pow(a, b) => eval_jet2(a, u, v)?.pow(eval_jet2(b, u, v)?),
        Expr::Call(f, a) => eval_jet2(a, u, v)?.apply(*f),
        Expr::Integ(g) => {
            let inner = eval_in_s_jet(g, u)?;
            Ok(Jet2 {
                val: integrate(|s| eval_in_s(g, s), 0.0, u, QUAD_TOL)?,
                du: inner.val,
                duu: inner.d1,
                ..Jet2::default()
            })
        }
    }
}

/// Central-difference 2-jet of a scalar map on the 9-point stencil around
/// (u, v); O(h^2) accurate. The independent oracle for `eval_jet2`.
pub fn finite_diff_jet2<F>(f: F, u: f64, v: f64, h: f64) -> Result<Jet2>
where
    F: Fn(f64, f64) -> Result<f64>,
{
    let c = f(u, v)?;
    let pu = f(u + h, v)?;
    let mu = f(u - h, v)?;
    let pv = f(u, v + h)?;
    let mv = f(u, v - h)?;
    let pp = f(u + h, v + h)?;
    let pm = f(u + h, v - h)?;
    let mp = f(u - h, v + h)?;
    let mm = f(u - h, v - h)?;
    Ok(Jet2 {
        val: c,
        du: (pu - mu) / (2.0 * h),
        dv: (pv - mv) / (2.0 * h),
        duu: (pu - 2.0 * c + mu) / (h * h),
        dvv: (pv - 2.0 * c + mv) / (h * h),
        duv: (pp - pm - mp + mm) / (4.0 * h * h),
    })
}

#[cfg(test)]
mod tests {
    use super::super::parse_expr;
    use super::*;

    fn jet(text: &str, u: f64, v: f64) -> Jet2 {
        eval_jet2(&parse_expr(text).unwrap(), u, v).unwrap()
    }

    #[test]
    fn bilinear_jet() {
        let j = jet("u*v", 2.0, 3.0);
        assert_eq!(j.val, 6.0);
        assert_eq!(j.du, 3.0);
        assert_eq!(j.dv, 2.0);
        assert_eq!(j.duu, 0.0);
        assert_eq!(j.duv, 1.0);
        assert_eq!(j.dvv, 0.0);
    }

    #[test]
    fn atan_derivative() {
        let j = jet("2*atan(u)", 1.0, 0.0);
        assert!((j.du - 1.0).abs() < 1e-15);
        // second derivative: d/du 2/(1+u^2) = -4u/(1+u^2)^2 = -1 at u=1
        assert!((j.duu + 1.0).abs() < 1e-15);
    }

    #[test]
    fn liouville_log_mixed_partial() {
        let j = jet("ln(2/(u+v)^2)", 1.0, 1.0);
        assert!((j.duv - 0.5).abs() < 1e-14);
    }

    #[test]
    fn integral_node_jet() {
        // F(u) = int_0^u cos(s^3+s) ds: F(1) frozen from 30-digit arithmetic,
        // F' = cos(u^3+u), F'' = -(3u^2+1) sin(u^3+u)
        let j = jet("integ(cos(s^3+s))", 1.0, 0.7);
        assert!((j.val - 0.633_446_120_160_758_93).abs() < 1e-11, "val {}", j.val);
        assert!((j.du - 2.0_f64.cos()).abs() < 1e-14);
        assert!((j.duu - (-4.0 * 2.0_f64.sin())).abs() < 1e-13);
        assert_eq!((j.dv, j.duv, j.dvv), (0.0, 0.0, 0.0));
    }

    #[test]
    fn nested_integral_jet() {
        // int_0^u (int_0^s 1 dt) ds = u^2/2
        let j = jet("integ(integ(1))", 1.0, 0.0);
        assert!((j.val - 0.5).abs() < 1e-12);
        assert!((j.du - 1.0).abs() < 1e-12);
        assert!((j.duu - 1.0).abs() < 1e-12);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(
            eval_jet2(&parse_expr("ln(u)").unwrap(), -1.0, 0.0),
            Err(Error::Domain { node: "ln", .. })
        ));
        assert!(matches!(
            eval_jet2(&parse_expr("1/u").unwrap(), 0.0, 0.0),
            Err(Error::Domain { node: "/", .. })
        ));
        assert!(matches!(
            eval_jet2(&parse_expr("sqrt(u)").unwrap(), -0.5, 0.0),
            Err(Error::Domain { node: "sqrt", .. })
        ));
        // abs is fine away from 0, rejected at 0 when derivatives are live
        assert!(eval_jet2(&parse_expr("abs(u)").unwrap(), -2.0, 0.0).is_ok());
        assert!(matches!(
            eval_jet2(&parse_expr("abs(u)").unwrap(), 0.0, 0.0),
            Err(Error::Domain { node: "abs", .. })
        ));
    }

    #[test]
    fn integer_powers_allow_negative_base() {
        let j = jet("u^3", -2.0, 0.0);
        assert_eq!(j.val, -8.0);
        assert_eq!(j.du, 12.0);
        assert_eq!(j.duu, -12.0);
        // non-integer exponent needs a positive base
        assert!(matches!(
            eval_jet2(&parse_expr("u^1.5").unwrap(), -2.0, 0.0),
            Err(Error::Domain { node: "^", .. })
        ));
    }

    #[test]
    fn variable_exponent() {
        // u^v at (2, 3): value 8, du = v u^{v-1} = 12, dv = u^v ln u
        let j = jet("u^v", 2.0, 3.0);
        assert!((j.val - 8.0).abs() < 1e-12);
        assert!((j.du - 12.0).abs() < 1e-12);
        assert!((j.dv - 8.0 * 2.0_f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn finite_difference_oracle_on_calculus_example() {
        let f = |u: f64, _v: f64| Ok((u.powi(3) + u).sin());
        let j = finite_diff_jet2(f, 0.5, 0.0, 1e-4).unwrap();
        let exact = (3.0 * 0.25 + 1.0) * (0.5_f64.powi(3) + 0.5).cos();
        assert!((j.du - exact).abs() < 1e-6, "du {} vs {}", j.du, exact);
        let jb = finite_diff_jet2(|u, v| Ok(u * v), 2.0, 3.0, 1e-4).unwrap();
        assert!((jb.duv - 1.0).abs() < 1e-6);
    }

    #[test]
    fn jet_product_second_mixed_partial_identity() {
        // (a*b)_uv = a_uv b + a_u b_v + a_v b_u + a b_uv, exactly
        let mut x = 0.37_f64;
        let mut next = move || {
            x = (x * 131.0 + 0.17).sin() * 2.0;
            x
        };
        for _ in 0..200 {
            let a = Jet2 {
                val: next(),
                du: next(),
                dv: next(),
                duu: next(),
                duv: next(),
                dvv: next(),
            };
            let b = Jet2 {
                val: next(),
                du: next(),
                dv: next(),
                duu: next(),
                duv: next(),
                dvv: next(),
            };
            let p = a.mul(b);
            let expect = a.duv * b.val + a.du * b.dv + a.dv * b.du + a.val * b.duv;
            assert_eq!(p.duv, expect);
        }
    }

    #[test]
    fn pretty_print_round_trip_is_idempotent() {
        for text in [
            "2*atan(u)",
            "u^3+u",
            "ln(2/(u+v)^2)",
            "-u*v/(1+u^2)",
            "integ(cos(s^3+s))+v*cos(u^3+u)",
            "sqrt(1+sinh(u)^2)-cosh(v)",
            "u^-2",
        ] {
            let e1 = parse_expr(text).unwrap();
            let p1 = e1.to_string();
            let e2 = parse_expr(&p1).unwrap();
            assert_eq!(e1, e2, "round trip changed the tree for {text}");
            assert_eq!(p1, e2.to_string());
        }
    }
}
