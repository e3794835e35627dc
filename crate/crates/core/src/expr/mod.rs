//! A small expression language in the variables `u`, `v` and its evaluation
//! over a second-order jet algebra.
//!
//! The grammar (EBNF):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := unary ('^' unary)?
//! unary  := '-' unary | atom
//! atom   := number | 'u' | 'v' | 'pi' | ident '(' expr (',' expr)* ')' | '(' expr ')'
//! ident  := sin | cos | tan | atan | sinh | cosh | exp | ln | sqrt | abs | integ
//! ```
//!
//! `integ(g)` denotes the integral of `g` from 0 up to the enclosing
//! variable (the top-level `u`, or the bound variable of an enclosing
//! `integ`), with `s` naming the bound variable inside `g`. Nested
//! integrals compose: `integ(integ(g))` integrates the inner integral as a
//! function of the outer bound variable.

mod jet;
mod parse;
mod quad;

pub use jet::{eval_jet2, eval_scalar, finite_diff_jet2, Jet2};
pub use parse::parse_expr;
pub use quad::{integrate, QUAD_TOL};

use crate::error::{Error, Result};

/// Variables of the language. `S` is only legal inside an `integ` body.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    U,
    V,
    S,
}

impl Var {
    pub fn name(self) -> char {
        match self {
            Var::U => 'u',
            Var::V => 'v',
            Var::S => 's',
        }
    }
}

/// Built-in unary functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Atan,
    Sinh,
    Cosh,
    Exp,
    Ln,
    Sqrt,
    Abs,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Atan => "atan",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        match name {
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            "tan" => Some(Func::Tan),
            "atan" => Some(Func::Atan),
            "sinh" => Some(Func::Sinh),
            "cosh" => Some(Func::Cosh),
            "exp" => Some(Func::Exp),
            "ln" => Some(Func::Ln),
            "sqrt" => Some(Func::Sqrt),
            "abs" => Some(Func::Abs),
            _ => None,
        }
    }
}

/// Expression AST. Immutable after construction; cheap to share.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(Var),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
    /// Integral of the body from 0 to the enclosing variable; the body is a
    /// function of the bound variable `s` alone.
    Integ(Box<Expr>),
}

impl Expr {
    pub fn constant(c: f64) -> Expr {
        Expr::Const(c)
    }

    pub fn var_u() -> Expr {
        Expr::Var(Var::U)
    }

    pub fn var_v() -> Expr {
        Expr::Var(Var::V)
    }

    /// True if no variable occurs (the expression evaluates to a constant).
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Const(_) => true,
            Expr::Var(_) => false,
            Expr::Neg(a) | Expr::Call(_, a) | Expr::Integ(a) => a.is_constant(),
            Expr::Add(a, b)
            | Expr::Sub(a, b)
            | Expr::Mul(a, b)
            | Expr::Div(a, b)
            | Expr::Pow(a, b) => a.is_constant() && b.is_constant(),
        }
    }

    /// True if the given variable occurs outside any `integ` body.
    pub fn uses_var(&self, var: Var) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Var(w) => *w == var,
            Expr::Neg(a) | Expr::Call(_, a) => a.uses_var(var),
            Expr::Integ(_) => false,
            Expr::Add(a, b)
            | Expr::Sub(a, b)
            | Expr::Mul(a, b)
            | Expr::Div(a, b)
            | Expr::Pow(a, b) => a.uses_var(var) || b.uses_var(var),
        }
    }

    /// Replace free occurrences of `from` with `to`, leaving `integ` bodies
    /// untouched (their own bound variable shadows the outer scope).
    pub fn substitute_var(&self, from: Var, to: Var) -> Expr {
        match self {
            Expr::Const(c) => Expr::Const(*c),
            Expr::Var(w) => Expr::Var(if *w == from { to } else { *w }),
            Expr::Neg(a) => Expr::Neg(Box::new(a.substitute_var(from, to))),
            Expr::Call(f, a) => Expr::Call(*f, Box::new(a.substitute_var(from, to))),
            Expr::Integ(a) => Expr::Integ(a.clone()),
            Expr::Add(a, b) => Expr::Add(
                Box::new(a.substitute_var(from, to)),
                Box::new(b.substitute_var(from, to)),
            ),
            Expr::Sub(a, b) => Expr::Sub(
                Box::new(a.substitute_var(from, to)),
                Box::new(b.substitute_var(from, to)),
            ),
            Expr::Mul(a, b) => Expr::Mul(
                Box::new(a.substitute_var(from, to)),
                Box::new(b.substitute_var(from, to)),
            ),
            Expr::Div(a, b) => Expr::Div(
                Box::new(a.substitute_var(from, to)),
                Box::new(b.substitute_var(from, to)),
            ),
            Expr::Pow(a, b) => Expr::Pow(
                Box::new(a.substitute_var(from, to)),
                Box::new(b.substitute_var(from, to)),
            ),
        }
    }

    /// Check the binding discipline: `s` occurs only inside `integ` bodies,
    /// and `integ` bodies use no variable other than their own `s`.
    pub fn check_bindings(&self) -> Result<()> {
        fn walk(e: &Expr, inside_integ: bool) -> Result<()> {
            match e {
                Expr::Const(_) => Ok(()),
                Expr::Var(Var::S) if !inside_integ => Err(Error::UnboundVariable('s')),
                Expr::Var(Var::U) | Expr::Var(Var::V) if inside_integ => Err(
                    Error::UnboundVariable(if matches!(e, Expr::Var(Var::U)) {
                        'u'
                    } else {
                        'v'
                    }),
                ),
                Expr::Var(_) => Ok(()),
                Expr::Neg(a) | Expr::Call(_, a) => walk(a, inside_integ),
                Expr::Integ(a) => walk(a, true),
                Expr::Add(a, b)
                | Expr::Sub(a, b)
                | Expr::Mul(a, b)
                | Expr::Div(a, b)
                | Expr::Pow(a, b) => {
                    walk(a, inside_integ)?;
                    walk(b, inside_integ)
                }
            }
        }
        walk(self, false)
    }
}

impl std::fmt::Display for Expr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        // Fully parenthesized below the additive level; round-trips through
        // the parser to an identical tree.
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var(v) => write!(f, "{}", v.name()),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a}+{b})"),
            Expr::Sub(a, b) => write!(f, "({a}-{b})"),
            Expr::Mul(a, b) => write!(f, "({a}*{b})"),
            Expr::Div(a, b) => write!(f, "({a}/{b})"),
            Expr::Pow(a, b) => write!(f, "({a}^{b})"),
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
            Expr::Integ(a) => write!(f, "integ({a})"),
        }
    }
}
