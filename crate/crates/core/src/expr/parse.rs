//! Recursive-descent parser for the expression grammar.

use super::{Expr, Func, Var};
use crate::error::{Error, Result};

/// Parse expression text into an AST, validating the binding discipline
/// (`s` only inside `integ` bodies).
pub fn parse_expr(text: &str) -> Result<Expr> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    if p.pos >= p.src.len() {
        return Err(Error::Syntax {
            offset: 0,
            expected: "an expression".into(),
        });
    }
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(Error::Syntax {
            offset: p.pos,
            expected: "end of input or an operator".into(),
        });
    }
    e.check_bindings()?;
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = self.term()?;
        loop {
            self.skip_ws();
            if self.eat(b'+') {
                acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
            } else if self.eat(b'-') {
                acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            if self.eat(b'*') {
                acc = Expr::Mul(Box::new(acc), Box::new(self.factor()?));
            } else if self.eat(b'/') {
                acc = Expr::Div(Box::new(acc), Box::new(self.factor()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.unary()?;
        self.skip_ws();
        if self.eat(b'^') {
            let exp = self.unary()?;
            Ok(Expr::Pow(Box::new(base), Box::new(exp)))
        } else {
            Ok(base)
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        self.skip_ws();
        if self.eat(b'-') {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else {
            self.atom()
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        self.skip_ws();
        let Some(c) = self.peek() else {
            return Err(Error::Syntax {
                offset: self.pos,
                expected: "a number, variable, function call, or `(`".into(),
            });
        };
        if c.is_ascii_digit() || c == b'.' {
            return self.number();
        }
        if c == b'(' {
            self.pos += 1;
            let e = self.expr()?;
            self.skip_ws();
            if !self.eat(b')') {
                return Err(Error::Syntax {
                    offset: self.pos,
                    expected: "`)`".into(),
                });
            }
            return Ok(e);
        }
        if c.is_ascii_alphabetic() {
            return self.word();
        }
        Err(Error::Syntax {
            offset: self.pos,
            expected: "a number, variable, function call, or `(`".into(),
        })
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_digit() || c == b'.')
        {
            self.pos += 1;
        }
        // optional exponent part
        if self.peek().is_some_and(|c| c == b'e' || c == b'E') {
            let mark = self.pos;
            self.pos += 1;
            if self.peek().is_some_and(|c| c == b'+' || c == b'-') {
                self.pos += 1;
            }
            if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
            } else {
                // `e` was the start of an identifier, not an exponent
                self.pos = mark;
            }
        }
        let txt = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii slice");
        txt.parse::<f64>().map(Expr::Const).map_err(|_| Error::Syntax {
            offset: start,
            expected: "a numeric literal".into(),
        })
    }

    fn word(&mut self) -> Result<Expr> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_alphanumeric()) {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii slice");
        self.skip_ws();
        if self.peek() == Some(b'(') {
            // function call
            self.pos += 1;
            let mut args = vec![self.expr()?];
            loop {
                self.skip_ws();
                if self.eat(b',') {
                    args.push(self.expr()?);
                } else if self.eat(b')') {
                    break;
                } else {
                    return Err(Error::Syntax {
                        offset: self.pos,
                        expected: "`,` or `)`".into(),
                    });
                }
            }
            if name == "integ" {
                if args.len() != 1 {
                    return Err(Error::Arity {
                        name: "integ",
                        expected: 1,
                        got: args.len(),
                    });
                }
                return Ok(Expr::Integ(Box::new(args.pop().expect("one arg"))));
            }
            let Some(func) = Func::from_name(name) else {
                return Err(Error::UnknownFunction {
                    name: name.to_string(),
                    offset: start,
                });
            };
            if args.len() != 1 {
                return Err(Error::Arity {
                    name: func.name(),
                    expected: 1,
                    got: args.len(),
                });
            }
            return Ok(Expr::Call(func, Box::new(args.pop().expect("one arg"))));
        }
        match name {
            "u" => Ok(Expr::Var(Var::U)),
            "v" => Ok(Expr::Var(Var::V)),
            "s" => Ok(Expr::Var(Var::S)),
            "pi" => Ok(Expr::Const(std::f64::consts::PI)),
            _ => Err(Error::UnknownFunction {
                name: name.to_string(),
                offset: start,
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_scaled_atan() {
        let e = parse_expr("2*atan(u)").unwrap();
        assert_eq!(
            e,
            Expr::Mul(
                Box::new(Expr::Const(2.0)),
                Box::new(Expr::Call(Func::Atan, Box::new(Expr::Var(Var::U)))),
            )
        );
    }

    #[test]
    fn parses_cubic() {
        let e = parse_expr("u^3+u").unwrap();
        assert_eq!(
            e,
            Expr::Add(
                Box::new(Expr::Pow(
                    Box::new(Expr::Var(Var::U)),
                    Box::new(Expr::Const(3.0)),
                )),
                Box::new(Expr::Var(Var::U)),
            )
        );
    }

    #[test]
    fn unbalanced_paren_reports_offset() {
        match parse_expr("sin(") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_function() {
        match parse_expr("foo(u)") {
            Err(Error::UnknownFunction { name, offset }) => {
                assert_eq!(name, "foo");
                assert_eq!(offset, 0);
            }
            other => panic!("expected unknown function, got {other:?}"),
        }
    }

    #[test]
    fn wrong_arity() {
        match parse_expr("sin(u, v)") {
            Err(Error::Arity { name, expected, got }) => {
                assert_eq!(name, "sin");
                assert_eq!(expected, 1);
                assert_eq!(got, 2);
            }
            other => panic!("expected arity error, got {other:?}"),
        }
    }

    #[test]
    fn negation_binds_below_caret_per_grammar() {
        // factor := unary ('^' unary)?, so -2^2 parses as (-2)^2 = 4.
        let e = parse_expr("-2^2").unwrap();
        assert_eq!(
            e,
            Expr::Pow(
                Box::new(Expr::Neg(Box::new(Expr::Const(2.0)))),
                Box::new(Expr::Const(2.0)),
            )
        );
    }

    #[test]
    fn s_outside_integ_rejected() {
        assert_eq!(parse_expr("s+1"), Err(Error::UnboundVariable('s')));
    }

    #[test]
    fn u_inside_integ_rejected() {
        assert_eq!(parse_expr("integ(u)"), Err(Error::UnboundVariable('u')));
    }

    #[test]
    fn pi_and_scientific_literals() {
        assert_eq!(parse_expr("pi").unwrap(), Expr::Const(std::f64::consts::PI));
        assert_eq!(parse_expr("1.5e-3").unwrap(), Expr::Const(1.5e-3));
        // `e` not followed by digits is not an exponent
        assert!(parse_expr("2exp(u)").is_err());
    }

    #[test]
    fn trailing_garbage_rejected() {
        match parse_expr("u+v)") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 3),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }
}
