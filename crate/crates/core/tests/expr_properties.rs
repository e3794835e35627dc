//! Property tests for the expression layer: jet evaluation against the
//! finite-difference oracle, and parser round trips.

use proptest::prelude::*;
use quasumb::expr::{eval_jet2, eval_scalar, finite_diff_jet2, parse_expr, Expr, Func, Var};

/// Random expression trees whose values and first few derivatives stay
/// bounded on [0.1, 1.4]^2: risky functions are guarded at construction
/// (ln and sqrt get offset positive arguments, divisors are bounded away
/// from zero), so every generated tree is smooth on the whole test square.
fn safe_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0.0..2.0f64).prop_map(Expr::Const),
        Just(Expr::Var(Var::U)),
        Just(Expr::Var(Var::V)),
    ];
    leaf.prop_recursive(4, 24, 4, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
            inner.clone().prop_map(|a| Expr::Call(Func::Sin, Box::new(a))),
            inner.clone().prop_map(|a| Expr::Call(Func::Cos, Box::new(a))),
            inner.clone().prop_map(|a| Expr::Call(Func::Atan, Box::new(a))),
            // tan on a bounded argument
            inner.clone().prop_map(|a| Expr::Call(
                Func::Tan,
                Box::new(Expr::Mul(
                    Box::new(Expr::Const(0.4)),
                    Box::new(Expr::Call(Func::Sin, Box::new(a))),
                )),
            )),
            // sinh/cosh/exp on damped arguments
            inner.clone().prop_map(|a| Expr::Call(
                Func::Sinh,
                Box::new(Expr::Call(Func::Sin, Box::new(a))),
            )),
            inner.clone().prop_map(|a| Expr::Call(
                Func::Cosh,
                Box::new(Expr::Call(Func::Cos, Box::new(a))),
            )),
            inner.clone().prop_map(|a| Expr::Call(
                Func::Exp,
                Box::new(Expr::Call(Func::Sin, Box::new(a))),
            )),
            // ln(2.5 + sin a) and sqrt(2.5 + cos a) stay in-domain
            inner.clone().prop_map(|a| Expr::Call(
                Func::Ln,
                Box::new(Expr::Add(
                    Box::new(Expr::Const(2.5)),
                    Box::new(Expr::Call(Func::Sin, Box::new(a))),
                )),
            )),
            inner.clone().prop_map(|a| Expr::Call(
                Func::Sqrt,
                Box::new(Expr::Add(
                    Box::new(Expr::Const(2.5)),
                    Box::new(Expr::Call(Func::Cos, Box::new(a))),
                )),
            )),
            // guarded quotient and powers
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Div(
                Box::new(a),
                Box::new(Expr::Add(
                    Box::new(Expr::Const(2.5)),
                    Box::new(Expr::Call(Func::Sin, Box::new(b))),
                )),
            )),
            inner.clone().prop_map(|a| Expr::Pow(Box::new(a), Box::new(Expr::Const(2.0)))),
            inner.clone().prop_map(|a| Expr::Pow(
                Box::new(Expr::Add(
                    Box::new(Expr::Const(2.5)),
                    Box::new(Expr::Call(Func::Sin, Box::new(a))),
                )),
                Box::new(Expr::Const(1.7)),
            )),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn jets_match_finite_differences(e in safe_expr(), u in 0.2f64..1.3, v in 0.2f64..1.3) {
        let jet = eval_jet2(&e, u, v).unwrap();
        let fd = finite_diff_jet2(|a, b| eval_scalar(&e, a, b), u, v, 1e-4).unwrap();
        for (name, exact, approx) in [
            ("val", jet.val, fd.val),
            ("du", jet.du, fd.du),
            ("dv", jet.dv, fd.dv),
            ("duu", jet.duu, fd.duu),
            ("duv", jet.duv, fd.duv),
            ("dvv", jet.dvv, fd.dvv),
        ] {
            let tol = 1e-5f64.max(1e-5 * exact.abs());
            prop_assert!(
                (exact - approx).abs() <= tol,
                "{name}: jet {exact} vs fd {approx} for {e}"
            );
        }
    }

    #[test]
    fn print_parse_round_trip(e in safe_expr()) {
        let printed = e.to_string();
        let reparsed = parse_expr(&printed).unwrap();
        prop_assert_eq!(&reparsed, &e, "printed form: {}", printed);
        prop_assert_eq!(reparsed.to_string(), printed);
    }

    #[test]
    fn scalar_eval_agrees_with_jet_value(e in safe_expr(), u in 0.2f64..1.3, v in 0.2f64..1.3) {
        let jet = eval_jet2(&e, u, v).unwrap();
        let val = eval_scalar(&e, u, v).unwrap();
        prop_assert!((jet.val - val).abs() <= 1e-12 * val.abs().max(1.0));
    }
}

#[test]
fn integral_nodes_match_independent_oracles() {
    // value against a fine Simpson rule, first derivative against the
    // integrand, second derivative against a finite difference of the
    // integrand.
    let cases: [(&str, fn(f64) -> f64); 3] = [
        ("integ(cos(s^3+s))", |s| (s * s * s + s).cos()),
        ("integ(exp(sin(s)))", |s| s.sin().exp()),
        ("integ(1/(2+sin(s)))", |s| 1.0 / (2.0 + s.sin())),
    ];
    for (text, g) in cases {
        let e = parse_expr(text).unwrap();
        for u in [0.3, 0.9, 1.7, -1.1] {
            let jet = eval_jet2(&e, u, 0.0).unwrap();
            let n = 4000;
            let h = u / n as f64;
            let mut simpson = g(0.0) + g(u);
            for i in 1..n {
                let w = if i % 2 == 1 { 4.0 } else { 2.0 };
                simpson += w * g(i as f64 * h);
            }
            simpson *= h / 3.0;
            assert!(
                (jet.val - simpson).abs() < 1e-9,
                "{text} value {} vs simpson {simpson} at u={u}",
                jet.val
            );
            assert!((jet.du - g(u)).abs() < 1e-13, "{text} du at u={u}");
            let fd = (g(u + 1e-5) - g(u - 1e-5)) / 2e-5;
            assert!(
                (jet.duu - fd).abs() < 1e-8 * fd.abs().max(1.0),
                "{text} duu {} vs fd {fd} at u={u}",
                jet.duu
            );
        }
    }
}
