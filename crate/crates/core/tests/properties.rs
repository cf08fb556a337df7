use proptest::prelude::*;

use relnorm::dsl::{parse_expr, BinOp, Expr, UnaryOp};
use relnorm::jet::{eval_expr_jet, seed_point, Jet, Layout};

fn expr_tree() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0.0f64..100.0).prop_map(Expr::Const),
        (0usize..3).prop_map(Expr::Var),
        Just(Expr::Curvature),
    ];
    leaf.prop_recursive(4, 32, 2, |inner| {
        let unary = prop_oneof![
            Just(UnaryOp::Neg),
            Just(UnaryOp::Sin),
            Just(UnaryOp::Cos),
            Just(UnaryOp::Exp),
            Just(UnaryOp::Ln),
            Just(UnaryOp::Sqrt),
            Just(UnaryOp::Abs),
        ];
        let binary = prop_oneof![
            Just(BinOp::Add),
            Just(BinOp::Sub),
            Just(BinOp::Mul),
            Just(BinOp::Div),
            Just(BinOp::Pow),
        ];
        prop_oneof![
            (unary, inner.clone()).prop_map(|(op, a)| Expr::unary(op, a)),
            (binary, inner.clone(), inner).prop_map(|(op, a, b)| Expr::binary(op, a, b)),
        ]
    })
}

fn jet(n: usize, r: usize) -> impl Strategy<Value = Jet> {
    let len = Layout::get(n, r).len();
    prop::collection::vec(-2.0f64..2.0, len).prop_map(move |c| Jet::from_coeffs(n, r, c))
}

fn close(a: &Jet, b: &Jet, tol: f64) -> bool {
    a.coeffs().iter().zip(b.coeffs()).all(|(x, y)| (x - y).abs() <= tol * (1.0 + x.abs().max(y.abs())))
}

proptest! {
    #[test]
    fn printed_expressions_reparse(e in expr_tree()) {
        prop_assert_eq!(parse_expr(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn products_bind_tighter_than_sums(a in -5.0f64..5.0, b in -5.0f64..5.0, c in -5.0f64..5.0) {
        let u = [a, b, c];
        let got = parse_expr("u1 - u2 * u3 + u1 / u3 ^ 2").unwrap().eval(&u, None);
        if let Ok(v) = got {
            let want = a - b * c + a / (c * c);
            prop_assert!((v - want).abs() <= 1e-12 * (1.0 + want.abs()));
        }
    }

    #[test]
    fn multiplication_commutes_and_associates(a in jet(2, 4), b in jet(2, 4), c in jet(2, 4)) {
        prop_assert!(close(&(&a * &b), &(&b * &a), 1e-12));
        prop_assert!(close(&(&(&a * &b) * &c), &(&a * &(&b * &c)), 1e-12));
    }

    #[test]
    fn truncation_commutes_with_products(a in jet(3, 4), b in jet(3, 4)) {
        let lhs = (&a * &b).truncate(2);
        let rhs = &a.truncate(2) * &b.truncate(2);
        prop_assert!(close(&lhs, &rhs, 1e-12));
    }

    #[test]
    fn exp_inverts_ln(a in jet(2, 4), shift in 0.5f64..3.0) {
        let base = a.add_scalar(shift - a.value());
        let back = base.ln().unwrap().exp();
        prop_assert!(close(&back, &base, 1e-10));
    }

    #[test]
    fn partials_match_finite_differences(
        p in -1.0f64..1.0, s in -1.0f64..1.0, u1 in -0.8f64..0.8, u2 in -0.8f64..0.8,
    ) {
        let text = format!("exp({p:?}*u1) * sin({s:?}*u2 + u1) + sqrt(2 + u1^2*u2)");
        let e = parse_expr(&text).unwrap();
        let j = eval_expr_jet(&e, &seed_point(&[u1, u2], 3), None).unwrap();
        let f = |a: f64, b: f64| e.eval(&[a, b], None).unwrap();
        let h = 1e-5;
        let d1 = (f(u1 + h, u2) - f(u1 - h, u2)) / (2.0 * h);
        let k = 1e-3;
        let d12 = (f(u1 + k, u2 + k) - f(u1 + k, u2 - k) - f(u1 - k, u2 + k) + f(u1 - k, u2 - k)) / (4.0 * k * k);
        let d22 = (f(u1, u2 + k) - 2.0 * f(u1, u2) + f(u1, u2 - k)) / (k * k);
        prop_assert!((j.d(&[0]) - d1).abs() <= 1e-8);
        prop_assert!((j.d(&[0, 1]) - d12).abs() <= 1e-5);
        prop_assert!((j.d(&[1, 1]) - d22).abs() <= 1e-5);
    }
}
