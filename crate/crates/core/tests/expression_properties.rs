use proptest::prelude::*;
use qea_core::expressions::{BinOp, Bindings, Expression, Func, Node, Var, VarSet};
use qea_core::logvalue::LogValue;

fn any_tree() -> impl Strategy<Value = Node<f64>> {
    let leaf = prop_oneof![
        (0.0f64..1e6).prop_map(Node::Const),
        prop::num::f64::POSITIVE.prop_map(Node::Const),
        prop::sample::select(Var::ALL.to_vec()).prop_map(Node::Var),
    ];
    leaf.prop_recursive(6, 48, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|x| Node::Neg(Box::new(x))),
            (
                prop::sample::select(vec![BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Pow]),
                inner.clone(),
                inner.clone()
            )
                .prop_map(|(op, a, b)| Node::binary(op, a, b)),
            (
                prop::sample::select(vec![Func::Exp, Func::Ln, Func::Log2, Func::Log10, Func::Sqrt]),
                inner
            )
                .prop_map(|(f, x)| Node::call(f, x)),
        ]
    })
}

/// Trees whose linear value stays positive so a plain `f64` walk can check them.
fn positive_tree() -> impl Strategy<Value = Node<f64>> {
    let leaf = prop_oneof![
        (0.5f64..1000.0).prop_map(Node::Const),
        Just(Node::Var(Var::N)),
    ];
    leaf.prop_recursive(5, 32, 2, |inner| {
        prop_oneof![
            (
                prop::sample::select(vec![BinOp::Add, BinOp::Mul, BinOp::Div]),
                inner.clone(),
                inner.clone()
            )
                .prop_map(|(op, a, b)| Node::binary(op, a, b)),
            (inner.clone(), 0.25f64..3.0)
                .prop_map(|(a, e)| Node::binary(BinOp::Pow, a, Node::Const(e))),
            inner.clone().prop_map(|x| Node::call(Func::Sqrt, x)),
            // ln(x + 2) > 0 for every positive x
            inner.clone().prop_map(|x| Node::call(
                Func::Ln,
                Node::binary(BinOp::Add, x, Node::Const(2.0))
            )),
            (0.0f64..5.0).prop_map(|c| Node::call(Func::Exp, Node::Const(c))),
        ]
    })
}

fn direct(node: &Node<f64>, n: f64) -> f64 {
    match node {
        Node::Const(c) => *c,
        Node::Var(_) => n,
        Node::Neg(x) => -direct(x, n),
        Node::Call(f, x) => {
            let v = direct(x, n);
            match f {
                Func::Exp => v.exp(),
                Func::Ln => v.ln(),
                Func::Log2 => v.log2(),
                Func::Log10 => v.log10(),
                Func::Sqrt => v.sqrt(),
            }
        }
        Node::Binary(op, a, b) => {
            let (x, y) = (direct(a, n), direct(b, n));
            match op {
                BinOp::Add => x + y,
                BinOp::Sub => x - y,
                BinOp::Mul => x * y,
                BinOp::Div => x / y,
                BinOp::Pow => x.powf(y),
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn printed_tree_parses_back_identically(tree in any_tree()) {
        let text = tree.to_string();
        let reparsed = Expression::<f64>::parse(&text, VarSet::ALL).unwrap();
        prop_assert_eq!(reparsed.ast(), &tree, "text: {}", text);
    }

    #[test]
    fn log_space_matches_linear_evaluation(tree in positive_tree(), n in 1.0f64..1e6) {
        let linear = direct(&tree, n);
        prop_assume!(linear.is_finite() && linear > 1e-300 && linear < 1e300);
        let expr = Expression::from_ast(tree);
        let b = Bindings::new().with(Var::N, LogValue::from_linear(n).unwrap());
        let got = expr.eval_log10(&b).unwrap().log10_magnitude();
        let want = linear.log10();
        prop_assert!((got - want).abs() <= 1e-9 * want.abs().max(1.0), "{} vs {}", got, want);
    }

    #[test]
    fn product_adds_log_magnitudes(a in -300.0f64..300.0, b in -300.0f64..300.0) {
        let expr = Expression::<f64>::parse("n * q", VarSet::QUANTUM_WORK).unwrap();
        let bind = Bindings::new()
            .with(Var::N, LogValue::from_log10(a))
            .with(Var::Q, LogValue::from_log10(b));
        prop_assert_eq!(expr.eval_log10(&bind).unwrap().log10_magnitude(), a + b);
    }

    #[test]
    fn sum_bounds(a in -300.0f64..300.0, b in -300.0f64..300.0) {
        let expr = Expression::<f64>::parse("n + q", VarSet::QUANTUM_WORK).unwrap();
        let bind = Bindings::new()
            .with(Var::N, LogValue::from_log10(a))
            .with(Var::Q, LogValue::from_log10(b));
        let s = expr.eval_log10(&bind).unwrap().log10_magnitude();
        let m = a.max(b);
        prop_assert!(s >= m);
        prop_assert!(s <= m + 2f64.log10() + 1e-12);
    }
}
