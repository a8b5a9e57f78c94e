use geo3_core::symexpr::{eval_numeric, Expr, FuncBindings};
use geo3_core::Chart;
use proptest::prelude::*;
use std::collections::BTreeMap;

const COORDS: [&str; 3] = ["t", "x", "y"];

fn chart() -> Chart {
    Chart::txy().with_func("a", &["y"]).unwrap().with_func("c", &[]).unwrap()
}

fn bindings() -> FuncBindings {
    FuncBindings::new()
        .expr("a", &["y".to_string()], &Expr::sin(Expr::coord("y")) + &Expr::coord("y").pow(2))
        .constant("c", 1.7)
}

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        Just(Expr::coord("t")),
        Just(Expr::coord("x")),
        Just(Expr::coord("y")),
        Just(Expr::func("a", &["y"])),
        Just(Expr::constant("c")),
        (-5i64..=5, 1i64..=4).prop_map(|(n, d)| Expr::rational(n, d)),
    ]
}

/// Expressions over the grammar whose denominators stay away from zero.
fn expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(3, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| &a + &b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| &a - &b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| &a * &b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| &a / &(&Expr::one() + &b.pow(2))),
            (inner.clone(), 2i32..=3).prop_map(|(a, e)| a.pow(e)),
            inner.clone().prop_map(Expr::sin),
            inner.prop_map(|a| Expr::func("a", &["y"]).derive("y") * a),
        ]
    })
}

fn coord() -> impl Strategy<Value = &'static str> {
    prop::sample::select(COORDS.to_vec())
}

fn point(p: [f64; 3]) -> BTreeMap<String, f64> {
    COORDS.iter().map(|c| c.to_string()).zip(p).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn derivatives_commute(e in expr(), u in coord(), v in coord()) {
        prop_assert_eq!(e.derive(u).derive(v), e.derive(v).derive(u));
    }

    #[test]
    fn product_rule(a in expr(), b in expr(), u in coord()) {
        let lhs = (&a * &b).derive(u);
        let rhs = &(&a.derive(u) * &b) + &(&a * &b.derive(u));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn self_difference_is_zero(e in expr()) {
        prop_assert!((&e - &e).is_zero());
        prop_assert!(geo3_core::symexpr::is_zero(&(&e - &e.clone())));
    }

    #[test]
    fn parse_inverts_print(e in expr()) {
        let back = chart().parse(&e.to_string()).unwrap();
        prop_assert_eq!(back, e);
    }

    #[test]
    fn derivative_matches_central_difference(
        e in expr(),
        k in 0usize..3,
        p in prop::array::uniform3(-1.0f64..1.0),
    ) {
        let f = bindings();
        let h = 1e-5;
        let exact = match eval_numeric(&e.derive(COORDS[k]), &point(p), &f) {
            Ok(v) if v.is_finite() => v,
            _ => return Ok(()),
        };
        let mut hi = p;
        let mut lo = p;
        hi[k] += h;
        lo[k] -= h;
        let fd = (eval_numeric(&e, &point(hi), &f).unwrap() - eval_numeric(&e, &point(lo), &f).unwrap()) / (2.0 * h);
        let scale = exact.abs().max(eval_numeric(&e, &point(p), &f).unwrap().abs()).max(1.0);
        prop_assert!((fd - exact).abs() <= 1e-6 * scale, "fd {fd} vs {exact} for {e}");
    }
}

#[test]
fn canonical_equality_is_semantic() {
    let c = chart();
    let lhs = c.parse("(x + y)^2 / (x + y) - x").unwrap();
    assert_eq!(lhs, Expr::coord("y"));
    let e = c.parse("diff(a(y), y, 2) * x - x * diff(diff(a(y), y), y)").unwrap();
    assert!(e.is_zero());
}

#[test]
fn parse_rejects_undeclared_and_malformed() {
    let c = chart();
    for bad in ["b(y)", "a(x, y)", "x +", "x ^ y", "diff(x, z)", "(x", "sin()"] {
        assert!(c.parse(bad).is_err(), "{bad} should not parse");
    }
}

#[test]
fn unary_minus_binds_looser_than_power() {
    let c = chart();
    assert_eq!(c.parse("-x^2").unwrap(), -&Expr::coord("x").pow(2));
    assert_eq!(c.parse("x^-2").unwrap(), Expr::coord("x").pow(-2));
}
