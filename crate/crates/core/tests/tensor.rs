use geo3_core::families::theorem_metric;
use geo3_core::suite::identity_metrics;
use geo3_core::tensor::{
    covariant_derivative, hessian, hodge_dual_cotton, identity3, lie_derivative_metric,
    lie_derivative_metric_via_connection, matmul3, metric_trace, musical, Direction,
};
use geo3_core::{curvature, Error, Expr, Slot, TensorField};
use proptest::prelude::*;

fn monomial() -> impl Strategy<Value = Expr> {
    (-4i64..=4, 0i32..=2, 0i32..=2, 0i32..=2).prop_map(|(c, a, b, d)| {
        &(&(&Expr::int(c) * &Expr::coord("t").pow(a)) * &Expr::coord("x").pow(b)) * &Expr::coord("y").pow(d)
    })
}

fn poly() -> impl Strategy<Value = Expr> {
    prop::collection::vec(monomial(), 1..4).prop_map(|v| v.into_iter().sum())
}

#[test]
fn inverse_and_metricity_on_all_metrics() {
    for (name, m) in identity_metrics() {
        assert_eq!(matmul3(m.matrix(), m.inverse()), identity3(), "{name}");
        assert!(covariant_derivative(&m.tensor(), &m).is_zero(), "{name}");
        let g = curvature::christoffel(&m);
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    assert_eq!(g.get(k, i, j), g.get(k, j, i), "{name}");
                }
            }
        }
    }
}

#[test]
fn cotton_dual_is_symmetric_and_trace_free() {
    for (name, m) in identity_metrics() {
        let c = curvature::cotton3(&m);
        let Ok(c2) = hodge_dual_cotton(&c, &m) else {
            continue;
        };
        assert!(c2.is_symmetric(0, 1), "{name}");
        assert!(metric_trace(&c2, 0, 1, &m).unwrap().get(&[]).is_zero(), "{name}");
    }
}

#[test]
fn hessian_of_constant_vanishes() {
    let m = theorem_metric(&Expr::func("a", &["y"])).unwrap();
    assert!(hessian(&Expr::rational(7, 3), &m).is_zero());
}

#[test]
fn raise_then_lower_is_identity() {
    let m = theorem_metric(&Expr::func("a", &["y"])).unwrap();
    let w = TensorField::covector([Expr::coord("x"), Expr::one(), Expr::coord("t").pow(2)]);
    let up = musical(&w, 0, Direction::Raise, &m).unwrap();
    assert_eq!(musical(&up, 0, Direction::Lower, &m).unwrap(), w);
    assert!(matches!(musical(&w, 0, Direction::Lower, &m), Err(Error::InvalidSlot { .. })));
}

#[test]
fn wrong_valence_is_rejected() {
    let m = theorem_metric(&Expr::zero()).unwrap();
    let w = TensorField::covector([Expr::one(), Expr::zero(), Expr::zero()]);
    assert!(matches!(lie_derivative_metric(&w, &m), Err(Error::Valence { .. })));
    let sym = TensorField::covariant(3, |_| Expr::one());
    assert!(matches!(hodge_dual_cotton(&sym, &m), Err(Error::NotAntisymmetric)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lie_derivative_two_paths(a in poly(), b in poly(), c in poly()) {
        let m = theorem_metric(&Expr::func("a", &["y"])).unwrap();
        let x = TensorField::vector([a, b, c]);
        prop_assert_eq!(
            lie_derivative_metric(&x, &m).unwrap(),
            lie_derivative_metric_via_connection(&x, &m).unwrap()
        );
    }

    #[test]
    fn hessian_is_symmetric(phi in poly()) {
        let m = theorem_metric(&Expr::func("a", &["y"])).unwrap();
        prop_assert!(hessian(&phi, &m).is_symmetric(0, 1));
    }

    #[test]
    fn covariant_derivative_is_leibniz(a in poly(), b in poly()) {
        let m = theorem_metric(&Expr::coord("y").pow(2)).unwrap();
        let u = TensorField::covector([a.clone(), Expr::zero(), b.clone()]);
        let v = TensorField::vector([b, a, Expr::one()]);
        let uv = u.tensor(&v);
        let lhs = covariant_derivative(&uv, &m);
        let du = covariant_derivative(&u, &m);
        let dv = covariant_derivative(&v, &m);
        let rhs = TensorField::from_fn(vec![Slot::Down, Slot::Down, Slot::Up], |i| {
            &(du.get(&[i[0], i[1]]) * v.get(&[i[2]])) + &(u.get(&[i[1]]) * dv.get(&[i[0], i[2]]))
        });
        prop_assert_eq!(lhs, rhs);
    }
}
