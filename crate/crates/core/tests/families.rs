use geo3_core::curvature::is_walker_form;
use geo3_core::families::{
    cubic_metric, family6, phi_map, product_metric, pullback, strict_walker, t_map,
    t_map_profile, t_tilde_map, theorem_metric, verify_isometry, walker, CoordMap,
};
use geo3_core::report::Status;
use geo3_core::{Chart, Error, Expr, Rational};
use proptest::prelude::*;

fn y() -> Expr {
    Expr::coord("y")
}

fn poly_in(vars: &'static [&'static str]) -> impl Strategy<Value = Expr> {
    prop::collection::vec((-3i64..=3, prop::collection::vec(0i32..=2, vars.len())), 1..4).prop_map(move |terms| {
        terms
            .into_iter()
            .map(|(c, exps)| {
                vars.iter().zip(exps).fold(Expr::int(c), |acc, (v, e)| &acc * &Expr::coord(v).pow(e))
            })
            .sum()
    })
}

fn shear(p: Expr, q: Expr) -> CoordMap {
    let (t, x) = (Expr::coord("t"), Expr::coord("x"));
    CoordMap::new(&Chart::txy(), [&t + &p, &x + &q, y()]).unwrap()
}

#[test]
fn builders_produce_walker_form() {
    let a = Expr::func("a", &["y"]);
    let r = |n: i64| Rational::from_integer(n.into());
    for m in [
        walker(&Expr::func("f", &["t", "x", "y"])).unwrap(),
        strict_walker(&Expr::func("f", &["x", "y"])).unwrap(),
        theorem_metric(&a).unwrap(),
        family6(&r(-2), &a, &Expr::zero(), &y()).unwrap(),
        cubic_metric(&Expr::constant("kappa"), &a).unwrap(),
    ] {
        assert!(is_walker_form(&m), "{m:?}");
        assert_eq!(m.det(), &Expr::int(-1));
    }
    let flat = [[Expr::one(), Expr::zero()], [Expr::zero(), Expr::one()]];
    assert!(!is_walker_form(&product_metric(-1, &flat).unwrap()));
}

#[test]
fn invalid_parameters_are_rejected() {
    let zero = Rational::from_integer(0.into());
    let z = Expr::zero();
    let t = Expr::coord("t");
    assert!(matches!(family6(&zero, &z, &z, &z), Err(Error::InvalidParameter(_))));
    assert!(matches!(strict_walker(&t), Err(Error::InvalidParameter(_))));
    assert!(matches!(theorem_metric(&Expr::coord("x")), Err(Error::InvalidParameter(_))));
    assert!(matches!(t_tilde_map(&zero), Err(Error::InvalidParameter(_))));
    assert!(matches!(phi_map(2, &z, &z), Err(Error::InvalidParameter(_))));
    let flat = [[Expr::one(), Expr::zero()], [Expr::zero(), Expr::one()]];
    assert!(matches!(product_metric(0, &flat), Err(Error::InvalidParameter(_))));
}

#[test]
fn singular_map_is_rejected() {
    let m = walker(&Expr::coord("x")).unwrap();
    let collapse = CoordMap::new(&Chart::txy(), [Expr::coord("t"), Expr::zero(), y()]).unwrap();
    assert!(matches!(pullback(&m, &collapse), Err(Error::SingularJacobian)));
}

#[test]
fn phi_map_inverse_composes_to_identity() {
    let (al, be) = (Expr::constant("alpha"), Expr::constant("beta"));
    for eps in [1, -1] {
        let map = phi_map(eps, &al, &be).unwrap();
        let id = map.compose(map.inverse().unwrap());
        assert_eq!(id.comps(), CoordMap::identity(&Chart::txy()).comps());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pullback_respects_composition(
        p1 in poly_in(&["x", "y"]), q1 in poly_in(&["y"]),
        p2 in poly_in(&["x", "y"]), q2 in poly_in(&["y"]),
    ) {
        let f = &(&Expr::coord("x").pow(3) + &(&Expr::coord("t") * &y())) + &y().pow(2);
        let m = walker(&f).unwrap();
        let (a, b) = (shear(p1, q1), shear(p2, q2));
        let twice = pullback(&pullback(&m, &a).unwrap(), &b).unwrap();
        let once = pullback(&m, &a.compose(&b)).unwrap();
        prop_assert_eq!(twice.matrix(), once.matrix());
    }

    #[test]
    fn t_map_is_an_isometry(phi in poly_in(&["y"]), psi in poly_in(&["y"]), f in poly_in(&["x", "y"])) {
        let target = strict_walker(&f).unwrap();
        let source = strict_walker(&t_map_profile(&f, &phi, &psi)).unwrap();
        let check = verify_isometry(&source, &target, &t_map(&phi, &psi).unwrap()).unwrap();
        prop_assert_eq!(check.status, Status::Pass);
    }
}
