use geo3_core::curvature::{
    compare_systems, cotton2, cotton3, parallel_cotton_system, ricci, riemann, scalar,
    CurvaturePack, Membership,
};
use geo3_core::families::{product_metric, strict_walker, theorem_metric, walker};
use geo3_core::{golden, Error, Expr};

fn conformal_plane(factor: Expr) -> [[Expr; 2]; 2] {
    [[factor.clone(), Expr::zero()], [Expr::zero(), factor]]
}

#[test]
fn unit_sphere_and_hyperbolic_plane_scalars() {
    let (x, y) = (Expr::coord("x"), Expr::coord("y"));
    let sphere = &Expr::int(4) / &(&(&Expr::one() + &x.pow(2)) + &y.pow(2)).pow(2);
    let m = product_metric(1, &conformal_plane(sphere)).unwrap();
    assert_eq!(scalar(&m), Expr::int(2));
    let m = product_metric(-1, &conformal_plane(x.pow(-2))).unwrap();
    assert_eq!(scalar(&m), Expr::int(-2));
}

#[test]
fn flat_metric_has_no_curvature() {
    let m = walker(&Expr::zero()).unwrap();
    let p = CurvaturePack::compute(&m);
    assert!(p.gamma.is_zero() && p.riemann.is_zero() && p.cotton3.is_zero());
}

#[test]
fn riemann_pair_symmetries_on_generic_walker() {
    let m = golden::walker_metric();
    let r = riemann(&m);
    assert!(r.is_antisymmetric(0, 1) && r.is_antisymmetric(2, 3));
}

#[test]
fn walker_ricci_matches_reference() {
    let m = golden::walker_metric();
    let rho = ricci(&m);
    for (idx, want) in golden::ricci() {
        assert_eq!(rho.get(&idx), &want, "{idx:?}");
    }
}

#[test]
fn theorem_metric_cotton() {
    let m = theorem_metric(&Expr::func("a", &["y"])).unwrap();
    let c = cotton2(&m).unwrap();
    assert_eq!(c.get(&[2, 2]), &Expr::int(-3));
    assert_eq!(c.nonzero().len(), 1);
    assert!(!cotton3(&m).is_zero());
}

#[test]
fn parallel_cotton_rejects_non_walker() {
    let x = Expr::coord("x");
    let m = product_metric(1, &conformal_plane(x.pow(-2))).unwrap();
    assert!(matches!(parallel_cotton_system(&m), Err(Error::NotWalker(_))));
}

#[test]
fn strict_walker_system_is_nontrivial_for_quartic() {
    let m = strict_walker(&Expr::coord("x").pow(4)).unwrap();
    let sys = parallel_cotton_system(&m).unwrap();
    assert!(!sys.is_empty());
}

#[test]
fn system_comparison_tiers() {
    let f = Expr::func("f", &["t", "x", "y"]);
    let u = f.derive("t");
    let v = f.derive("x");
    let computed = vec![&u + &v, &u - &v];
    let reference = vec![u.clone(), &(&f * &u) + &v];
    let c = compare_systems(&computed, &reference);
    assert_eq!(c.forward[0], Membership::RationalConstant);
    assert!(matches!(c.forward[1], Membership::AtomMultiplier(_)));
    assert!(!c.rational_equivalent());
    let c = compare_systems(std::slice::from_ref(&u), std::slice::from_ref(&v));
    assert_eq!(c.forward[0], Membership::Outside);
}
