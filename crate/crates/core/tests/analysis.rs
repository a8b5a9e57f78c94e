use geo3_core::analysis::{
    ecs_predicate, jordan_type, nilpotency_index, soliton_residual, EcsClass, JordanTag,
    SolitonField, SolitonKind, SolitonSpec,
};
use geo3_core::curvature::{cotton2, cotton_operator, ricci_operator};
use geo3_core::families::theorem_metric;
use geo3_core::tensor::{gradient, lie_derivative_metric};
use geo3_core::{Error, Expr, Slot, TensorField};
use proptest::prelude::*;

fn y() -> Expr {
    Expr::coord("y")
}

fn poly_y() -> impl Strategy<Value = Expr> {
    prop::collection::vec(-5i64..=5, 1..5)
        .prop_map(|cs| cs.into_iter().enumerate().map(|(k, c)| &Expr::int(c) * &y().pow(k as i32)).sum())
}

fn mul(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|k| a[i][k] * b[k][j]).sum()))
}

/// `P A P⁻¹` for a unit upper-triangular `P` and its exact inverse.
fn conjugate(a: &[[f64; 3]; 3], u: [f64; 3]) -> [[f64; 3]; 3] {
    let p = [[1.0, u[0], u[1]], [0.0, 1.0, u[2]], [0.0, 0.0, 1.0]];
    let pinv = [[1.0, -u[0], u[0] * u[2] - u[1]], [0.0, 1.0, -u[2]], [0.0, 0.0, 1.0]];
    mul(&mul(&p, a), &pinv)
}

fn samples() -> Vec<([[f64; 3]; 3], JordanTag)> {
    vec![
        ([[1.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, -3.0]], JordanTag::RealDiagonalizable),
        ([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 2.0]], JordanTag::ComplexPair),
        ([[0.0, 1.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]], JordanTag::Nilpotent2),
        ([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0]], JordanTag::Nilpotent3),
        ([[2.0, 1.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 5.0]], JordanTag::JordanBlockNonzeroEigenvalue),
    ]
}

#[test]
fn jordan_reference_tags() {
    for (a, tag) in samples() {
        assert_eq!(jordan_type(&a, 1e-9).unwrap().tag, tag);
    }
}

#[test]
fn jordan_near_threshold_is_ambiguous() {
    let a = [[5e-9, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]];
    assert!(matches!(jordan_type(&a, 1e-9), Err(Error::Ambiguous { .. })));
    assert!(matches!(jordan_type(&a, 0.0), Err(Error::InvalidParameter(_))));
}

#[test]
fn operators_of_theorem_metric_are_two_step_nilpotent() {
    let m = theorem_metric(&Expr::func("a", &["y"])).unwrap();
    assert_eq!(nilpotency_index(&ricci_operator(&m)).unwrap(), Some(2));
    assert_eq!(nilpotency_index(&cotton_operator(&m).unwrap()).unwrap(), Some(2));
    assert_eq!(nilpotency_index(&TensorField::zeros(vec![Slot::Up, Slot::Down])).unwrap(), Some(1));
    let id = TensorField::from_fn(vec![Slot::Up, Slot::Down], |i| Expr::int((i[0] == i[1]) as i64));
    assert_eq!(nilpotency_index(&id).unwrap(), None);
    assert!(nilpotency_index(&TensorField::zeros(vec![Slot::Down, Slot::Down])).is_err());
}

#[test]
fn soliton_spec_validation() {
    let v = TensorField::vector([Expr::one(), Expr::zero(), Expr::zero()]);
    let p = y().pow(2);
    let vec = |v: &TensorField| SolitonField::Vector(v.clone());
    assert!(matches!(
        SolitonSpec::new(SolitonKind::Cotton, vec(&v), Expr::coord("x")),
        Err(Error::NonConstantLambda(_))
    ));
    assert!(SolitonSpec::new(SolitonKind::Killing, vec(&v), Expr::one()).is_err());
    assert!(SolitonSpec::new(SolitonKind::GradientCotton, vec(&v), Expr::zero()).is_err());
    assert!(SolitonSpec::new(SolitonKind::Ricci, SolitonField::Potential(p), Expr::zero()).is_err());
    let w = TensorField::covector([Expr::one(), Expr::zero(), Expr::zero()]);
    assert!(matches!(SolitonSpec::new(SolitonKind::Homothetic, vec(&w), Expr::zero()), Err(Error::Valence { .. })));
    assert_eq!(SolitonKind::parse("gradient-ricci"), Some(SolitonKind::GradientRicci));
    assert_eq!(SolitonKind::parse("nope"), None);
}

#[test]
fn cotton_soliton_fields_differ_by_homothetic_field() {
    // 𝔞 = α/(4β − λy)⁴ carries a Cotton soliton with constant λ; ∇(¾y²) is one with λ = 0
    let k = Expr::constant;
    let (al, be, la) = (k("alpha"), k("beta"), k("lambda"));
    let a = &al / &(&(&Expr::int(4) * &be) - &(&la * &y())).pow(4);
    let m = theorem_metric(&a).unwrap();
    let (t, x) = (Expr::coord("t"), Expr::coord("x"));
    let q = Expr::rational;
    let x1 = TensorField::vector([
        &(&(&q(5, 4) * &la) * &t) + &(&k("kappa_t") + &(&q(3, 2) * &y())),
        &(&q(1, 2) * &la) * &x,
        &be - &(&(&q(1, 4) * &la) * &y()),
    ]);
    let spec = SolitonSpec::new(SolitonKind::Cotton, SolitonField::Vector(x1.clone()), la.clone()).unwrap();
    assert!(soliton_residual(&m, &spec).unwrap().0.is_zero());
    let phi = &q(3, 4) * &y().pow(2);
    let spec = SolitonSpec::new(SolitonKind::GradientCotton, SolitonField::Potential(phi.clone()), Expr::zero()).unwrap();
    assert!(soliton_residual(&m, &spec).unwrap().0.is_zero());
    let diff = &x1 - &gradient(&phi, &m);
    let l = lie_derivative_metric(&diff, &m).unwrap();
    assert_eq!(l, m.tensor().scale(&la));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn jordan_tag_is_similarity_invariant(idx in 0usize..5, u in prop::array::uniform3(-2.0f64..2.0)) {
        let (a, tag) = samples()[idx];
        prop_assert_eq!(jordan_type(&conjugate(&a, u), 1e-9).unwrap().tag, tag);
    }

    #[test]
    fn theorem_family_is_ecs(a in poly_y()) {
        let m = theorem_metric(&a).unwrap();
        let (class, rep) = ecs_predicate(&m);
        prop_assert_eq!(class, EcsClass::Ecs);
        prop_assert!(rep.passed());
    }

    #[test]
    fn cotton_minus_killing_residual(a in poly_y(), c in prop::array::uniform3(poly_y()), l in -3i64..=3) {
        let m = theorem_metric(&a).unwrap();
        let x = TensorField::vector(c);
        let lambda = Expr::int(l);
        let cot = SolitonSpec::new(SolitonKind::Cotton, SolitonField::Vector(x.clone()), lambda.clone()).unwrap();
        let kil = SolitonSpec::new(SolitonKind::Killing, SolitonField::Vector(x), Expr::zero()).unwrap();
        let diff = &soliton_residual(&m, &cot).unwrap().0 - &soliton_residual(&m, &kil).unwrap().0;
        prop_assert_eq!(diff, &cotton2(&m).unwrap() - &m.tensor().scale(&lambda));
    }
}
