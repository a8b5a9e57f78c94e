use geo3_core::curvature::CurvaturePack;
use geo3_core::families::{strict_walker, theorem_metric};
use geo3_core::numoracle::{
    compare, compare_with_pack, fd_ricci, point_map, sample_points, CompareOptions, NumericMetric,
};
use geo3_core::symexpr::FuncBindings;
use geo3_core::{Error, Expr};

fn sine_metric() -> geo3_core::MetricChart {
    theorem_metric(&Expr::sin(Expr::coord("y"))).unwrap()
}

#[test]
fn ricci_error_shrinks_quadratically() {
    let xy = &Expr::coord("x") + &Expr::coord("y");
    let m = strict_walker(&Expr::sin(xy)).unwrap();
    let pack = CurvaturePack::compute(&m);
    let funcs = FuncBindings::new();
    let nm = NumericMetric::from_metric(&m, &funcs);
    let p = [0.3, 1.1, -0.7];
    let pm = point_map(m.chart().coords(), &p);
    let err = |h: f64| {
        let r = fd_ricci(&nm, &p, h).unwrap();
        let mut e = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                e = e.max((pack.ricci.get(&[i, j]).eval(&pm, &funcs).unwrap() - r[i][j]).abs());
            }
        }
        e
    };
    let ratio = err(0.1) / err(0.05);
    assert!((3.5..4.5).contains(&ratio), "ratio {ratio}, errors {} {}", err(0.1), err(0.05));
}

#[test]
fn agrees_on_sampled_points() {
    let m = sine_metric();
    let funcs = FuncBindings::new();
    let nm = NumericMetric::from_metric(&m, &funcs);
    let pts = sample_points(20, 7, -2.0, 2.0, 0.1);
    let rep = compare(&m, &funcs, &nm, &pts, &CompareOptions::default()).unwrap();
    assert!(rep.pass, "{rep:?}");
    assert_eq!(rep.points, 20);
    assert_eq!(rep.quantities.len(), 4);
}

#[test]
fn unbound_function_is_reported() {
    let m = theorem_metric(&Expr::func("a", &["y"])).unwrap();
    let funcs = FuncBindings::new();
    let nm = NumericMetric::new(|_| Ok([[0.0, 0.0, 1.0], [0.0, 1.0, 0.0], [1.0, 0.0, 0.0]]));
    let pts = sample_points(2, 1, -1.0, 1.0, 0.0);
    let err = compare(&m, &funcs, &nm, &pts, &CompareOptions::default()).unwrap_err();
    assert_eq!(err, Error::MissingBinding("a".into()));
}

#[test]
fn perturbed_ricci_is_detected() {
    let m = sine_metric();
    let funcs = FuncBindings::new();
    let nm = NumericMetric::from_metric(&m, &funcs);
    let mut pack = CurvaturePack::compute(&m);
    let bumped = pack.ricci.get(&[2, 2]) + &(&Expr::coord("x") / &Expr::int(100));
    pack.ricci.set(&[2, 2], bumped);
    let pts = sample_points(10, 3, -2.0, 2.0, 0.1);
    let rep = compare_with_pack(&m, &pack, &funcs, &nm, &pts, &CompareOptions::default()).unwrap();
    assert!(!rep.pass);
    let ricci = rep.quantities.iter().find(|q| q.quantity == "ricci").unwrap();
    assert!(!ricci.pass);
    let gamma = rep.quantities.iter().find(|q| q.quantity == "christoffel").unwrap();
    assert!(gamma.pass);
}

#[test]
fn sampling_is_deterministic_and_avoids_the_axis() {
    let a = sample_points(50, 42, -3.0, 3.0, 0.5);
    assert_eq!(a, sample_points(50, 42, -3.0, 3.0, 0.5));
    assert_ne!(a, sample_points(50, 43, -3.0, 3.0, 0.5));
    assert!(a.iter().all(|p| p[1].abs() >= 0.5 && p.iter().all(|v| (-3.0..=3.0).contains(v))));
}
