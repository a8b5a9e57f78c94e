//! Fixtures shared by the benchmarks.

use geo3_core::families::{theorem_metric, walker};
use geo3_core::numoracle::{sample_points, NumericMetric, Point};
use geo3_core::symexpr::FuncBindings;
use geo3_core::{Expr, MetricChart};

/// Walker metric with an opaque profile `f(t, x, y)`.
pub fn generic_walker() -> MetricChart {
    walker(&Expr::func("f", &["t", "x", "y"])).expect("walker metric")
}

/// Main-family metric with `𝔞 = sin y + y²`, fully numeric.
pub fn concrete_theorem() -> MetricChart {
    let y = Expr::coord("y");
    theorem_metric(&(&Expr::sin(y.clone()) + &y.pow(2))).expect("theorem metric")
}

pub fn oracle_inputs(n: usize) -> (MetricChart, FuncBindings, NumericMetric, Vec<Point>) {
    let m = concrete_theorem();
    let funcs = FuncBindings::new();
    let nm = NumericMetric::from_metric(&m, &funcs);
    (m, funcs, nm, sample_points(n, 1, -2.0, 2.0, 0.1))
}
