//! Charts, metrics, tensor fields and the derivative/duality toolkit.

mod chart;
mod field;
mod metric;
mod ops;

pub use chart::Chart;
pub use field::{multi_indices, Slot, TensorField};
pub use metric::{build_metric, det3, identity3, inverse3, matmul3, MetricChart, Signature};
pub use ops::{
    covariant_derivative, gradient, hessian, hodge_dual_cotton, levi_civita,
    lie_derivative_metric, lie_derivative_metric_via_connection, metric_trace, musical,
    operator_product, operator_trace, Direction,
};
