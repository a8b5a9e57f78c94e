//! Exact symbolic curvature and conformal invariants of three-dimensional
//! pseudo-Riemannian metrics.

pub mod analysis;
pub mod curvature;
pub mod error;
pub mod families;
pub mod golden;
pub mod identities;
pub mod numoracle;
pub mod symexpr;
pub mod report;
pub mod suite;
pub mod tensor;

pub use error::{Error, Result};
pub use symexpr::{Expr, Rational};
pub use tensor::{Chart, MetricChart, Signature, Slot, TensorField};
