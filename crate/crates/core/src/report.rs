//! Structured verification outcomes shared by the library and the CLI.

use serde::Serialize;

use crate::tensor::{Chart, TensorField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Warn,
}

/// A nonzero component that should have vanished.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Residual {
    pub component: String,
    pub expr: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NumericError {
    pub quantity: String,
    pub max_rel_error: f64,
    pub tol: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub id: String,
    pub status: Status,
    pub detail: String,
    pub residuals: Vec<Residual>,
    pub numeric_errors: Vec<NumericError>,
}

impl Check {
    pub fn new(id: impl Into<String>, status: Status, detail: impl Into<String>) -> Self {
        Check {
            id: id.into(),
            status,
            detail: detail.into(),
            residuals: Vec::new(),
            numeric_errors: Vec::new(),
        }
    }

    pub fn pass(id: impl Into<String>, detail: impl Into<String>) -> Self {
        Check::new(id, Status::Pass, detail)
    }

    pub fn fail(id: impl Into<String>, detail: impl Into<String>) -> Self {
        Check::new(id, Status::Fail, detail)
    }

    pub fn warn(id: impl Into<String>, detail: impl Into<String>) -> Self {
        Check::new(id, Status::Warn, detail)
    }

    pub fn expect(id: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        Check::new(id, if ok { Status::Pass } else { Status::Fail }, detail)
    }

    /// Passes iff every component of `t` is zero; failures list the
    /// nonzero components.
    pub fn vanishing(id: impl Into<String>, detail: impl Into<String>, t: &TensorField, chart: &Chart) -> Self {
        let residuals = tensor_residuals(t, chart);
        let mut c = Check::expect(id, residuals.is_empty(), detail);
        c.residuals = residuals;
        c
    }

    pub fn with_residuals(mut self, r: Vec<Residual>) -> Self {
        self.residuals = r;
        self
    }

    pub fn with_numeric(mut self, e: NumericError) -> Self {
        self.numeric_errors.push(e);
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

pub fn tensor_residuals(t: &TensorField, chart: &Chart) -> Vec<Residual> {
    t.nonzero()
        .into_iter()
        .map(|(idx, e)| Residual {
            component: TensorField::label(&idx, chart),
            expr: e.to_string(),
        })
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn get(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }
}

impl From<Check> for Report {
    fn from(c: Check) -> Self {
        Report { checks: vec![c] }
    }
}
