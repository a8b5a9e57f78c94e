use std::collections::BTreeMap;
use std::io::{self, Write};

use geo3_core::report::{Check, Status};
use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: &str = "geo3-report/1";

#[derive(Serialize)]
struct ResidualOut<'a> {
    component: &'a str,
    expr: &'a str,
}

#[derive(Serialize)]
struct NumericOut<'a> {
    quantity: &'a str,
    #[serde(rename = "max-rel-error")]
    max_rel_error: f64,
    tol: f64,
}

#[derive(Serialize)]
struct CheckOut<'a> {
    id: &'a str,
    status: Status,
    detail: &'a str,
    residuals: Vec<ResidualOut<'a>>,
    #[serde(rename = "numeric-errors")]
    numeric_errors: Vec<NumericOut<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    data: Option<&'a Value>,
}

#[derive(Serialize)]
struct ReportOut<'a> {
    schema: &'static str,
    command: &'a str,
    inputs: &'a BTreeMap<String, Value>,
    checks: Vec<CheckOut<'a>>,
    #[serde(rename = "wall-time")]
    wall_time: f64,
}

/// A check plus optional structured payload (tensor components, histograms).
pub struct Entry {
    pub check: Check,
    pub data: Option<Value>,
}

impl From<Check> for Entry {
    fn from(check: Check) -> Self {
        Entry { check, data: None }
    }
}

pub struct Outcome {
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    pub entries: Vec<Entry>,
}

impl Outcome {
    pub fn new(command: &str) -> Self {
        Outcome { command: command.to_string(), inputs: BTreeMap::new(), entries: Vec::new() }
    }

    pub fn input(&mut self, key: &str, v: impl Serialize) {
        self.inputs.insert(key.to_string(), serde_json::to_value(v).unwrap_or(Value::Null));
    }

    pub fn push(&mut self, e: impl Into<Entry>) {
        self.entries.push(e.into());
    }

    pub fn push_data(&mut self, check: Check, data: Value) {
        self.entries.push(Entry { check, data: Some(data) });
    }

    pub fn extend(&mut self, prefix: &str, checks: impl IntoIterator<Item = Check>) {
        for mut c in checks {
            c.id = format!("{prefix}{}", c.id);
            self.push(c);
        }
    }

    pub fn failed(&self) -> bool {
        self.entries.iter().any(|e| e.check.status == Status::Fail)
    }

    /// Orders entries by check id; equal ids keep their relative order.
    pub fn sort(&mut self) {
        self.entries.sort_by(|a, b| a.check.id.cmp(&b.check.id));
    }

    pub fn to_json(&self, wall_time: f64) -> String {
        let checks = self
            .entries
            .iter()
            .map(|e| CheckOut {
                id: &e.check.id,
                status: e.check.status,
                detail: &e.check.detail,
                residuals: e
                    .check
                    .residuals
                    .iter()
                    .map(|r| ResidualOut { component: &r.component, expr: &r.expr })
                    .collect(),
                numeric_errors: e
                    .check
                    .numeric_errors
                    .iter()
                    .map(|n| NumericOut { quantity: &n.quantity, max_rel_error: n.max_rel_error, tol: n.tol })
                    .collect(),
                data: e.data.as_ref(),
            })
            .collect();
        let out = ReportOut { schema: SCHEMA, command: &self.command, inputs: &self.inputs, checks, wall_time };
        serde_json::to_string_pretty(&out).expect("report serializes")
    }

    pub fn write_text(&self, w: &mut impl Write, wall_time: f64) -> io::Result<()> {
        let mut counts = [0usize; 3];
        for e in &self.entries {
            let c = &e.check;
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Warn => "WARN",
            };
            counts[c.status as usize] += 1;
            writeln!(w, "{tag} {}: {}", c.id, c.detail)?;
            for r in &c.residuals {
                writeln!(w, "    {} = {}", r.component, r.expr)?;
            }
            for n in &c.numeric_errors {
                writeln!(w, "    {}: max rel error {:.3e} (tol {:.0e})", n.quantity, n.max_rel_error, n.tol)?;
            }
            if let Some(d) = &e.data {
                write_data(w, d, 1)?;
            }
        }
        writeln!(
            w,
            "{}: {} checks, {} passed, {} failed, {} warnings ({wall_time:.2} s)",
            self.command,
            self.entries.len(),
            counts[Status::Pass as usize],
            counts[Status::Fail as usize],
            counts[Status::Warn as usize],
        )
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) => format!("({})", a.iter().map(scalar).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

fn is_zero(v: &Value) -> bool {
    v.as_f64() == Some(0.0)
}

/// Text rendering of check payloads; zero numeric entries are omitted.
fn write_data(w: &mut impl Write, d: &Value, depth: usize) -> io::Result<()> {
    let pad = "    ".repeat(depth);
    match d {
        Value::Object(m) => {
            for (k, v) in m {
                match v {
                    Value::Object(inner) if inner.values().all(|x| !x.is_object() && !x.is_array()) => {
                        let items: Vec<String> =
                            inner.iter().filter(|(_, x)| !is_zero(x)).map(|(a, x)| format!("{a} = {}", scalar(x))).collect();
                        if items.is_empty() {
                            writeln!(w, "{pad}{k}: all zero")?;
                        } else {
                            writeln!(w, "{pad}{k}:")?;
                            for i in items {
                                writeln!(w, "{pad}    {i}")?;
                            }
                        }
                    }
                    Value::Object(_) => {
                        writeln!(w, "{pad}{k}:")?;
                        write_data(w, v, depth + 1)?;
                    }
                    Value::Array(a) if a.iter().any(Value::is_object) => {
                        writeln!(w, "{pad}{k}:")?;
                        for item in a {
                            write_data(w, item, depth + 1)?;
                        }
                    }
                    other => writeln!(w, "{pad}{k} = {}", scalar(other))?,
                }
            }
        }
        Value::Array(a) => {
            for v in a {
                writeln!(w, "{pad}{}", scalar(v))?;
            }
        }
        other => writeln!(w, "{pad}{}", scalar(other))?,
    }
    Ok(())
}
