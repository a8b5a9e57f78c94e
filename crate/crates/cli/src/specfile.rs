//! Line-oriented metric spec files.
//!
//! ```text
//! [chart]
//! coords = t, x, y
//!
//! [functions]
//! a(y)
//! alpha
//!
//! [metric]
//! signature = lorentzian
//! g[0][2] = 1
//! g[1][1] = 1
//! g[2][2] = x^3 + a(y)*x
//!
//! [field]
//! X = (t, 0, -y)
//!
//! [bindings]
//! a(y) = sin(y)
//! alpha = 3/2
//! ```
//!
//! `#` starts a comment. Inside `[metric]`, `metric = theorem(a)`,
//! `walker(f)`, `family6(k, A, B, C)` and `product(sign, g11, g12, g22)`
//! replace the component lines.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use geo3_core::analysis::SolitonField;
use geo3_core::families::{self, CoordMap};
use geo3_core::symexpr::FuncBindings;
use geo3_core::tensor::build_metric;
use geo3_core::{Chart, Expr, MetricChart, Signature, TensorField};

#[derive(Debug, Clone, PartialEq)]
pub struct SpecError {
    pub file: String,
    pub line: usize,
    pub msg: String,
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}: {}", self.file, self.msg)
        } else {
            write!(f, "{}:{}: {}", self.file, self.line, self.msg)
        }
    }
}

impl std::error::Error for SpecError {}

#[derive(Clone, Debug)]
pub struct MapBlock {
    pub comps: [Expr; 3],
    pub inverse: Option<[Expr; 3]>,
    /// `c^2 = v` relations on constants.
    pub relations: Vec<(Expr, Expr)>,
}

#[derive(Clone, Debug)]
pub struct SpecFile {
    pub path: String,
    pub chart: Chart,
    pub metric: Option<MetricChart>,
    pub field: Option<SolitonField>,
    pub map: Option<MapBlock>,
    pub bindings: FuncBindings,
    pub bound: BTreeSet<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Section {
    None,
    Chart,
    Functions,
    Metric,
    Field,
    Map,
    Bindings,
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

/// Splits on commas that are not nested inside brackets.
fn split_top(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

/// `name(args)` with the parenthesis closing at the end of `s`.
fn call(s: &str) -> Option<(&str, &str)> {
    let open = s.find('(')?;
    let inner = s[open + 1..].strip_suffix(')')?;
    Some((s[..open].trim(), inner))
}

fn tuple3(s: &str) -> Option<[&str; 3]> {
    let inner = s.trim().strip_prefix('(')?.strip_suffix(')')?;
    let parts = split_top(inner);
    <[&str; 3]>::try_from(parts).ok()
}

/// `g[i][j]` or `X[i]` style indices.
fn indices(s: &str, head: &str) -> Option<Vec<usize>> {
    let rest = s.strip_prefix(head)?;
    let mut out = Vec::new();
    for part in rest.split('[').skip(1) {
        out.push(part.strip_suffix(']')?.trim().parse().ok()?);
    }
    if rest.starts_with('[') && !out.is_empty() {
        Some(out)
    } else {
        None
    }
}

struct Parser<'a> {
    file: &'a str,
    line: usize,
    chart: Chart,
    signature: Option<(Signature, usize)>,
    entries: Vec<(usize, usize, Expr)>,
    shortcut: Option<(String, usize)>,
    metric_line: usize,
    field: BTreeMap<usize, Expr>,
    potential: Option<Expr>,
    field_line: usize,
    map: BTreeMap<usize, Expr>,
    inverse: BTreeMap<usize, Expr>,
    relations: Vec<(Expr, Expr)>,
    map_line: usize,
    bindings: Vec<(String, String, usize)>,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> SpecError {
        SpecError { file: self.file.to_string(), line: self.line, msg: msg.into() }
    }

    fn err_at(&self, line: usize, msg: impl Into<String>) -> SpecError {
        SpecError { file: self.file.to_string(), line, msg: msg.into() }
    }

    fn expr(&self, src: &str) -> Result<Expr, SpecError> {
        self.chart.parse(src).map_err(|e| self.err(e.to_string()))
    }

    fn key_value<'s>(&self, line: &'s str) -> Result<(&'s str, &'s str), SpecError> {
        line.split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| self.err(format!("expected `key = value`, got `{line}`")))
    }

    fn chart_line(&mut self, line: &str) -> Result<(), SpecError> {
        let (k, v) = self.key_value(line)?;
        if k != "coords" {
            return Err(self.err(format!("unknown chart key `{k}`")));
        }
        let names = split_top(v);
        let names: [&str; 3] = names
            .try_into()
            .map_err(|_| self.err("exactly three coordinates are required"))?;
        if self.chart.funcs().next().is_some() {
            return Err(self.err("[chart] must come before [functions]"));
        }
        self.chart = Chart::new(names).map_err(|e| self.err(e.to_string()))?;
        Ok(())
    }

    fn function_line(&mut self, line: &str) -> Result<(), SpecError> {
        let (name, params) = match call(line) {
            Some((n, p)) if p.trim().is_empty() => (n, Vec::new()),
            Some((n, p)) => (n, split_top(p)),
            None => (line, Vec::new()),
        };
        self.chart.declare(name, &params).map_err(|e| self.err(e.to_string()))
    }

    fn metric_line(&mut self, line: &str) -> Result<(), SpecError> {
        let (k, v) = self.key_value(line)?;
        self.metric_line = self.metric_line.max(self.line);
        if k == "signature" {
            let sig = match v {
                "lorentzian" => Signature::LORENTZIAN,
                "riemannian" => Signature::RIEMANNIAN,
                n => Signature {
                    negative: n
                        .parse()
                        .ok()
                        .filter(|n| *n <= 3)
                        .ok_or_else(|| self.err(format!("unknown signature `{v}`")))?,
                },
            };
            self.signature = Some((sig, self.line));
        } else if k == "metric" {
            self.shortcut = Some((v.to_string(), self.line));
        } else if let Some(idx) = indices(k, "g") {
            let [i, j] = idx[..] else {
                return Err(self.err("metric entries take two indices"));
            };
            if i > 2 || j > 2 {
                return Err(self.err(format!("index ({i},{j}) out of range")));
            }
            let e = self.expr(v)?;
            self.entries.push((i, j, e));
        } else {
            return Err(self.err(format!("unknown metric key `{k}`")));
        }
        Ok(())
    }

    fn field_line(&mut self, line: &str) -> Result<(), SpecError> {
        let (k, v) = self.key_value(line)?;
        self.field_line = self.field_line.max(self.line);
        if k == "phi" {
            self.potential = Some(self.expr(v)?);
        } else if k == "X" {
            let parts = tuple3(v).ok_or_else(|| self.err("expected `X = (X0, X1, X2)`"))?;
            for (i, p) in parts.iter().enumerate() {
                let e = self.expr(p)?;
                self.field.insert(i, e);
            }
        } else if let Some(idx) = indices(k, "X") {
            let [i] = idx[..] else {
                return Err(self.err("vector components take one index"));
            };
            if i > 2 {
                return Err(self.err(format!("index {i} out of range")));
            }
            let e = self.expr(v)?;
            self.field.insert(i, e);
        } else {
            return Err(self.err(format!("unknown field key `{k}`")));
        }
        Ok(())
    }

    fn map_line(&mut self, line: &str) -> Result<(), SpecError> {
        let (k, v) = self.key_value(line)?;
        self.map_line = self.map_line.max(self.line);
        if let Some(c) = k.strip_suffix("^2") {
            let lhs = self.expr(c)?;
            if lhs.as_atom().is_none() || !lhs.coords().is_empty() {
                return Err(self.err("relations must have the form `c^2 = value` for a constant c"));
            }
            let rhs = self.expr(v)?;
            self.relations.push((lhs, rhs));
            return Ok(());
        }
        if k != "map" && k != "inverse" {
            return Err(self.err(format!("unknown map key `{k}`")));
        }
        let parts = tuple3(v).ok_or_else(|| self.err(format!("expected `{k} = (e0, e1, e2)`")))?;
        let exprs = parts.map(|p| self.expr(p));
        let target = if k == "map" { &mut self.map } else { &mut self.inverse };
        for (i, e) in exprs.into_iter().enumerate() {
            target.insert(i, e?);
        }
        Ok(())
    }

    fn binding_line(&mut self, line: &str) -> Result<(), SpecError> {
        let (k, v) = self.key_value(line)?;
        let name = call(k).map_or(k, |(n, _)| n);
        self.bindings.push((name.to_string(), v.to_string(), self.line));
        Ok(())
    }

    fn shortcut_metric(&self, src: &str, line: usize) -> Result<MetricChart, SpecError> {
        let err = |m: String| self.err_at(line, m);
        let (name, inner) = call(src).ok_or_else(|| err(format!("cannot read metric shortcut `{src}`")))?;
        if self.chart.coords() != Chart::txy().coords() {
            return Err(err("metric shortcuts use the chart (t, x, y)".into()));
        }
        let args: Vec<Expr> = split_top(inner)
            .into_iter()
            .map(|a| self.chart.parse(a).map_err(|e| err(e.to_string())))
            .collect::<Result<_, _>>()?;
        let arity = |n: &[usize]| {
            if n.contains(&args.len()) {
                Ok(())
            } else {
                Err(err(format!("`{name}` takes {n:?} arguments, got {}", args.len())))
            }
        };
        let core = |r: geo3_core::Result<MetricChart>| r.map_err(|e| err(e.to_string()));
        match name {
            "theorem" => {
                arity(&[1])?;
                core(families::theorem_metric(&args[0]))
            }
            "walker" => {
                arity(&[1])?;
                core(families::walker(&args[0]))
            }
            "family6" => {
                arity(&[4])?;
                let k = args[0]
                    .as_rational()
                    .ok_or_else(|| err("κ must be a rational number".into()))?;
                core(families::family6(&k, &args[1], &args[2], &args[3]))
            }
            "product" => {
                arity(&[3, 4])?;
                let sign = match args[0].as_rational().map(|q| q.to_string()).as_deref() {
                    Some("1") => 1,
                    Some("-1") => -1,
                    _ => return Err(err("the sign must be 1 or -1".into())),
                };
                let (a, b, c, d) = match &args[1..] {
                    [a, b, c] => (a, b, b, c),
                    [a, b, c, d] => (a, b, c, d),
                    _ => unreachable!(),
                };
                core(families::product_metric(sign, &[[a.clone(), b.clone()], [c.clone(), d.clone()]]))
            }
            _ => Err(err(format!("unknown metric shortcut `{name}`"))),
        }
    }

    fn finish(self) -> Result<SpecFile, SpecError> {
        let metric = match (&self.shortcut, self.entries.is_empty()) {
            (Some(_), false) => {
                return Err(self.err_at(self.metric_line, "use either a metric shortcut or g[i][j] entries"))
            }
            (Some((src, line)), true) => {
                let m = self.shortcut_metric(src, *line)?;
                let chart = self.chart.merged(m.chart()).map_err(|e| self.err_at(*line, e.to_string()))?;
                let m = m.with_chart(chart).map_err(|e| self.err_at(*line, e.to_string()))?;
                Some(match self.signature {
                    Some((sig, l)) if sig != m.signature() => {
                        return Err(self.err_at(l, format!("`{src}` is {}", m.signature())))
                    }
                    _ => m,
                })
            }
            (None, false) => Some(self.component_metric()?),
            (None, true) => None,
        };
        let chart = metric.as_ref().map_or_else(|| self.chart.clone(), |m| m.chart().clone());
        let field = match (self.potential.clone(), self.field.is_empty()) {
            (Some(_), false) => {
                return Err(self.err_at(self.field_line, "a [field] block holds either X or phi, not both"))
            }
            (Some(p), true) => Some(SolitonField::Potential(p)),
            (None, false) => {
                let c = self.complete(&self.field, self.field_line, "X")?;
                Some(SolitonField::Vector(TensorField::vector(c)))
            }
            (None, true) => None,
        };
        let map = if self.map.is_empty() {
            if !self.inverse.is_empty() || !self.relations.is_empty() {
                return Err(self.err_at(self.map_line, "[map] needs `map = (...)`"));
            }
            None
        } else {
            let comps = self.complete(&self.map, self.map_line, "map")?;
            let inverse = if self.inverse.is_empty() {
                None
            } else {
                Some(self.complete(&self.inverse, self.map_line, "inverse")?)
            };
            Some(MapBlock { comps, inverse, relations: self.relations.clone() })
        };
        let (bindings, bound) = self.bindings(&chart)?;
        Ok(SpecFile {
            path: self.file.to_string(),
            chart,
            metric,
            field,
            map,
            bindings,
            bound,
        })
    }

    fn complete(&self, m: &BTreeMap<usize, Expr>, line: usize, what: &str) -> Result<[Expr; 3], SpecError> {
        let mut out: [Expr; 3] = Default::default();
        for i in 0..3 {
            out[i] = m
                .get(&i)
                .cloned()
                .ok_or_else(|| self.err_at(line, format!("{what}[{i}] is missing")))?;
        }
        Ok(out)
    }

    fn component_metric(&self) -> Result<MetricChart, SpecError> {
        let line = self.metric_line;
        let probe = build_metric(&self.chart, &self.entries, Signature::RIEMANNIAN)
            .map_err(|e| self.err_at(line, e.to_string()))?;
        let sig = match (self.signature, probe.det().as_f64()) {
            (Some((s, l)), Some(d)) if (d < 0.0) != (s.det_sign() < 0) => {
                return Err(self.err_at(l, format!("det g = {d} contradicts signature {s}")))
            }
            (Some((s, _)), _) => s,
            (None, Some(d)) if d < 0.0 => Signature::LORENTZIAN,
            (None, Some(_)) => Signature::RIEMANNIAN,
            (None, None) => {
                return Err(self.err_at(line, "det g is not constant; add `signature = lorentzian|riemannian`"))
            }
        };
        build_metric(&self.chart, &self.entries, sig).map_err(|e| self.err_at(line, e.to_string()))
    }

    fn bindings(&self, chart: &Chart) -> Result<(FuncBindings, BTreeSet<String>), SpecError> {
        let plain = Chart::new(chart.coords().each_ref().map(String::as_str)).expect("chart coordinates are valid");
        let mut out = FuncBindings::new();
        let mut bound = BTreeSet::new();
        for (name, src, line) in &self.bindings {
            let params = chart
                .func_params(name)
                .ok_or_else(|| self.err_at(*line, format!("`{name}` is not a declared function")))?
                .to_vec();
            let body = plain.parse(src).map_err(|e| self.err_at(*line, e.to_string()))?;
            if let Some(c) = body.coords().into_iter().find(|c| !params.contains(c)) {
                return Err(self.err_at(*line, format!("the body of `{name}` uses `{c}`, which is not one of its arguments")));
            }
            if !bound.insert(name.clone()) {
                return Err(self.err_at(*line, format!("`{name}` is bound twice")));
            }
            out = out.expr(name, &params, body);
        }
        Ok((out, bound))
    }
}

pub fn parse_spec(src: &str, file: &str) -> Result<SpecFile, SpecError> {
    let mut p = Parser {
        file,
        line: 0,
        chart: Chart::txy(),
        signature: None,
        entries: Vec::new(),
        shortcut: None,
        metric_line: 0,
        field: BTreeMap::new(),
        potential: None,
        field_line: 0,
        map: BTreeMap::new(),
        inverse: BTreeMap::new(),
        relations: Vec::new(),
        map_line: 0,
        bindings: Vec::new(),
    };
    let mut section = Section::None;
    let mut seen = BTreeSet::new();
    for (n, raw) in src.lines().enumerate() {
        p.line = n + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            section = match name.trim() {
                "chart" => Section::Chart,
                "functions" => Section::Functions,
                "metric" => Section::Metric,
                "field" => Section::Field,
                "map" => Section::Map,
                "bindings" => Section::Bindings,
                other => return Err(p.err(format!("unknown section [{other}]"))),
            };
            if !seen.insert(name.trim().to_string()) {
                return Err(p.err(format!("section [{}] appears twice", name.trim())));
            }
            continue;
        }
        match section {
            Section::None => return Err(p.err("content before the first section")),
            Section::Chart => p.chart_line(line)?,
            Section::Functions => p.function_line(line)?,
            Section::Metric => p.metric_line(line)?,
            Section::Field => p.field_line(line)?,
            Section::Map => p.map_line(line)?,
            Section::Bindings => p.binding_line(line)?,
        }
    }
    p.line = 0;
    p.finish()
}

pub fn read_spec(path: &Path) -> Result<SpecFile, SpecError> {
    let file = path.display().to_string();
    let src = std::fs::read_to_string(path).map_err(|e| SpecError { file: file.clone(), line: 0, msg: e.to_string() })?;
    parse_spec(&src, &file)
}

impl SpecFile {
    pub fn require_metric(&self) -> Result<&MetricChart, SpecError> {
        self.metric.as_ref().ok_or_else(|| SpecError {
            file: self.path.clone(),
            line: 0,
            msg: "no [metric] section".into(),
        })
    }

    /// Functions of the metric that have no numeric binding.
    pub fn unbound(&self) -> Vec<String> {
        self.chart
            .funcs()
            .map(|(n, _)| n.to_string())
            .filter(|n| !self.bound.contains(n))
            .collect()
    }

    pub fn coord_map(&self, chart: &Chart) -> Result<CoordMap, SpecError> {
        let err = |msg: String| SpecError { file: self.path.clone(), line: 0, msg };
        let block = self.map.as_ref().ok_or_else(|| err("no [map] section".into()))?;
        let mut map = CoordMap::new(chart, block.comps.clone()).map_err(|e| err(e.to_string()))?;
        for (c, v) in &block.relations {
            map = map.with_relation(c.as_atom().expect("checked when parsed").clone(), v.clone());
        }
        if let Some(inv) = &block.inverse {
            let inv = CoordMap::new(chart, inv.clone()).map_err(|e| err(e.to_string()))?;
            map = map.with_inverse(inv).map_err(|e| err(e.to_string()))?;
        }
        Ok(map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const THEOREM: &str = "
[functions]
a(y)

[metric]
metric = theorem(a(y))   # the main family

[bindings]
a(y) = sin(y)
";

    #[test]
    fn shortcut_and_bindings() {
        let s = parse_spec(THEOREM, "t.geo3").unwrap();
        let m = s.require_metric().unwrap();
        assert_eq!(m.g(2, 2), &s.chart.parse("x^3 + a(y)*x").unwrap());
        assert_eq!(m.signature(), Signature::LORENTZIAN);
        assert!(s.unbound().is_empty());
    }

    #[test]
    fn components_infer_signature() {
        let s = parse_spec("[metric]\ng[0][0] = 1\ng[1][1] = 1\ng[2][2] = 1\n", "e").unwrap();
        assert_eq!(s.require_metric().unwrap().signature(), Signature::RIEMANNIAN);
        let err = parse_spec("[metric]\ng[0][0] = 1\ng[1][1] = x^2\ng[2][2] = 1\n", "e").unwrap_err();
        assert_eq!(err.line, 4);
    }

    #[test]
    fn errors_carry_lines() {
        let err = parse_spec("[metric]\ng[0][2] = 1\ng[1][1] = b(y)\n", "bad.geo3").unwrap_err();
        assert_eq!((err.file.as_str(), err.line), ("bad.geo3", 3));
        let err = parse_spec("[chart]\ncoords = t, x\n", "c").unwrap_err();
        assert_eq!(err.line, 2);
        let err = parse_spec("g[0][0] = 1\n", "c").unwrap_err();
        assert_eq!(err.line, 1);
        let err = parse_spec("[functions]\na(y)\n[bindings]\na(y) = x\n", "c").unwrap_err();
        assert_eq!(err.line, 4);
    }

    #[test]
    fn field_and_map_blocks() {
        let s = parse_spec(
            "[functions]\nalpha\n[field]\nX[0] = t\nX[1] = 0\nX[2] = alpha*y\n[map]\nmap = (-t, x, -y + alpha)\ninverse = (-t, x, -y + alpha)\n",
            "f",
        )
        .unwrap();
        assert!(matches!(s.field, Some(SolitonField::Vector(_))));
        let map = s.coord_map(&s.chart).unwrap();
        assert!(map.inverse().is_some());
    }

    #[test]
    fn split_respects_nesting() {
        assert_eq!(split_top("1, f(x, y), (a, b)"), vec!["1", "f(x, y)", "(a, b)"]);
    }
}
