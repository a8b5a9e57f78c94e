use std::collections::BTreeMap;
use std::thread;

use geo3_core::analysis::{
    ecs_from_pack, jordan_type, nilpotency_index, ricci_recurrence, soliton_residual, EcsClass,
    SolitonField, SolitonKind, SolitonSpec,
};
use geo3_core::curvature::{is_walker_form, parallel_cotton_system, CurvaturePack};
use geo3_core::families::verify_isometry;
use geo3_core::numoracle::{compare, point_map, sample_points, CompareOptions, NumericMetric, Point};
use geo3_core::report::{Check, NumericError, Report, Status};
use geo3_core::symexpr::FuncBindings;
use geo3_core::tensor::covariant_derivative;
use geo3_core::{suite, Chart, Error, Expr, TensorField};
use serde_json::{json, Map, Value};

use crate::output::Outcome;
use crate::specfile::{SpecError, SpecFile};

/// Anything that should end the process with the usage exit code.
#[derive(Debug)]
pub struct UsageError(pub String);

impl From<SpecError> for UsageError {
    fn from(e: SpecError) -> Self {
        UsageError(e.to_string())
    }
}

impl From<Error> for UsageError {
    fn from(e: Error) -> Self {
        UsageError(e.to_string())
    }
}

type CmdResult = Result<Outcome, UsageError>;

fn components(t: &TensorField, chart: &Chart) -> Value {
    let m: Map<String, Value> = t
        .nonzero()
        .into_iter()
        .map(|(idx, e)| (TensorField::label(&idx, chart), Value::String(e.to_string())))
        .collect();
    Value::Object(m)
}

fn evaluated(t: &TensorField, chart: &Chart, p: &Point, funcs: &FuncBindings) -> Result<Value, UsageError> {
    let pm = point_map(chart.coords(), p);
    let mut m = Map::new();
    for (idx, e) in t.entries() {
        m.insert(TensorField::label(&idx, chart), json!(e.eval(&pm, funcs)?));
    }
    Ok(Value::Object(m))
}

fn require_bound(spec: &SpecFile, what: &str) -> Result<(), UsageError> {
    let missing = spec.unbound();
    if missing.is_empty() {
        Ok(())
    } else {
        Err(UsageError(format!("{}: {what} needs [bindings] for {}", spec.path, missing.join(", "))))
    }
}

fn scalar_tensor(e: &Expr) -> TensorField {
    TensorField::from_fn(Vec::new(), |_| e.clone())
}

pub fn curvature(spec: &SpecFile, at: &[Point]) -> CmdResult {
    let m = spec.require_metric()?;
    if !at.is_empty() {
        require_bound(spec, "--at")?;
    }
    let mut out = Outcome::new("curvature");
    out.input("spec", &spec.path);
    out.input("at", at);
    let pack = CurvaturePack::compute(m);
    let chart = m.chart();
    let mut quantities: Vec<(&str, &str, Option<TensorField>)> = vec![
        ("christoffel", "Γ^k_ij, indexed [k,i,j]", Some(pack.gamma.tensor())),
        ("riemann", "R_abcd", Some(pack.riemann.clone())),
        ("ricci", "ρ_ij", Some(pack.ricci.clone())),
        ("scalar", "τ", Some(scalar_tensor(&pack.scalar))),
        ("schouten", "S_ij = ρ_ij − τ/4 g_ij", Some(pack.schouten.clone())),
        ("cotton3", "C_ijk", Some(pack.cotton3.clone())),
        ("cotton2", "C̃_ij", pack.cotton2.clone()),
        ("cotton-operator", "Ĉ^i_j", pack.cotton_op.clone()),
    ];
    for (id, what, t) in quantities.drain(..) {
        let id = format!("curvature.{id}");
        let Some(t) = t else {
            out.push(Check::warn(id, format!("{what}: √|det g| is not exact, not computed")));
            continue;
        };
        let n = t.nonzero().len();
        let mut data = Map::new();
        data.insert("components".into(), components(&t, chart));
        if !at.is_empty() {
            let vals: Vec<Value> = at
                .iter()
                .map(|p| Ok(json!({ "point": p, "values": evaluated(&t, chart, p, &spec.bindings)? })))
                .collect::<Result<_, UsageError>>()?;
            data.insert("at".into(), Value::Array(vals));
        }
        let detail = if t.rank() == 0 {
            format!("{what} = {}", t.get(&[]))
        } else {
            format!("{what}: {n} nonzero components")
        };
        out.push_data(Check::pass(id, detail), Value::Object(data));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum CheckKind {
    ParallelCotton,
    Ecs,
    RecurrentRicci,
    Nilpotent,
}

pub fn check(spec: &SpecFile, kind: CheckKind) -> CmdResult {
    let m = spec.require_metric()?;
    let chart = m.chart();
    let pack = CurvaturePack::compute(m);
    let name = match kind {
        CheckKind::ParallelCotton => "parallel-cotton",
        CheckKind::Ecs => "ecs",
        CheckKind::RecurrentRicci => "recurrent-ricci",
        CheckKind::Nilpotent => "nilpotent",
    };
    let mut out = Outcome::new(&format!("check {name}"));
    out.input("spec", &spec.path);
    match kind {
        CheckKind::ParallelCotton => match &pack.grad_cotton2 {
            Some(d) => {
                out.push(Check::vanishing("parallel-cotton", "∇C̃ vanishes", d, chart));
                if is_walker_form(m) {
                    let sys = parallel_cotton_system(m)?;
                    let list: Vec<Value> = sys.iter().map(|e| Value::String(e.to_string())).collect();
                    out.push_data(
                        Check::pass("parallel-cotton.system", format!("{} distinct conditions in Walker form", sys.len())),
                        Value::Array(list),
                    );
                }
            }
            None => {
                let d = covariant_derivative(&pack.cotton3, m);
                out.push(Check::vanishing("parallel-cotton", "∇C vanishes (√|det g| not exact)", &d, chart));
            }
        },
        CheckKind::Ecs => {
            let (class, rep) = ecs_from_pack(m, &pack);
            out.push(Check::expect("ecs", class == EcsClass::Ecs, format!("class: {}", class.name())));
            out.extend("ecs.", rep.checks);
        }
        CheckKind::RecurrentRicci => match ricci_recurrence(m) {
            Ok(Some(w)) => {
                out.push_data(Check::pass("recurrent-ricci", "∇ρ = ω ⊗ ρ"), json!({ "omega": components(&w, chart) }))
            }
            Ok(None) => out.push(Check::fail("recurrent-ricci", "no one-form ω satisfies ∇ρ = ω ⊗ ρ")),
            Err(e) => out.push(Check::fail("recurrent-ricci", e.to_string())),
        },
        CheckKind::Nilpotent => {
            let ops = [("ricci-operator", "ρ̂", Some(geo3_core::curvature::ricci_operator(m))), ("cotton-operator", "Ĉ", pack.cotton_op.clone())];
            for (id, sym, op) in ops {
                let id = format!("nilpotent.{id}");
                match op.map(|t| nilpotency_index(&t)).transpose()? {
                    Some(Some(k)) => out.push(Check::pass(id, format!("{sym} has nilpotency index {k}"))),
                    Some(None) => out.push(Check::fail(id, format!("{sym}³ ≠ 0"))),
                    None => out.push(Check::warn(id, format!("{sym} not computed: √|det g| is not exact"))),
                }
            }
        }
    }
    Ok(out)
}

pub struct ClassifyOptions {
    pub points: usize,
    pub seed: u64,
    pub tol: f64,
    pub lo: f64,
    pub hi: f64,
    pub expect: Option<String>,
}

fn numeric_operator(t: &TensorField, pm: &BTreeMap<String, f64>, funcs: &FuncBindings) -> geo3_core::Result<[[f64; 3]; 3]> {
    let mut a = [[0.0; 3]; 3];
    for (i, row) in a.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = t.get(&[i, j]).eval(pm, funcs)?;
        }
    }
    Ok(a)
}

pub fn classify(spec: &SpecFile, o: &ClassifyOptions) -> CmdResult {
    let m = spec.require_metric()?;
    require_bound(spec, "classify")?;
    let mut out = Outcome::new("classify");
    out.input("spec", &spec.path);
    out.input("points", o.points);
    out.input("seed", o.seed);
    out.input("tol", o.tol);
    out.input("range", [o.lo, o.hi]);
    let pack = CurvaturePack::compute(m);
    let ops = [("ricci-operator", Some(geo3_core::curvature::ricci_operator(m))), ("cotton-operator", pack.cotton_op.clone())];
    let pts = sample_points(o.points, o.seed, o.lo, o.hi, 0.0);
    for (name, op) in ops {
        let id = format!("classify.{name}");
        let Some(op) = op else {
            out.push(Check::warn(id, "not computed: √|det g| is not exact"));
            continue;
        };
        let mut hist: BTreeMap<String, usize> = BTreeMap::new();
        let (mut ambiguous, mut singular) = (0, 0);
        for p in &pts {
            let pm = point_map(m.chart().coords(), p);
            let a = match numeric_operator(&op, &pm, &spec.bindings) {
                Ok(a) => a,
                Err(_) => {
                    singular += 1;
                    continue;
                }
            };
            match jordan_type(&a, o.tol) {
                Ok(j) => *hist.entry(j.tag.name().to_string()).or_default() += 1,
                Err(Error::Ambiguous { .. }) => ambiguous += 1,
                Err(e) => return Err(e.into()),
            }
        }
        let classified: usize = hist.values().sum();
        let summary: Vec<String> = hist.iter().map(|(k, v)| format!("{k}: {v}")).collect();
        let mut detail = format!("{classified} of {} points classified [{}]", pts.len(), summary.join(", "));
        if ambiguous + singular > 0 {
            detail.push_str(&format!("; {ambiguous} ambiguous, {singular} not evaluable"));
        }
        let status = match &o.expect {
            Some(tag) if hist.len() != 1 || !hist.contains_key(tag) || ambiguous > 0 => Status::Fail,
            _ if ambiguous > 0 || classified == 0 => Status::Warn,
            _ => Status::Pass,
        };
        if let Some(tag) = &o.expect {
            detail.push_str(&format!("; expected {tag} everywhere"));
        }
        out.push_data(
            Check::new(id, status, detail),
            json!({ "histogram": hist, "ambiguous": ambiguous, "not-evaluable": singular }),
        );
    }
    Ok(out)
}

pub fn soliton(spec: &SpecFile, field: Option<&SpecFile>, kind: SolitonKind, lambda: &str) -> CmdResult {
    let m = spec.require_metric()?;
    let (source, f) = match field {
        Some(f) => (f.path.clone(), f.field.clone()),
        None => (spec.path.clone(), spec.field.clone()),
    };
    let f = f.ok_or_else(|| UsageError(format!("{source}: no [field] section")))?;
    let chart = m.chart();
    match &f {
        SolitonField::Vector(v) => v.comps().iter().try_for_each(|e| chart.check_declared(e))?,
        SolitonField::Potential(p) => chart.check_declared(p)?,
    }
    let lambda = chart.parse(lambda)?;
    let mut out = Outcome::new("soliton");
    out.input("spec", &spec.path);
    out.input("field", &source);
    out.input("kind", kind.name());
    out.input("lambda", lambda.to_string());
    let spec_s = SolitonSpec::new(kind, f, lambda)?;
    let (_, check) = soliton_residual(m, &spec_s)?;
    out.push(check);
    Ok(out)
}

pub fn isometry(a: &SpecFile, b: &SpecFile, map: &SpecFile) -> CmdResult {
    let (ma, mb) = (a.require_metric()?, b.require_metric()?);
    let chart = ma.chart().merged(mb.chart())?.merged(&map.chart)?;
    let coord_map = map.coord_map(&chart)?;
    let mut out = Outcome::new("isometry");
    out.input("source", &a.path);
    out.input("target", &b.path);
    out.input("map", &map.path);
    let mut c = verify_isometry(ma, mb, &coord_map)?;
    c.detail = format!("{} (map* {} = {})", c.detail, b.path, a.path);
    out.push(c);
    Ok(out)
}

pub struct OracleOptions {
    pub points: usize,
    pub seed: u64,
    pub compare: CompareOptions,
    pub lo: f64,
    pub hi: f64,
    pub avoid_x: f64,
}

pub fn oracle(spec: &SpecFile, o: &OracleOptions) -> CmdResult {
    let m = spec.require_metric()?;
    require_bound(spec, "oracle")?;
    let mut out = Outcome::new("oracle");
    out.input("spec", &spec.path);
    out.input("points", o.points);
    out.input("seed", o.seed);
    out.input("options", o.compare);
    out.input("range", [o.lo, o.hi]);
    out.input("avoid-x", o.avoid_x);
    let nm = NumericMetric::from_metric(m, &spec.bindings);
    let pts = sample_points(o.points, o.seed, o.lo, o.hi, o.avoid_x);
    let rep = compare(m, &spec.bindings, &nm, &pts, &o.compare)?;
    for q in &rep.quantities {
        let c = Check::expect(
            format!("oracle.{}", q.quantity),
            q.pass,
            format!("symbolic vs central differences at h = {:e}, {} points", q.h, rep.points),
        )
        .with_numeric(NumericError { quantity: q.quantity.clone(), max_rel_error: q.max_rel_error, tol: q.tol });
        out.push(c);
    }
    if m.volume_factor().is_err() {
        out.push(Check::warn("oracle.cotton2", "C̃ not compared: √|det g| is not exact"));
    }
    Ok(out)
}

fn slug(s: &str) -> String {
    s.to_lowercase().replace(' ', "-")
}

/// The full verification suite, sections run on separate threads.
pub fn verify_suite(seed: u64, oracle_points: usize, opts: &CompareOptions) -> CmdResult {
    let mut out = Outcome::new("verify-paper");
    out.input("seed", seed);
    out.input("oracle-points", oracle_points);
    out.input("options", opts);
    type Job<'a> = (&'static str, Box<dyn FnOnce() -> Report + Send + 'a>);
    let jobs: Vec<Job> = vec![
        ("golden", Box::new(suite::golden_formulas)),
        ("parallel-cotton", Box::new(suite::parallel_cotton)),
        ("main-family", Box::new(move || suite::theorem_family(seed))),
        ("classified-family", Box::new(suite::family6_checks)),
        ("products", Box::new(suite::product_lemma)),
        ("isometries", Box::new(move || suite::isometries(seed))),
        ("structure", Box::new(move || suite::structure(seed))),
        ("solitons", Box::new(move || suite::solitons(seed))),
        ("identities", Box::new(suite::identities)),
        ("oracle", Box::new(move || suite::oracle(oracle_points, seed, opts))),
    ];
    let reports: Vec<(&str, Report)> = thread::scope(|s| {
        let handles: Vec<_> = jobs.into_iter().map(|(name, f)| (name, s.spawn(f))).collect();
        handles
            .into_iter()
            .map(|(name, h)| {
                let rep = h.join().unwrap_or_else(|_| Check::fail("panic", "section panicked").into());
                (name, rep)
            })
            .collect()
    });
    for (name, rep) in reports {
        out.extend(&format!("{}/", slug(name)), rep.checks);
    }
    Ok(out)
}
