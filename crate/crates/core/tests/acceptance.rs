//! Acceptance run: one line per criterion, nonzero exit on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use geo3_core::numoracle::CompareOptions;
use geo3_core::report::{Report, Status};
use geo3_core::suite;

const SEED: u64 = 20240611;
const ORACLE_POINTS: usize = 100;
const TOL_FIRST: f64 = 1e-5;
const TOL_COTTON: f64 = 1e-3;
const H_FIRST: f64 = 1e-3;
const H_COTTON: f64 = 5e-3;
const GOLDEN_BUDGET: Duration = Duration::from_secs(5);
const PARALLEL_BUDGET: Duration = Duration::from_secs(60);
const INSTANCE_BUDGET: Duration = Duration::from_secs(10);
const ORACLE_BUDGET: Duration = Duration::from_secs(30);

struct Line {
    n: usize,
    title: &'static str,
    ok: bool,
    elapsed: Duration,
    notes: Vec<String>,
}

fn run(n: usize, title: &'static str, budget: Duration, f: impl FnOnce() -> Report) -> Line {
    let start = Instant::now();
    let rep = f();
    let elapsed = start.elapsed();
    let mut notes: Vec<String> = rep
        .checks
        .iter()
        .filter(|c| c.status != Status::Pass)
        .map(|c| {
            let mut s = format!("{:?} {}: {}", c.status, c.id, c.detail);
            for r in c.residuals.iter().take(3) {
                s.push_str(&format!("\n        {} = {}", r.component, r.expr));
            }
            for e in &c.numeric_errors {
                s.push_str(&format!("\n        {} rel {:.2e} (tol {:.0e})", e.quantity, e.max_rel_error, e.tol));
            }
            s
        })
        .collect();
    let in_budget = elapsed <= budget;
    if !in_budget {
        notes.push(format!("over budget: {elapsed:.2?} > {budget:?}"));
    }
    let line = Line { n, title, ok: rep.passed() && !rep.checks.is_empty() && in_budget, elapsed, notes };
    println!("{} criterion {:>2}: {} ({:.2?})", if line.ok { "PASS" } else { "FAIL" }, line.n, line.title, line.elapsed);
    for n in &line.notes {
        println!("      {n}");
    }
    line
}

fn main() -> ExitCode {
    let opts = CompareOptions { h_first: H_FIRST, tol_first: TOL_FIRST, h_cotton: H_COTTON, tol_cotton: TOL_COTTON };
    let instances = suite::theorem_instances(SEED).len() as u32;
    let lines = vec![
        run(1, "golden Γ, ρ, C̃ of the Walker metric", GOLDEN_BUDGET, suite::golden_formulas),
        run(2, "parallel-Cotton system equivalence", PARALLEL_BUDGET, suite::parallel_cotton),
        run(3, "main family: ∇C̃ = 0, C̃ = −3dy², ECS", INSTANCE_BUDGET * instances, || suite::theorem_family(SEED)),
        run(4, "classified strict-Walker family and x⁴ control", INSTANCE_BUDGET * 4, suite::family6_checks),
        run(5, "products ±dt² + g_N", INSTANCE_BUDGET * 8, suite::product_lemma),
        run(6, "isometries T, T̃, Φ", INSTANCE_BUDGET * 24, || suite::isometries(SEED)),
        run(7, "nilpotency, recurrence, not 2-symmetric", INSTANCE_BUDGET * 6, || suite::structure(SEED)),
        run(8, "solitons and negative controls", INSTANCE_BUDGET * 20, || suite::solitons(SEED)),
        run(9, "tensor identities on all test metrics", INSTANCE_BUDGET * 9, suite::identities),
        run(10, "finite-difference oracle, 5 metrics × 100 points", ORACLE_BUDGET, || suite::oracle(ORACLE_POINTS, SEED, &opts)),
    ];
    let passed = lines.iter().filter(|l| l.ok).count();
    println!("{passed} of {} criteria passed", lines.len());
    println!("tolerances: first-order {TOL_FIRST:e} at h = {H_FIRST:e}; Cotton {TOL_COTTON:e} at h = {H_COTTON:e}; {ORACLE_POINTS} points; seed {SEED}");
    if passed == lines.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
