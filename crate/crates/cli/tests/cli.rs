use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn geo3(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_geo3"));
    c.args(args).env_remove("GEO3_TOL");
    for (k, v) in env {
        c.env(k, v);
    }
    c.output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut a = args.to_vec();
    a.push("--json");
    let out = geo3(&a, &[]);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    });
    (out.status.code().unwrap(), v)
}

fn check<'a>(report: &'a Value, id: &str) -> &'a Value {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["id"] == id)
        .unwrap_or_else(|| panic!("no check {id} in {report:#}"))
}

fn residual(c: &Value, component: &str) -> String {
    c["residuals"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["component"] == component)
        .map(|r| r["expr"].as_str().unwrap().to_string())
        .unwrap_or_default()
}

#[test]
fn report_has_stable_schema() {
    let (code, r) = json(&["check", &data("theorem.geo3"), "ecs"]);
    assert_eq!(code, 0);
    assert_eq!(r["schema"], "geo3-report/1");
    assert_eq!(r["command"], "check ecs");
    for key in ["inputs", "checks", "wall-time"] {
        assert!(r.get(key).is_some(), "{key}");
    }
    for c in r["checks"].as_array().unwrap() {
        for key in ["id", "status", "residuals", "numeric-errors"] {
            assert!(c.get(key).is_some(), "{key}");
        }
    }
    let ids: Vec<&str> = r["checks"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
}

#[test]
fn ecs_prints_the_cotton_component() {
    let (code, r) = json(&["check", &data("theorem.geo3"), "ecs"]);
    assert_eq!(code, 0);
    assert_eq!(check(&r, "ecs")["status"], "pass");
    assert_eq!(residual(check(&r, "ecs.cotton-nonzero"), "[y,y]"), "-3");
}

#[test]
fn quartic_profile_fails_parallel_cotton() {
    let (code, r) = json(&["check", &data("quartic.geo3"), "parallel-cotton"]);
    assert_eq!(code, 1);
    let c = check(&r, "parallel-cotton");
    assert_eq!(c["status"], "fail");
    assert_eq!(residual(c, "[x,y,y]"), "-12");
}

#[test]
fn generic_walker_lists_its_system() {
    let (code, r) = json(&["check", &data("walker_components.geo3"), "parallel-cotton"]);
    assert_eq!(code, 1);
    let sys = check(&r, "parallel-cotton.system");
    assert!(!sys["data"].as_array().unwrap().is_empty());
}

#[test]
fn structure_checks_pass_on_the_main_family() {
    for what in ["recurrent-ricci", "nilpotent"] {
        let (code, r) = json(&["check", &data("theorem.geo3"), what]);
        assert_eq!(code, 0, "{r:#}");
    }
    let (_, r) = json(&["check", &data("theorem.geo3"), "nilpotent"]);
    assert!(check(&r, "nilpotent.cotton-operator")["detail"].as_str().unwrap().contains("index 2"));
}

#[test]
fn flat_metric_has_zero_tensors() {
    let (code, r) = json(&["curvature", &data("flat.geo3"), "--at", "0.5,1,2"]);
    assert_eq!(code, 0);
    for c in r["checks"].as_array().unwrap() {
        assert!(c["data"]["components"].as_object().unwrap().is_empty(), "{c:#}");
        let vals = &c["data"]["at"][0]["values"];
        assert!(vals.as_object().unwrap().values().all(|v| v.as_f64() == Some(0.0)));
    }
}

#[test]
fn hyperbolic_product_scalar() {
    let (code, r) = json(&["curvature", &data("hyperbolic.geo3")]);
    assert_eq!(code, 0);
    assert_eq!(check(&r, "curvature.scalar")["detail"], "τ = -2");
}

#[test]
fn parse_errors_name_file_and_line() {
    let out = geo3(&["check", &data("bad_metric.geo3"), "ecs"], &[]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad_metric.geo3:7"), "{err}");
    let out = geo3(&["check", &data("theorem.geo3"), "everything"], &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gradient_soliton_and_perturbation() {
    let (code, _) = json(&["soliton", &data("gradient.geo3"), "--kind", "gradient-cotton"]);
    assert_eq!(code, 0);
    let (code, r) = json(&["soliton", &data("gradient.geo3"), "--kind", "gradient-cotton", "--field", &data("shifted_field.geo3")]);
    assert_eq!(code, 1);
    assert_eq!(residual(check(&r, "soliton-gradient-cotton"), "[y,y]"), "1");
    let out = geo3(&["soliton", &data("gradient.geo3"), "--kind", "cotton"], &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reflection_isometry_needs_matching_profiles() {
    let (code, _) = json(&["isometry", &data("b_profile.geo3"), &data("a_profile.geo3"), "--map", &data("phi_map.geo3")]);
    assert_eq!(code, 0);
    let (code, r) =
        json(&["isometry", &data("b_profile.geo3"), &data("a_profile.geo3"), "--map", &data("phi_map_plus.geo3")]);
    assert_eq!(code, 1);
    assert!(!check(&r, "isometry")["residuals"].as_array().unwrap().is_empty());
}

#[test]
fn classify_is_deterministic() {
    let args = ["classify", &data("theorem.geo3"), "--points", "15", "--seed", "9", "--expect", "nilpotent-2"];
    let (code, mut a) = json(&args);
    assert_eq!(code, 0);
    let (_, mut b) = json(&args);
    a["wall-time"] = Value::Null;
    b["wall-time"] = Value::Null;
    assert_eq!(a, b);
    assert_eq!(check(&a, "classify.ricci-operator")["data"]["histogram"]["nilpotent-2"], 15);
}

#[test]
fn oracle_tolerance_from_environment() {
    let spec = data("theorem.geo3");
    let (code, _) = json(&["oracle", &spec, "--points", "20"]);
    assert_eq!(code, 0);
    let out = geo3(&["oracle", &spec, "--points", "20"], &[("GEO3_TOL", "1e-30")]);
    assert_eq!(out.status.code(), Some(1));
    let out = geo3(&["oracle", &spec, "--points", "20", "--tol", "1e-5"], &[("GEO3_TOL", "1e-30")]);
    assert_eq!(out.status.code(), Some(0));
    let out = geo3(&["oracle", &spec], &[("GEO3_TOL", "-1")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracle_requires_bindings() {
    let out = geo3(&["oracle", &data("walker_components.geo3")], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("f"));
}

#[test]
fn builtin_suite_passes() {
    let (code, r) = json(&["verify-paper", "--points", "10"]);
    assert_eq!(code, 0);
    let checks = r["checks"].as_array().unwrap();
    assert!(checks.len() > 200);
    assert!(checks.iter().all(|c| c["status"] != "fail"));
    assert!(checks.iter().any(|c| c["id"].as_str().unwrap().starts_with("golden/")));
}
