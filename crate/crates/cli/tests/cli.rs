use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_logspace-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn list_prints_catalog() {
    let out = lab(&["experiment", "--list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["metric-axioms", "delta2", "weight-classify", "outer-boundary", "cauchy-spotcheck"] {
        assert!(text.contains(name), "{name} missing from:\n{text}");
    }
}

#[test]
fn help_documents_tolerance_defaults() {
    let out = lab(&["experiment", "--help"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("triangle_slack"));
    assert!(text.contains("1e-12"));
    assert!(text.contains("divergence_ratio"));
}

#[test]
fn metric_and_fnorm_on_csv() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "f.csv", "index,re,im\n0,1,0\n1,1,0\n2,1,0\n3,1,0\n");
    let g = write(dir.path(), "g.csv", "0,0,0\n1,0,0\n2,0,0\n3,0,0\n");

    let out = lab(&["metric", "--kind", "rho", "--p", "1", "--f", &f, "--g", &g]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert!((v["value"].as_f64().unwrap() - 2f64.ln()).abs() < 1e-12);
    assert!(v["iterations"].is_null());

    let out = lab(&["metric", "--kind", "d", "--p", "1", "--f", &f, "--g", &f]);
    assert_eq!(json(&out)["value"].as_f64().unwrap(), 0.0);

    let e = write(dir.path(), "e.csv", &format!("0,{},0\n1,{},0\n", std::f64::consts::E - 1.0, std::f64::consts::E - 1.0));
    let out = lab(&["fnorm", "--p", "1", "--f", &e]);
    let v = json(&out);
    assert!((v["value"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!(v["iterations"].as_u64().unwrap() > 0);
}

#[test]
fn malformed_csv_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.csv", "index,re,im\n0,1,0\n1,oops,0\n");
    let out = lab(&["fnorm", "--p", "1", "--f", &f]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn unknown_experiment_is_an_error() {
    let out = lab(&["experiment", "no-such-thing"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn experiment_writes_json_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = lab(&[
        "experiment", "delta2", "--p", "1,2", "--grid-size", "200", "--seed", "3", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["schema_version"], 1);
    assert_eq!(report["pass"], true);

    let out = lab(&["experiment", "delta2", "--p", "1", "--grid-size", "200", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("experiment,check,anchor,key,value,threshold,pass"));
}

#[test]
fn failing_tolerance_gives_exit_one() {
    let out = lab(&[
        "experiment", "poly-infimum", "--p", "1", "--grid-size", "64", "--degree", "1", "--restarts", "1",
        "--tol", "poly_window=-1",
    ]);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn classify_singular_pair() {
    let out = lab(&[
        "classify-weights", "--p", "1", "--w", "expneg:a=1,b=1/p", "--omega", "const:1", "--ladder", "8..20",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["relation"], "proper_inclusion");
}

#[test]
fn privalov_polynomial_is_bounded() {
    let out = lab(&["privalov", "--p", "1", "--fn", "poly:0,2", "--grid-size", "1024"]);
    let v = json(&out);
    assert_eq!(v["profile"]["bounded"], true);
    let sup = v["profile"]["sup_estimate"].as_f64().unwrap();
    assert!(sup <= 2f64.ln() + 1e-9);
}

#[test]
fn poly_infimum_near_log_two() {
    let out = lab(&["poly-infimum", "--p", "1", "--degree", "1", "--restarts", "2", "--grid-size", "256"]);
    let v = json(&out);
    let value = v["result"]["value"].as_f64().unwrap();
    assert!(value >= 2f64.ln() - 1e-6 && value <= 2f64.ln() + 1e-3, "{value}");
}

#[test]
fn generate_round_trips_through_fnorm() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.csv");
    let out = lab(&["generate", "--spec", "const:3", "--grid-size", "16", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let out = lab(&["fnorm", "--p", "2", "--f", path.to_str().unwrap()]);
    assert!(json(&out)["value"].as_f64().unwrap() > 0.0);
}
