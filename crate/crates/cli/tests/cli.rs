use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn modgrav(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modgrav"))
        .args(args)
        .current_dir(dir)
        .env_remove("MODGRAV_THREADS")
        .output()
        .unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn sensitivity_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.toml");
    std::fs::write(&empty, "").unwrap();
    let a = modgrav(&["sensitivity"], dir.path());
    let b = modgrav(&["sensitivity", "--config", empty.to_str().unwrap()], dir.path());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert!(rel(v["dk_const"].as_f64().unwrap(), 1.36e-3) < 0.01);
    assert!(rel(v["ds_mod"].as_f64().unwrap(), 1.73e-3) < 0.01);
}

#[test]
fn validation_and_io_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "[geometry]\nepsilon = 1.5\n").unwrap();
    let o = modgrav(&["sensitivity", "--config", bad.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("geometry.epsilon"));
    assert_eq!(
        modgrav(&["sensitivity", "--config", "missing.toml"], dir.path())
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        modgrav(&["scan-yukawa", "--grid", "1,5"], dir.path()).status.code(),
        Some(1)
    );
    assert_eq!(modgrav(&["frobnicate"], dir.path()).status.code(), Some(1));
    let o = Command::new(env!("CARGO_BIN_EXE_modgrav"))
        .args(["sensitivity"])
        .env("MODGRAV_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn numerical_failure_exits_2() {
    // tiny coupling right above the source screening onset: the cubic has no root
    let dir = tempfile::tempdir().unwrap();
    let o = modgrav(
        &["screening", "--m-over-mp", "1e-8", "--lambda-ev", "1e-10"],
        dir.path(),
    );
    let code = o.status.code().unwrap();
    assert!(code == 0 || code == 2);
    if code == 2 {
        assert!(String::from_utf8_lossy(&o.stderr).contains("no root"));
    }
}

#[test]
fn screening_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = modgrav(&["screening"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["source"]["screened"], Value::Bool(false));
    assert_eq!(v["effective_yukawa"]["alpha"].as_f64(), Some(2.0));
    assert!(v["background"]["lambda_bg"].as_f64().unwrap() > 0.0);
    let o = modgrav(&["screening", "--m-over-mp", "1e-6", "--lambda-ev", "1e-9"], dir.path());
    let v = json(&o);
    assert_eq!(v["source"]["branch"], Value::String("taylor".into()));
}

#[test]
fn casimir_report() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&modgrav(&["casimir"], dir.path()));
    assert!(rel(v["acceleration"].as_f64().unwrap(), 9e-13) < 0.15);
    let cold = json(&modgrav(&["casimir", "--temperature", "0"], dir.path()));
    assert_eq!(cold["force"].as_f64(), Some(0.0));
}

#[test]
fn verify_qfi_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = modgrav(&["verify-qfi"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert!(v["max_rel_deviation"].as_f64().unwrap() < 1e-5);
    assert_eq!(v["checks"].as_array().unwrap().len(), 12);
}

#[test]
fn small_chameleon_scan_writes_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let o = modgrav(&["scan-chameleon", "--grid", "2,2"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("scan-chameleon.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "x,y,ratio,excluded");
    assert_eq!(lines.len(), 5);
    assert!(!csv.contains('\r'));
    let side: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("scan-chameleon.json")).unwrap()).unwrap();
    assert!(side["boundaries"].is_array());
    assert!(side["s_source_zero"].is_array());
}

#[test]
fn yukawa_scan_options_and_json_format() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(
        &cfg,
        "[scan.yukawa]\nlambda_min = 1e-2\nnx = 8\nny = 12\n[output]\nformat = \"json\"\npath = \"out/y.json\"\n",
    )
    .unwrap();
    let o = modgrav(
        &[
            "scan-yukawa",
            "--config",
            cfg.to_str().unwrap(),
            "--metric",
            "force_ratio",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/y.json")).unwrap()).unwrap();
    assert_eq!(v["metric"], Value::String("force_ratio".into()));
    assert_eq!(v["grid"]["ratio"].as_array().unwrap().len(), 12);
    assert_eq!(v["hull"].as_array().unwrap().len(), 0);
    assert_eq!(
        modgrav(&["scan-yukawa", "--metric", "nope"], dir.path()).status.code(),
        Some(1)
    );
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, threads: &str| {
        let out = dir.path().join(name);
        let o = Command::new(env!("CARGO_BIN_EXE_modgrav"))
            .args(["scan-chameleon", "--grid", "40,30", "--probe-screening", "off", "--out"])
            .arg(&out)
            .env("MODGRAV_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0));
        (
            std::fs::read(&out).unwrap(),
            std::fs::read(out.with_extension("json")).unwrap(),
        )
    };
    let a = run("a.csv", "1");
    assert_eq!(a, run("b.csv", "3"));
    assert_eq!(a, run("c.csv", "16"));
}
