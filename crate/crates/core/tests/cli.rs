use std::fs;
use std::path::Path;
use std::process::Command;

use serde_json::Value;

const PITCHFORK: &str = r#"{
    "driver": {"kind": "autonomous", "coefficients": {
        "a3": {"type": "constant", "value": 1},
        "a2": {"type": "constant", "value": 0},
        "a1": {"type": "constant", "value": 0}}},
    "family": {"form": "cubic", "a3": "a3", "a2": "a2", "a1": "a1"},
    "scan": {"range": [-1, 1], "config": {"grid_points": 21, "tol_bif": 1e-4}}
}"#;

fn run(dir: &Path, cmd: &str, config: &str, extra: &[&str]) -> (i32, String) {
    let cfg = dir.join("config.json");
    fs::write(&cfg, config).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_skewfork"))
        .arg(cmd)
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.join("out"))
        .args(extra)
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn report(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("out/report.json")).unwrap()).unwrap()
}

#[test]
fn scan_lambda_pitchfork() {
    let dir = tempfile::tempdir().unwrap();
    let (code, err) = run(dir.path(), "scan-lambda", PITCHFORK, &[]);
    assert_eq!(code, 0, "{err}");
    let r = report(dir.path());
    assert_eq!(r["result"]["pattern"], "classical_pitchfork");
    assert_eq!(r["config"]["scan"]["range"], serde_json::json!([-1.0, 1.0]));
    let csv = fs::read_to_string(dir.path().join("out/diagram.csv")).unwrap();
    assert_eq!(
        csv.lines().next().unwrap(),
        "parameter,fiber_offset,alpha,beta,kappa,exponent_lower,exponent_zero,exponent_upper"
    );
    assert!(dir.path().join("out/run.json").exists());
}

#[test]
fn reports_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert_eq!(run(a.path(), "scan-lambda", PITCHFORK, &["--jobs", "1"]).0, 0);
    assert_eq!(run(b.path(), "scan-lambda", PITCHFORK, &["--jobs", "2"]).0, 0);
    let ra = fs::read(a.path().join("out/report.json")).unwrap();
    let rb = fs::read(b.path().join("out/report.json")).unwrap();
    assert_eq!(ra, rb);
}

#[test]
fn criteria_window_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"{"criteria": {"model": "cubic", "bounds": {"k1": -1, "k2": 1, "r1": 1, "r2": 1},
        "spectrum": [-0.9, 0.9], "a2_range": [0.7, 1.2]}}"#;
    let (code, err) = run(dir.path(), "criteria", cfg, &["--format", "json"]);
    assert_eq!(code, 0, "{err}");
    let r = report(dir.path());
    assert_eq!(r["result"]["ensured"], "generalized_pitchfork");
    let w = &r["result"]["witnesses"]["window"];
    assert!((w[0].as_f64().unwrap() - 2.0 * 0.1f64.sqrt()).abs() < 1e-12);
}

#[test]
fn malformed_config_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let (code, err) = run(dir.path(), "scan-lambda", r#"{"scan": {"range": [-1, "one"]}}"#, &[]);
    assert_eq!(code, 1);
    assert!(err.contains("scan.range"), "{err}");
    let (code, err) = run(dir.path(), "scan-lambda", r#"{"scan": {"range": [-1, 1]"#, &[]);
    assert_eq!(code, 1);
    assert!(err.contains("invalid config"), "{err}");
}

#[test]
fn unresolved_scan_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    // Three copies throughout: no λ-pattern matches.
    let cfg = PITCHFORK.replace("[-1, 1]", "[0.5, 1]");
    let (code, err) = run(dir.path(), "scan-lambda", &cfg, &[]);
    assert_eq!(code, 2, "{err}");
    assert_eq!(report(dir.path())["status"], "partial");
}

#[test]
fn tol_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("config.json");
    fs::write(&cfg, PITCHFORK).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_skewfork"))
        .args(["scan-lambda", "--out"])
        .arg(dir.path().join("out"))
        .env("SKEWFORK_CONFIG", &cfg)
        .env("SKEWFORK_TOL", "1e-5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(dir.path())["config"]["scan"]["config"]["tol"], 1e-5);
}

#[test]
fn construct_and_integrate() {
    let dir = tempfile::tempdir().unwrap();
    let (code, err) = run(
        dir.path(),
        "construct",
        r#"{"construct": {"kind": "band_spectrum", "target": [-0.9, 0.9], "n": 2}}"#,
        &[],
    );
    assert_eq!(code, 0, "{err}");
    assert_eq!(
        report(dir.path())["result"]["verdict"]["ensured"],
        "generalized_pitchfork"
    );

    let cfg = PITCHFORK.replace(
        r#""scan": {"range": [-1, 1], "config": {"grid_points": 21, "tol_bif": 1e-4}}"#,
        r#""integrate": {"t0": 0, "x0": 1, "stops": [1, 2]}"#,
    );
    let (code, err) = run(dir.path(), "integrate", &cfg, &[]);
    assert_eq!(code, 0, "{err}");
    // x' = -x³ from 1: x(t) = 1/√(1+2t).
    let x = report(dir.path())["result"]["x"][1].as_f64().unwrap();
    assert!((x - 1.0 / 5f64.sqrt()).abs() < 1e-7);
    let csv = fs::read_to_string(dir.path().join("out/trajectory.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
}
