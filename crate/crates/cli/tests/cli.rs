use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const ONB: &str = r#"{"field": "R", "n": 2, "unit_norm": true, "vectors": [[1, 0], [0, 1]]}"#;
const WORKED: &str = r#"{"field": "R", "n": 2, "unit_norm": true, "vectors": [[1, 0], [0, 1], [-1, 0]]}"#;
const QUADRANT: &str = r#"{"field": "R", "n": 2, "unit_norm": true,
  "vectors": [[1, 0], [0.7071067811865476, 0.7071067811865476]]}"#;
const COMPLEX_ONB: &str = r#"{"field": "C", "n": 2, "unit_norm": true,
  "vectors": [[[0, 1], [0, 0]], [[0, 0], [1, 0]]]}"#;

fn framescale(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_framescale"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn json_doc(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let out = framescale(&all);
    (code(&out), serde_json::from_str(&stdout(&out)).expect("JSON document"))
}

#[test]
fn scale_worked_example() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "we.json", WORKED);
    let out = framescale(&["scale", f.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("coefficients:"));

    let (code, doc) = json_doc(&["scale", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(doc["exit_code"], 0);
    assert_eq!(doc["verdict"], "strictly scalable");
    let c: Vec<f64> = serde_json::from_value(doc["coefficients"].clone()).unwrap();
    assert!((c[1] * c[1] - c[0] * c[0] - c[2] * c[2]).abs() < 1e-9);
    assert_eq!(doc["certificate"]["kind"], "strict_witness");
    assert_eq!(doc["input_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn perturbed_frame_is_not_scalable() {
    let dir = TempDir::new().unwrap();
    let out = framescale(&["perturbed", "--v", "0.125"]);
    assert_eq!(code(&out), 0);
    let f = write(dir.path(), "fv.json", &stdout(&out));
    let (code, doc) = json_doc(&["scale", f.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(doc["verdict"], "not scalable");
    assert!(doc["certificate"]["kind"].is_string());
    assert_eq!(code_of(&["perturbed", "--v", "0.9"]), 3);
}

fn code_of(args: &[&str]) -> i32 {
    code(&framescale(args))
}

#[test]
fn check_tight_basis() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "onb.json", ONB);
    let (code, doc) = json_doc(&["check-tight", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(doc["lambda"], 1.0);
    let w = write(dir.path(), "we.json", WORKED);
    assert_eq!(code_of(&["check-tight", w.to_str().unwrap()]), 1);
}

#[test]
fn planar_and_cones() {
    let dir = TempDir::new().unwrap();
    let w = write(dir.path(), "we.json", WORKED);
    let q = write(dir.path(), "q.json", QUADRANT);
    let (code, doc) = json_doc(&["scale2d", w.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(doc["details"]["pairs"], serde_json::json!([[1, 2], [2, 3]]));
    assert_eq!(code_of(&["scale2d", q.to_str().unwrap()]), 1);
    assert_eq!(code_of(&["cones", q.to_str().unwrap()]), 1);
    assert_eq!(code_of(&["cones", w.to_str().unwrap()]), 0);
}

#[test]
fn cone_sample_export() {
    let dir = TempDir::new().unwrap();
    let out = framescale(&["perturbed", "--v", "0.125"]);
    let f = write(dir.path(), "fv.json", &stdout(&out));
    let out = framescale(&["cones", f.to_str().unwrap(), "--subset", "1,2,3", "--grid", "12"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("# n=3 subset=1,2,3\n"));
    for line in text.lines().skip(1) {
        assert_eq!(line.split(' ').count(), 3);
    }
    assert_eq!(code_of(&["cones", f.to_str().unwrap(), "--subset", "6"]), 3);
}

#[test]
fn verify_round_trip_and_failure() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "we.json", WORKED);
    let out = framescale(&["scale", f.to_str().unwrap(), "--json"]);
    let doc = write(dir.path(), "doc.json", &stdout(&out));
    assert_eq!(code_of(&["verify", f.to_str().unwrap(), "--coeffs", doc.to_str().unwrap()]), 0);
    let bad = write(dir.path(), "bad.json", r#"{"coefficients": [1, 1, 1]}"#);
    assert_eq!(code_of(&["verify", f.to_str().unwrap(), "--coeffs", bad.to_str().unwrap()]), 1);
    let short = write(dir.path(), "short.json", r#"{"coefficients": [1]}"#);
    assert_eq!(code_of(&["verify", f.to_str().unwrap(), "--coeffs", short.to_str().unwrap()]), 3);
}

#[test]
fn input_and_usage_errors() {
    let dir = TempDir::new().unwrap();
    let f = write(
        dir.path(),
        "short.json",
        r#"{"field": "R", "n": 2, "unit_norm": true, "vectors": [[1, 0], [0.9, 0]]}"#,
    );
    let out = framescale(&["scale", f.to_str().unwrap()]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("vector 1 has norm 0.9"));
    assert_eq!(code_of(&["scale", f.to_str().unwrap(), "--renormalize"]), 1);
    assert_eq!(code_of(&["scale"]), 3);
    assert_eq!(code_of(&["bogus"]), 3);
    assert_eq!(code_of(&["scale", "/nonexistent/file.json"]), 3);
    let w = write(dir.path(), "we.json", WORKED);
    assert_eq!(code_of(&["scale", w.to_str().unwrap(), "--tol-hull", "-1"]), 3);
    assert_eq!(code_of(&["--help"]), 0);
}

#[test]
fn tolerances_from_config_file() {
    let dir = TempDir::new().unwrap();
    let w = write(dir.path(), "we.json", WORKED);
    let cfg = write(dir.path(), "cfg.toml", "tau_hull = 1e-7\n");
    let (_, doc) = json_doc(&["scale", w.to_str().unwrap(), "--config", cfg.to_str().unwrap(), "--tol-null", "1e-6"]);
    assert_eq!(doc["tolerances"]["tau_hull"], 1e-7);
    assert_eq!(doc["tolerances"]["tau_null"], 1e-6);
    let typo = write(dir.path(), "typo.toml", "tau_hul = 1e-7\n");
    assert_eq!(code_of(&["scale", w.to_str().unwrap(), "--config", typo.to_str().unwrap()]), 3);
}

#[test]
fn json_output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let out = framescale(&["perturbed", "--v", "0.3"]);
    let f = write(dir.path(), "fv.json", &stdout(&out));
    for cmd in ["scale", "cones", "region", "gram", "diagram"] {
        let a = framescale(&[cmd, f.to_str().unwrap(), "--json", "--seed", "7"][..if cmd == "cones" { 5 } else { 3 }]);
        let b = framescale(&[cmd, f.to_str().unwrap(), "--json", "--seed", "7"][..if cmd == "cones" { 5 } else { 3 }]);
        assert_eq!(a.stdout, b.stdout, "{cmd}");
        assert!(!a.stdout.is_empty());
    }
}

#[test]
fn complex_frames() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "c.json", COMPLEX_ONB);
    assert_eq!(code_of(&["check-tight", f.to_str().unwrap()]), 0);
    assert_eq!(code_of(&["scale", f.to_str().unwrap()]), 0);
    let out = framescale(&["diagram", f.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).lines().count(), 2);
    assert_eq!(code_of(&["cones", f.to_str().unwrap()]), 3);
}

#[test]
fn batch_mode() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "a.json", ONB);
    write(dir.path(), "b.json", QUADRANT);
    write(dir.path(), "notes.txt", "ignored");
    let out = framescale(&["scale", "--batch", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "a.json: strictly scalable");
    assert_eq!(lines[1], "b.json: not scalable");
    assert!(lines[2].starts_with("summary: 2 files"));

    write(dir.path(), "c.json", "{");
    let (code, doc) = json_doc(&["scale", "--batch", dir.path().to_str().unwrap()]);
    assert_eq!(code, 3);
    assert_eq!(doc["summary"]["errors"], 1);
    assert_eq!(doc["files"].as_array().unwrap().len(), 3);
}

#[test]
fn quiet_suppresses_reports() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "we.json", WORKED);
    let out = framescale(&["scale", f.to_str().unwrap(), "--quiet"]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
}
