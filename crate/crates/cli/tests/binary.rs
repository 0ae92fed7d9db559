use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.kg"))
}

fn kgraph(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_kgraph"));
    cmd.args(args).env_remove("KGRAPH_MAX_DEPTH");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn decided_fixture_exits_zero() {
    let f = fixture("three-vertex");
    let out = kgraph(&["analyze", f.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("fails [exact]"));
}

#[test]
fn unknown_verdict_exits_two() {
    let f = fixture("t2-shear");
    let out = kgraph(&["analyze", f.to_str().unwrap(), "--max-degree", "1,1"], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("unknown [up-to-bounds]"));
}

#[test]
fn parse_failure_exits_one_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.kg");
    std::fs::write(&path, "kgraph 2\nvertex v\nsquare a b = c d\n").unwrap();
    let out = kgraph(&["validate", path.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("broken.kg:3:"), "{err}");
}

#[test]
fn missing_file_and_bad_usage_exit_one() {
    let out = kgraph(&["validate", "/nonexistent/graph.kg"], &[]);
    assert_eq!(out.status.code(), Some(1));
    let f = fixture("three-vertex");
    let out = kgraph(&["analyze", f.to_str().unwrap(), "--max-degree", "0"], &[]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(kgraph(&["frobnicate"], &[]).status.code(), Some(1));
    assert_eq!(kgraph(&["--help"], &[]).status.code(), Some(0));
}

#[test]
fn env_depth_override_and_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("out.json");
    let f = fixture("three-vertex");
    let out = kgraph(
        &["analyze", f.to_str().unwrap(), "--format", "json", "--report", report.to_str().unwrap()],
        &[("KGRAPH_MAX_DEPTH", "3")],
    );
    assert_eq!(out.status.code(), Some(0));
    let printed: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(printed, written);
    assert_eq!(printed["schema"], "report-v1");
    assert_eq!(printed["bounds"]["max_path_depth"], 3);

    let bad = kgraph(&["analyze", f.to_str().unwrap()], &[("KGRAPH_MAX_DEPTH", "0")]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn subcommands() {
    let three = fixture("three-vertex");
    let three = three.to_str().unwrap();
    let out = kgraph(&["matrices", three, "-N", "1,1", "--format", "json"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let json: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let m = &json["results"][0]["outcome"];
    assert_eq!(m["matrices"][0], serde_json::json!([["0", "1", "0"], ["1", "0", "1"], ["0", "1", "0"]]));
    assert_eq!(m["matrices"][1], serde_json::json!([["1", "0", "1"], ["0", "2", "0"], ["1", "0", "1"]]));
    assert_eq!(m["commute"], true);

    let out = kgraph(&["simplicity", three, "--target", "af-core", "--degree"], &[]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("not-simple"), "{}", stdout(&out));

    let skew = fixture("t2-degree-skew");
    let out = kgraph(&["skew", skew.to_str().unwrap(), "--window", "-1..1"], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("9 vertices"), "{}", stdout(&out));

    let out = kgraph(&["validate", three], &[]);
    assert_eq!(out.status.code(), Some(0));
}
