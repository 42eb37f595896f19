use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn ils(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ils"))
        .args(args)
        .env_remove("ILS_NODE_BUDGET")
        .output()
        .expect("run ils")
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn reduce_matches_golden_outline() {
    let input = data("sample_square.json");
    let out = ils(&["reduce", "--in", input.to_str().unwrap(), "--p", "3,2,1,1,1"]);
    assert_eq!(out.status.code(), Some(0));
    let golden = std::fs::read(data("sample_outline.json")).unwrap();
    assert_eq!(out.stdout, golden);
}

#[test]
fn construct_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sq.json");
    let out = ils(&["construct", "--parts", "3,2,2", "--order", "10", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["order"], 10);
    assert_eq!(v["subsquares"].as_array().unwrap().len(), 3);

    let verified = ils(&["verify", "--in", path.to_str().unwrap()]);
    assert_eq!(verified.status.code(), Some(0));
    let explicit = ils(&["verify", "--in", path.to_str().unwrap(), "--parts", "3,2,2"]);
    assert_eq!(explicit.status.code(), Some(0));
}

#[test]
fn grid_output_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sq.txt");
    let out = ils(&["construct", "--parts", "2,2", "--order", "6", "--format", "grid", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 6);
    assert_eq!(ils(&["verify", "--in", path.to_str().unwrap(), "--parts", "2,2"]).status.code(), Some(0));
}

#[test]
fn verify_rejects_broken_square() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, "1 2\n2 2\n").unwrap();
    let out = ils(&["verify", "--in", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("fail"));
}

#[test]
fn construct_infeasible_prints_certificate() {
    let out = ils(&["construct", "--parts", "2,2", "--order", "5"]);
    assert_eq!(out.status.code(), Some(2));
    let v = stdout_json(&out);
    assert_eq!(v["status"], "not_exists");
    let cert = &v["certificate"];
    assert_eq!(cert["A"], serde_json::json!([1]));
    assert_eq!(cert["B"], serde_json::json!([2]));
    assert!(cert["lhs"].as_i64().unwrap() < cert["rhs"].as_i64().unwrap());
}

#[test]
fn malformed_arguments_are_usage_errors() {
    assert_eq!(ils(&["construct", "--parts", "2,x", "--order", "5"]).status.code(), Some(64));
    assert_eq!(ils(&["construct", "--parts", "2,2"]).status.code(), Some(64));
    assert_eq!(ils(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(ils(&["verify", "--in", "/nonexistent/file.json"]).status.code(), Some(64));
}

#[test]
fn lift_then_reduce_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let lifted = ils(&["lift", "--in", data("sample_outline.json").to_str().unwrap()]);
    assert_eq!(lifted.status.code(), Some(0), "{}", String::from_utf8_lossy(&lifted.stderr));
    let path = dir.path().join("lifted.json");
    std::fs::write(&path, &lifted.stdout).unwrap();
    assert_eq!(ils(&["verify", "--in", path.to_str().unwrap()]).status.code(), Some(0));
    let again = ils(&["reduce", "--in", path.to_str().unwrap(), "--p", "3,2,1,1,1"]);
    assert_eq!(again.stdout, std::fs::read(data("sample_outline.json")).unwrap());
}

#[test]
fn check_and_search_and_decide() {
    let pass = ils(&["check", "--parts", "2,2", "--order", "6"]);
    assert_eq!(pass.status.code(), Some(0));
    assert_eq!(stdout_json(&pass)["status"], "pass");
    let fail = ils(&["check", "--parts", "2,2", "--order", "5"]);
    assert_eq!(fail.status.code(), Some(2));
    assert_eq!(stdout_json(&fail)["status"], "violation");

    let found = ils(&["search", "--parts", "2,1", "--order", "5"]);
    assert_eq!(found.status.code(), Some(0));
    assert_eq!(stdout_json(&found)["status"], "exists");
    let none = ils(&["search", "--parts", "2,1", "--order", "4"]);
    assert_eq!(none.status.code(), Some(2));

    let decided = ils(&["decide", "--parts", "3,2,2,1", "--order", "8"]);
    assert_eq!(decided.status.code(), Some(0));
    assert_eq!(stdout_json(&decided)["status"], "not_exists");
    let exists = ils(&["decide", "--parts", "4,3,3,2,2", "--order", "18"]);
    assert_eq!(stdout_json(&exists)["status"], "exists");
}
