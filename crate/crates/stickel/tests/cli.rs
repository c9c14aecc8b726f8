use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn stickel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stickel")).args(args).output().expect("binary runs")
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("stickel-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn lists_kinds() {
    let out = stickel(&["kinds"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 9);
    assert!(text.lines().any(|l| l == "burns-check"));
}

#[test]
fn selftest_report_shape() {
    let out = stickel(&["selftest"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["report_version"], 1);
    assert_eq!(v["kind"], "selftest");
    assert_eq!(v["conventions"].as_array().unwrap().len(), 4);
    let checks = v["reports"][0]["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["status"] == "verified-exact"));
    assert!(v["reports"][0].get("timing_ms").is_none());
}

#[test]
fn timing_is_opt_in() {
    let out = stickel(&["selftest", "--timing"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["reports"][0]["timing_ms"].is_u64());
}

#[test]
fn bad_config_exits_2() {
    let path = scratch("bad.toml", "[[experiment]]\nid = \"x\"\nq = 3\ns = [\"inf\"]\nt = [\"inf\"]\n");
    let out = stickel(&["theta", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("S and T"));
}

#[test]
fn missing_config_exits_2() {
    let out = stickel(&["theta", "--config", "/nonexistent/stickel.toml"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn ramified_layer_is_out_of_scope_not_failure() {
    let body = r#"
[[experiment]]
id = "ramified"
q = 3
s = ["inf"]
t = [[2, 1]]
layers = [{ carlitz = { m = [0, 1] } }]
"#;
    let path = scratch("ramified.toml", body);
    let out = stickel(&["theta", "--config", path.to_str().unwrap()]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let c = &v["reports"][0]["checks"][0];
    assert_eq!(c["status"], "out-of-scope");
    assert!(c["witness"].as_str().unwrap().contains("ramif"));
}

#[test]
fn out_flag_writes_file() {
    let path = scratch("placeholder", "");
    let out_path = path.with_file_name("report.json");
    let out = stickel(&["burns-check", "--jobs", "2", "--out", out_path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_slice(&std::fs::read(&out_path).unwrap()).unwrap();
    assert_eq!(v["reports"][0]["experiment"], "carlitz-t2");
}
