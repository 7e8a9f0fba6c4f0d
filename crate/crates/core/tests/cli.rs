use std::process::{Command, Output};

use serde_json::Value;

fn udtfs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_udtfs")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = udtfs(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON report")
}

#[test]
fn analyze_chain() {
    let v = json(&["analyze", "CHAIN4x3", "--quiet"]);
    let r = &v["results"];
    assert_eq!(v["command"], "analyze");
    assert_eq!(r["id_dim"], 1);
    assert_eq!(r["tp_K"], 3);
    assert_eq!(r["sauer_ok"], true);
}

#[test]
fn compress_single_type() {
    let v = json(&["compress", "CHAIN4x3", "--domain", "b0,b1,b2", "--type", "100", "--quiet"]);
    let e = &v["results"]["entries"][0];
    assert_eq!(e["certificate"]["n"], 1);
    assert_eq!(e["certificate"]["gammas"][0]["cols"][0], 0);
    assert_eq!(e["roundtrip_ok"], true);
}

#[test]
fn unrealized_type_is_a_contract_error() {
    let out = udtfs(&["compress", "CHAIN4x3", "--domain", "b0,b1,b2", "--type", "010"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn missing_file_is_an_input_error() {
    let out = udtfs(&["analyze", "/nonexistent/system.txt"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tiny_budget_is_reported() {
    let out = udtfs(&["compress", "INTV-FULL", "--all-types", "--budget", "1", "--quiet"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn indisc_halfline() {
    let v = json(&["indisc", "HALFLINE(10,6)", "--quiet"]);
    let r = &v["results"];
    assert_eq!(r["indiscernible"], true);
    assert_eq!(r["set"], false);
    assert_eq!(r["order_sensitive"]["s"], "10");
    assert_eq!(r["order_sensitive"]["t"], 0);
}

#[test]
fn schemes_membership() {
    let v = json(&["schemes", "SINGLETONS(5)", "--suite", "membership", "--max-b", "4", "--quiet"]);
    assert_eq!(v["results"]["valid"], true);
}

#[test]
fn threshold_suite_is_valid() {
    let v = json(&["schemes", "CHAIN4x3", "--suite", "threshold", "--max-b", "3", "--quiet"]);
    assert_eq!(v["results"]["valid"], true);
}

#[test]
fn gen_roundtrips_through_a_file() {
    let dir = std::env::temp_dir().join(format!("udtfs-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("i5.txt");
    let p = path.to_str().unwrap();
    let out = udtfs(&["gen", "intervals", "--points", "5", "--out", p]);
    assert!(out.status.success());
    let v = json(&["analyze", p, "--quiet"]);
    assert_eq!(v["results"]["cols"], 15);
    assert_eq!(v["results"]["id_dim"], 2);
    let again = json(&["analyze", "gen:intervals:5", "--quiet"]);
    assert_eq!(v["input_digest"], again["input_digest"]);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn json_to_file() {
    let dir = std::env::temp_dir().join(format!("udtfs-json-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("r.json");
    let out = udtfs(&["analyze", "CUBE2", "--json", path.to_str().unwrap(), "--quiet"]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(v["results"]["id_dim"], 2);
    std::fs::remove_dir_all(&dir).ok();
}
