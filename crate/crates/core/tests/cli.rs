use std::process::{Command, Output};

use rigidbound::graph::fixtures;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rigidbound")).args(args).output().unwrap()
}

fn write_graph(name: &str, text: &str) -> String {
    let path = std::env::temp_dir().join(format!("rigidbound_cli_{name}.txt"));
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn analyze_k33_text() {
    let file = write_graph("k33", &fixtures::k33().to_edge_list());
    let out = run(&["analyze", &file]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("mv         11"));
    assert!(text.contains("bound      22 mod rigid motions (MVTimes2)"));
}

#[test]
fn analyze_json_fields() {
    let file = write_graph("seven", &fixtures::seven_worst().to_edge_list());
    let out = run(&["analyze", &file, "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["mv"], 28);
    assert_eq!(v["bound_mod_rigid"], 56);
    assert_eq!(v["rule_applied"], "MVTimes2");
    assert_eq!(v["chosen_system"]["equations"].as_array().unwrap().len(), 4);
}

#[test]
fn non_laman_exits_with_2() {
    let file = write_graph("k4", "n 4\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n");
    let out = run(&["analyze", &file, "--json"]);
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["laman"], false);
    assert!(v.get("bound_mod_rigid").is_none());
}

#[test]
fn bad_input_exits_with_1() {
    let file = write_graph("bad", "n 3\n1 x\n");
    let out = run(&["analyze", &file]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    assert_eq!(run(&["table", "--n-max", "9"]).status.code(), Some(1));
    assert_eq!(run(&["analyze", "/nonexistent/graph.txt"]).status.code(), Some(1));
}

#[test]
fn census_and_table_text() {
    let out = run(&["census", "--n", "6"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.ends_with("13 graphs\n"));
    assert_eq!(text.lines().filter(|l| l.starts_with("H2")).count(), 2);
    let out = run(&["table", "--n-max", "5", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let bounds: Vec<u64> = v.as_array().unwrap().iter().map(|r| r["bound"].as_u64().unwrap()).collect();
    assert_eq!(bounds, vec![2, 4, 8]);
}
