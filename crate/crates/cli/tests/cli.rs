use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cayley-ci")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn closure_of_cyclic_five() {
    let out = run(&["closure", "--spec", r#"{"kind":"cyclic","n":5}"#, "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["closure_order"], 5);
    assert_eq!(v["is_k_closed"], true);
}

#[test]
fn reproduce_reports() {
    let out = run(&["reproduce", "zsigmondy-table"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["claim"], "zsigmondy-table");
    assert_eq!(v["pass"], true);
    assert!(v.get("wall_time_ms").is_none());

    let out = run(&["reproduce", "example-degree-20", "--timing"]);
    let v = json(&out);
    assert_eq!(v["outputs"]["closure_order"], 400);
    assert_eq!(v["outputs"]["classes"], 2);
    assert!(v["wall_time_ms"].is_u64());
}

#[test]
fn reports_are_stable() {
    assert_eq!(run(&["reproduce", "cor1-p7-n3"]).stdout, run(&["reproduce", "cor1-p7-n3"]).stdout);
}

#[test]
fn construct_feeds_tower() {
    let dir = std::env::temp_dir().join(format!("cayley-ci-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = run(&["construct", "--spec", "dicyclic(3)"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["order"], 12);
    let path = dir.join("r.json");
    std::fs::write(&path, v["group"].to_string()).unwrap();
    let p = path.to_str().unwrap();
    let log = dir.join("log.jsonl");
    let out = run(&["tower", p, p, "--transcript", log.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["outcome"], "found");
    let lines = std::fs::read_to_string(&log).unwrap();
    assert!(lines.lines().all(|l| serde_json::from_str::<Value>(l).is_ok()));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn ci_check_on_holomorph() {
    let out = run(&["ci-check", "--spec", "dicyclic(5)", "--ambient-spec", "frobenius(5,4)"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["classes"], 2);
    assert_eq!(v["status"], "not_ci_witness");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["reproduce", "no-such-claim"]).status.code(), Some(2));
    assert_eq!(run(&["tower", "{not json", "{}"]).status.code(), Some(2));
    assert_eq!(run(&["closure", "--spec", "cyclic(-1)"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    let budget = run(&["closure", "--spec", "cyclic(12)", "--budget", "4"]);
    assert_eq!(budget.status.code(), Some(3));
    let cap = run(&["ci-check", "--spec", "frobenius(5,4)", "--cap", "10"]);
    assert_eq!(cap.status.code(), Some(3));
}
