use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn mvlab(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_mvlab"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn mvlab");
    if let Some(text) = stdin {
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    }
    drop(child.stdin.take());
    child.wait_with_output().unwrap()
}

fn json(args: &[&str]) -> Value {
    json_stdin(args, None)
}

fn json_stdin(args: &[&str], stdin: Option<&str>) -> Value {
    let mut full = vec!["--seed", "9", "--format", "json"];
    full.extend_from_slice(args);
    let out = mvlab(&full, stdin);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn all_pass(v: &Value) -> bool {
    v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true)
}

#[test]
fn reports_carry_schema_and_seed() {
    let v = json(&["bounds", "discrimination", "--m", "2", "--n", "2"]);
    assert_eq!(v["schema"], "mvlab-report/1");
    assert_eq!(v["seed"], 9);
    assert!(v.get("elapsed").is_none());
    let exact: Vec<&str> = v["results"].as_array().unwrap().iter().map(|r| r["exact"].as_str().unwrap()).collect();
    assert_eq!(exact, ["1/16", "5/8", "1"]);
}

#[test]
fn rank_count_table() {
    let v = json(&["bounds", "count", "--m", "2", "--n", "2", "--q", "2", "--verify"]);
    let counts: Vec<&str> = v["results"].as_array().unwrap().iter().map(|r| r["count"].as_str().unwrap()).collect();
    assert_eq!(counts, ["1", "9", "6"]);
    assert!(all_pass(&v));
}

#[test]
fn degree_examples() {
    assert_eq!(json(&["bounds", "degree", "--n", "2", "--xi", "2"])["summary"]["degree"], 1);
    assert_eq!(json(&["bounds", "degree", "--n", "5", "--constraints", "unit-interval"])["summary"]["degree"], 0);
}

#[test]
fn trace_all_two_by_two() {
    let v = json(&["trace", "--n", "2", "--all"]);
    assert_eq!(v["summary"]["correct"], 16);
    assert!(v["results"].as_array().unwrap().iter().all(|r| r["queries"] == 1));
    assert!(all_pass(&v));
}

#[test]
fn trace_file_with_budget_override() {
    let v = json_stdin(&["trace", "--matrix", "-", "--queries", "1"], Some("2 3 3\n1 0 0\n0 1 0\n0 0 0\n"));
    assert_eq!(v["results"][0]["trace"], 0);
    assert_eq!(v["results"][0]["queries"], 2);
    assert_eq!(v["theory"]["opt_success_at_budget"]["exact"], "1/2");
}

#[test]
fn parities_of_zero_matrix() {
    let v = json_stdin(&["parities", "--matrix", "-"], Some("2 2 3\n0 0 0\n0 0 0\n"));
    assert_eq!(v["results"][0]["row_parities"], serde_json::json!([0, 0]));
    assert_eq!(v["results"][0]["column_parities"], serde_json::json!([0, 0, 0]));
    assert_eq!(v["results"][0]["row_queries"], 1);
    let v = json(&["vmv-parities", "--all", "--m", "2", "--n", "2"]);
    assert!(all_pass(&v));
    assert!(v["results"].as_array().unwrap().iter().all(|r| r["row_queries"] == 2));
}

#[test]
fn identical_planted_rows_detected() {
    let v = json(&["identical", "--random", "200", "--m", "8", "--n", "16", "--planted"]);
    assert_eq!(v["summary"]["false_negatives"], 0);
    assert!(v["results"].as_array().unwrap().iter().all(|r| r["answer"] == true && r["queries"] == 6));
}

#[test]
fn majority_tie_flagged() {
    let v = json_stdin(&["majority", "--matrix", "-"], Some("1 0\n1 1\n"));
    assert_eq!(v["results"][0]["row_majority"], serde_json::json!(["tie", "1"]));
    assert_eq!(v["results"][0]["column_majority"], serde_json::json!(["1", "tie"]));
    assert_eq!(v["summary"]["ties"], 2);
}

#[test]
fn symmetrize_reports() {
    let v = json(&["symmetrize", "--m", "2", "--n", "3", "--circuit", "constant:0.25"]);
    assert!(v["summary"]["fit_residual"].as_f64().unwrap() < 1e-12);
    let v = json(&["symmetrize", "--m", "4", "--n", "4", "--circuit", "trace-guess"]);
    assert!(v["summary"]["fit_residual"].as_f64().unwrap() < 1e-8);
    let out = mvlab(&["symmetrize", "--values", "1,0,1,0,1", "--t", "1"], None);
    assert_eq!(out.status.code(), Some(1));
    let out = mvlab(&["symmetrize", "--m", "5", "--n", "4"], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}

#[test]
fn solve_reduction_zero_trials_is_empty() {
    let v = json(&["solve-reduction", "--n", "4", "--q", "3", "--trials", "0"]);
    assert!(v["results"].as_array().unwrap().is_empty());
    assert!(v["checks"].as_array().unwrap().is_empty());
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["oracle-check", "--q", "6", "--m", "2", "--n", "2"][..],
        &["trace", "--n", "3"],
        &["trace", "--n", "2", "--all", "--q", "3"],
        &["parities", "--m", "100", "--n", "2", "--random", "1"],
        &["no-such-command"],
    ] {
        assert_eq!(mvlab(args, None).status.code(), Some(2), "{args:?}");
    }
    let out = mvlab(&["majority", "--matrix", "-"], Some("1 2\n"));
    assert_eq!(out.status.code(), Some(2));
    let out = mvlab(&["parities", "--matrix", "-"], Some("2 1 2\n0 5\n"));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn csv_and_text_formats() {
    let out = mvlab(&["--format", "csv", "bounds", "discrimination", "--m", "2", "--n", "2"], None);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "t,exact,value\n0,1/16,0.0625\n1,5/8,0.625\n2,1,1.0\n");
    let out = mvlab(&["--seed", "3", "oracle-check", "--m", "1", "--n", "2"], None);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("oracle-check (seed 3)"));
    assert!(text.contains("PASS transpose simulation"));
}

#[test]
fn seed_is_echoed_when_drawn() {
    let out = mvlab(&["--format", "json", "bounds", "count", "--m", "1", "--n", "1"], None);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["seed"].is_u64());
}
