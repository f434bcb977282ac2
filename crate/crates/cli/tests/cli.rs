use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fknichols"))
        .args(args)
        .env_remove("FKNICHOLS_JOBS")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = run(&full);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn check_six_fails_with_witness() {
    let v = json(&["groupoid", "check", "6"]);
    assert_eq!(v["schemaVersion"], 1);
    assert_eq!(v["status"], "failsAt");
    assert_eq!(v["witnessReplays"], true);
    assert!(v["witness"].is_array());
}

#[test]
fn check_four_exists() {
    let v = json(&["groupoid", "check", "4"]);
    assert_eq!(v["status"], "exists");
    assert_eq!(v["objects"], 6);
}

#[test]
fn b2_nichols_series() {
    let v = json(&["nichols", "hilbert", "--group", "2", "1", "2", "--max-degree", "4"]);
    assert_eq!(v["hilbert"]["perDegree"], serde_json::json!([1, 4, 8, 12, 14]));
}

#[test]
fn compare_reports_divergence() {
    let v = json(&["hilbert", "compare", "--group", "2", "1", "2", "--max-degree", "4", "--modular"]);
    assert_eq!(v["firstDivergence"], 4);
    assert_eq!(v["quadratic"]["perDegree"], serde_json::json!([1, 4, 8, 12, 16]));
}

#[test]
fn fk_dihedral() {
    let v = json(&["fk", "hilbert", "--group", "7", "7", "2", "--max-degree", "3"]);
    assert_eq!(v["hilbert"]["perDegree"], serde_json::json!([1, 7, 36, 175]));
}

#[test]
fn pbw_and_subsystems() {
    let v = json(&["pbw", "dim", "4"]);
    assert_eq!(v["dimension"]["finite"], 256);
    let v = json(&["pbw", "dim", "5"]);
    assert_eq!(v["dimension"], "infinite");
    let v = json(&["subsystems", "5"]);
    assert_eq!(v["records"][0]["dimension"], 625);
}

#[test]
fn group_and_yd() {
    let v = json(&["group", "info", "4", "2", "3"]);
    assert_eq!(v["reflectionCount"], v["formulaCount"]);
    let v = json(&["yd", "decompose", "2", "2", "2"]);
    assert_eq!(v["braidIndecomposable"], false);
}

#[test]
fn json_round_trips() {
    let out = run(&["groupoid", "sweep", "--max", "40", "--format", "json"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    let again = serde_json::to_string_pretty(&v).unwrap() + "\n";
    assert_eq!(text, again);
}

#[test]
fn jobs_do_not_change_output() {
    let a = run(&["groupoid", "sweep", "--max", "80", "--jobs", "1", "--format", "json"]);
    let b = run(&["groupoid", "sweep", "--max", "80", "--jobs", "4", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
    let a = run(&["nichols", "hilbert", "--cyclic", "4", "--max-degree", "5", "--jobs", "1", "--format", "json"]);
    let b = run(&["nichols", "hilbert", "--cyclic", "4", "--max-degree", "5", "--jobs", "3", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn sweep_resumes_from_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("sweep.jsonl");
    let ck = ck.to_str().unwrap();
    let full = run(&["groupoid", "sweep", "--max", "60", "--format", "json"]);
    run(&["groupoid", "sweep", "--max", "30", "--checkpoint", ck]);
    let lines = std::fs::read_to_string(ck).unwrap().lines().count();
    assert_eq!(lines, 29);
    let resumed = run(&["groupoid", "sweep", "--max", "60", "--checkpoint", ck, "--format", "json"]);
    assert_eq!(full.stdout, resumed.stdout);
    assert_eq!(std::fs::read_to_string(ck).unwrap().lines().count(), 59);
}

#[test]
fn expect_conjecture_passes() {
    let out = run(&["groupoid", "sweep", "--max", "50", "--expect-conjecture"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(run(&["groupoid", "check", "6", "--no-such-flag"]).status.code(), Some(64));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["group", "info", "4", "3", "2"]).status.code(), Some(1));
    assert_eq!(run(&["pbw", "dim", "5", "--subset", "9"]).status.code(), Some(1));
    let out = run(&[
        "nichols", "hilbert", "--group", "4", "1", "3", "--max-degree", "4", "--max-block", "50",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn table_and_csv() {
    let out = run(&["nichols", "hilbert", "--cyclic", "3", "--max-degree", "3", "--format", "csv"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "degree,nichols\n0,1\n1,2\n2,3\n3,2\n");
    let out = run(&["groupoid", "check", "4"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().next().unwrap().starts_with("n  status"));
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = run(&["pbw", "dim", "3", "--format", "json", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["dimension"]["finite"], 9);
}
