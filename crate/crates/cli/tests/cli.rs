use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_boxcover"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_stdout(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn json_stderr(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stderr);
    let line = text.lines().find(|l| l.starts_with('{')).expect("error JSON on stderr");
    serde_json::from_str(line).unwrap()
}

#[test]
fn tower_sizes_and_files() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().to_str().unwrap();
    let out = run(&["tower", "--seed", "ags-rose", "--levels", "4", "--out", out_dir]);
    assert!(out.status.success());
    let v = json_stdout(&out);
    assert_eq!(v["sizes"], serde_json::json!([1, 4, 128]));
    assert_eq!(v["deck_ranks"], serde_json::json!([2, 5]));
    assert_eq!(v["truncated"], Value::Bool(true));
    for f in ["level_0.json", "level_2.json", "tower.json", "tower.csv"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    // a written level reads back in as a seed
    let level = dir.path().join("level_1.json");
    let out = run(&["tower", "--graph", level.to_str().unwrap(), "--levels", "2"]);
    assert!(out.status.success());
    assert_eq!(json_stdout(&out)["sizes"], serde_json::json!([4, 128]));
}

#[test]
fn tower_csv_doubles_girth() {
    let out = run(&["tower", "--seed", "cycle4", "--levels", "5", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let girths: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').nth(2).unwrap()).collect();
    assert_eq!(girths, ["4", "8", "16", "32", "64"]);
}

#[test]
fn output_is_deterministic() {
    let a = run(&["ext-verify", "--tower", "dihedral", "--grid"]);
    let b = run(&["ext-verify", "--tower", "dihedral", "--grid"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let a = run(&["tower", "--seed", "theta", "--levels", "3", "--format", "dot"]);
    let b = run(&["tower", "--seed", "theta", "--levels", "3", "--format", "dot"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn walls_warns_on_bridges() {
    let out = run(&["walls", "--seed", "path-cycle"]);
    assert!(out.status.success());
    let v = json_stdout(&out);
    assert!(!v["agreement"]["warnings"].as_array().unwrap().is_empty());
    let out = run(&["walls", "--seed", "cycle4", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 9);
}

#[test]
fn embed_reports_negative_type() {
    let out = run(&["embed", "--fixture", "k23"]);
    assert!(out.status.success());
    let v = json_stdout(&out);
    assert!(v["min_eigenvalue"].as_f64().unwrap() < -1e-3);
    assert_eq!(v["negative_type"], Value::Bool(false));
    let out = run(&["embed", "--seed", "cycle4", "--levels", "4"]);
    assert!(out.status.success());
    let v = json_stdout(&out);
    assert_eq!(v["identity_exact"], Value::Bool(true));
    assert_eq!(v["negative_type"], Value::Bool(true));
}

#[test]
fn embed_reads_metric_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.csv");
    fs::write(&path, "0,1,2\n0,1,2\n1,0,1\n2,1,0\n").unwrap();
    let out = run(&["embed", "--metric", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(json_stdout(&out)["points"], 3);
    fs::write(&path, "0,1\n0,x\n1,0\n").unwrap();
    let out = run(&["embed", "--metric", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn ext_verify_passes_and_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["ext-verify", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json_stdout(&out);
    assert_eq!(v["pass"], Value::Bool(true));
    assert_eq!(v["S_G"], 1.0);
    for f in ["triple_0.json", "triple_1.json", "lemma.json", "verdict.json", "gram.csv"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let grid = run(&["ext-verify", "--grid", "--min-cutoff", "1"]);
    assert!(grid.status.success());
    let all = json_stdout(&grid);
    assert_eq!(all.as_array().unwrap().len(), 12);
    assert!(all.as_array().unwrap().iter().all(|v| v["pass"] == Value::Bool(true)));
}

#[test]
fn ext_verify_zero_radius_is_vacuous() {
    let out = run(&["ext-verify", "--R", "0"]);
    assert!(out.status.success());
    let v = json_stdout(&out);
    assert_eq!(v["pairs_1"], 0);
}

#[test]
fn ext_verify_failure_has_witness() {
    let out = run(&["ext-verify", "--tower", "dihedral", "--t", "50"]);
    assert_eq!(out.status.code(), Some(4));
    let e = json_stderr(&out);
    assert_eq!(e["kind"], "verification");
    assert_eq!(json_stdout(&out)["pass"], Value::Bool(false));
}

#[test]
fn exit_codes() {
    let out = run(&["tower", "--graph", "/nonexistent/graph.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_stderr(&out)["kind"], "input");
    let out = run(&["ext-verify", "--gap", "5"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json_stderr(&out)["error"], "GapTooSmall");
    let out = run(&["ext-verify", "--tower", "semidirect-swap", "--kernel", "induced"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json_stderr(&out)["error"], "KernelNotPSD");
    let out = run(&["tower", "--seed", "nope"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn envelope_of_generating_sets() {
    let out = run(&["envelope", "--builtin", "generators", "--format", "json"]);
    assert!(out.status.success());
    let v = json_stdout(&out);
    assert_eq!(v["monotone"], Value::Bool(true));
    assert_eq!(v["lower_positive"], Value::Bool(true));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.csv");
    fs::write(&path, "0,1,2\n0,1,2\n1,0,1\n2,1,0\n").unwrap();
    let p = path.to_str().unwrap();
    let out = run(&["envelope", "--a", p, "--b", p]);
    let text = String::from_utf8(out.stdout).unwrap();
    for line in text.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        assert!(f[0] == f[1] && f[1] == f[2], "{line}");
    }
}
