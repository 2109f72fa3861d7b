//! End-to-end checks of the installed binary: exit codes, output shapes,
//! reproducibility of the config line, and the solver guard env knob.

use std::process::{Command, Output};

use congest_lb::instances::{make_intersecting, InstanceShape};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_congest-lb"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

#[test]
fn verify_all_passes() {
    let out = run(&["verify", "--suite", "all", "--samples", "3"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    assert!(report.as_array().is_some_and(|suites| !suites.is_empty()));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("config: command=verify"));
    assert!(stderr.contains("suite code-distance: pass"));
}

#[test]
fn build_emits_graph_json() {
    let out = run(&["build", "--family", "linear", "--seed", "11"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["nodes"].as_array().unwrap().len(), 24);
    assert!(v["instance_digest"].is_string());
    assert_eq!(v["seed"], serde_json::json!(11));
}

#[test]
fn build_is_reproducible_from_seed() {
    let a = run(&["build", "--family", "quadratic", "--seed", "5"]);
    let b = run(&["build", "--family", "quadratic", "--seed", "5"]);
    let c = run(&["build", "--family", "quadratic", "--seed", "6"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn solve_reads_instance_file() {
    let inst = make_intersecting(2, 3, InstanceShape::Linear, 2, 0.0, 0).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("inst.json");
    std::fs::write(&path, serde_json::to_string(&inst).unwrap()).unwrap();

    let out = run(&["solve", "--instance", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["weight"], serde_json::json!(10));
    assert_eq!(v["instance_digest"], serde_json::json!(inst.digest()));
}

#[test]
fn simulate_writes_transcript_jsonl() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("log.jsonl");
    let out = run(&[
        "simulate",
        "--family",
        "linear",
        "--promise",
        "disjoint",
        "--multiparty",
        "--transcript",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = stdout_json(&out);
    assert!(summary["rounds"].as_u64().unwrap() >= 1);
    assert!(summary["blackboard_bits"].as_u64().is_some());

    let log = std::fs::read_to_string(&path).unwrap();
    let first: serde_json::Value = serde_json::from_str(log.lines().next().unwrap()).unwrap();
    for key in ["round", "from", "to", "bits", "on_cut"] {
        assert!(first.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn reduce_matches_all_trials() {
    let out = run(&["reduce", "--family", "linear", "--trials", "4", "--seed", "3"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["matched"], serde_json::json!(4));
    assert_eq!(v["trials"].as_array().unwrap().len(), 4);
    assert!(String::from_utf8_lossy(&out.stderr).contains("matched 4/4"));
}

#[test]
fn report_covers_both_families() {
    let out = run(&["report"]);
    assert!(out.status.success());
    let rows = stdout_json(&out);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["family"], serde_json::json!("linear"));
    assert_eq!(rows[1]["family"], serde_json::json!("quadratic"));
    assert!(rows[0]["ratio"].as_f64().unwrap() > 0.0);
}

#[test]
fn guard_env_caps_solver() {
    let out = bin()
        .args(["solve", "--family", "linear"])
        .env("CONGEST_LB_GUARD", "10")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("guard=10"), "{stderr}");
    assert!(stderr.contains("error:"), "{stderr}");
}

#[test]
fn bad_flag_exits_with_usage_error() {
    let out = run(&["build", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn help_exits_zero() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("congest-lb"));
}
