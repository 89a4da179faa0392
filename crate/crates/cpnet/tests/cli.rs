//! End-to-end runs of the `cpnet` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn cpnet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cpnet")).args(args).env_remove("CPNET_BUDGET").output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn validate_reports_structure() {
    let out = cpnet(&["validate", "--net", &data("f1.cpnet")]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("valid\n"));
    assert!(text.contains("edges: 3\n"));
    assert!(text.contains("outcomes: 24\n"));
}

#[test]
fn rank_is_exact() {
    let out = cpnet(&["rank", "--net", &data("f1.cpnet"), "--outcome", "2,1,3,1", "--outcome", "2,1,3,2", "--decimal"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "121/24 (approx. 5.041667)\n61/12 (approx. 5.083333)\n");
}

#[test]
fn dominance_prints_witness() {
    let out = cpnet(&["dominate", "--net", &data("f1.cpnet"), "--o", "2,1,3,1", "--oprime", "2,1,2,2"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "true\noutcomes traversed: 3\nwitness: 2,1,2,2 -> 2,1,1,2 -> 2,1,1,1 -> 2,1,3,1\n"
    );
    let out = cpnet(&[
        "--format", "csv", "dominate", "--net", &data("f1.cpnet"), "--o", "2,2,1,1", "--oprime", "1,1,2,2", "--measures",
        "rank,suffix",
    ]);
    assert_eq!(stdout(&out), "answer,outcomes_traversed,witness,zero_reason\nfalse,0,,rank-initial\n");
}

#[test]
fn constrained_order_from_file() {
    let out = cpnet(&["order", "--net", &data("f1.cpnet"), "--permitted", &data("f1_permitted.txt"), "--strict"]);
    assert!(out.status.success());
    let first: Vec<String> = stdout(&out).lines().map(|l| l.split(' ').next().unwrap().to_string()).collect();
    assert_eq!(first, ["1,1,2,2", "1,1,2,1", "1,1,3,2", "1,1,3,1", "1,2,3,1", "1,2,1,1", "1,2,1,2"]);
}

#[test]
fn tie_groups_are_bracketed() {
    let out = cpnet(&["order", "--net", &data("f1.cpnet")]);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 18);
    assert_eq!(text.lines().filter(|l| l.starts_with('[')).count(), 6);
}

#[test]
fn oracle_respects_budget_from_env() {
    let args = ["oracle", "--net", &data("f1.cpnet"), "--o", "2,1,3,1", "--oprime", "2,1,2,2"];
    let out = cpnet(&args);
    assert_eq!(stdout(&out), "strictly-preferred\n");
    let out = Command::new(env!("CARGO_BIN_EXE_cpnet")).args(args).env("CPNET_BUDGET", "10").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: "));
}

#[test]
fn exit_codes() {
    let out = cpnet(&["validate", "--net", &data("cyclic.cpnet")]);
    assert_eq!(out.status.code(), Some(1));
    let out = cpnet(&["rank", "--net", &data("f1.cpnet")]);
    assert_eq!(out.status.code(), Some(2));
    let out = cpnet(&["rank", "--net", &data("f1.cpnet"), "--outcome", "3,1,1,1"]);
    assert_eq!(out.status.code(), Some(1));
    let out = cpnet(&["dominate", "--net", &data("f1.cpnet"), "--o", "1,1,1,1", "--oprime", "2,2,2,2", "--measures", "speed"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn generate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.cpnet");
    let args = ["--seed", "9", "generate", "--n", "6", "--d-u", "3", "--indifference-rate", "0.2"];
    let out = cpnet(&[&args[..], &["--out", path.to_str().unwrap()]].concat());
    assert!(out.status.success());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout(&cpnet(&args)));
    let out = cpnet(&["validate", "--net", path.to_str().unwrap(), "--mode", "indifference"]);
    assert!(out.status.success());
}

#[test]
fn bench_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = cpnet(&[
        "--seed", "3", "bench", "--n", "3-4", "--nets", "5", "--queries", "4", "--out-dir", dir.path().to_str().unwrap(),
        "--stem", "t",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let raw = std::fs::read_to_string(dir.path().join("t.raw.csv")).unwrap();
    assert!(raw.starts_with("n,d_U,cpnet_id,query_id,method,answer,outcomes_traversed,time_ns,zero_reason\n"));
    assert_eq!(raw.lines().count(), 1 + 2 * 5 * 4 * 7);
    let agg = std::fs::read_to_string(dir.path().join("t.agg.csv")).unwrap();
    assert!(agg.starts_with("n,d_U,method,mean_ot,se_ot,mean_time_ns,se_time_ns,z_p,prop_false\n"));
    assert_eq!(agg.lines().count(), 1 + 2 * 7);
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("t.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["spec"]["seed"], 3);
}
