use std::path::Path;
use std::process::{Command, Output};

fn qepi(args: &[&str], out_dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qepi"))
        .args(args)
        .env("QEPI_OUT_DIR", out_dir)
        .output()
        .unwrap()
}

fn config(dir: &Path, text: &str) -> String {
    let path = dir.join("run.cfg");
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn passing_run_exits_zero_and_writes_default_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "trials = 3\n");
    let out = qepi(&["run", "--suite", "gaussian-epi", "--config", &cfg, "--seed", "5"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = std::fs::read_to_string(dir.path().join("gaussian-epi-seed5.csv")).unwrap();
    let mut lines = report.lines();
    assert!(lines.next().unwrap().starts_with("# qepi="));
    assert!(lines.next().unwrap().starts_with("suite,check,seed,trial"));
    assert!(lines.all(|l| l.starts_with("gaussian-epi,")));
}

#[test]
fn jsonl_output_to_explicit_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "suite = fisher\ntrials = 1\n");
    let target = dir.path().join("nested/report.jsonl");
    let out = qepi(
        &["run", "--config", &cfg, "--format", "jsonl", "--out", target.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&target).unwrap();
    let rows: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(rows[0]["suite"], "fisher");
    assert!(rows[1..].iter().all(|r| r["details"]["normative"].is_boolean()));
}

#[test]
fn invalid_config_exits_two_without_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "lambda_grid = [0.5, 1.0]\n");
    let out = qepi(&["run", "--suite", "gaussian-epi", "--config", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.path().join("gaussian-epi-seed0.csv").exists());
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn normative_failure_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "trials = 1\ntolerance.fisher_fd_agreement = 0\n");
    let out = qepi(&["run", "--suite", "fisher", "--config", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
    let report = std::fs::read_to_string(dir.path().join("fisher-seed0.csv")).unwrap();
    assert!(report.lines().any(|l| l.contains("fd_agreement") && l.contains(",false,")));
}

#[test]
fn describe_prints_moments() {
    let dir = tempfile::tempdir().unwrap();
    let out = qepi(&["describe", "thermal(1)*vacuum"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["modes"], 2);
    let entropy = v["gaussian"]["entropy"].as_f64().unwrap();
    assert!((entropy - 4f64.ln()).abs() < 1e-12);
}

#[test]
fn describe_parse_error_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = qepi(&["describe", "thermal(1)*squash(2)"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("11"));
}
