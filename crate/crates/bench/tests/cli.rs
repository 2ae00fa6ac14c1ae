use std::{fs, path::PathBuf, process::Command};

fn steiner() -> Command {
    Command::new(env!("CARGO_BIN_EXE_steiner"))
}

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/fixtures")
}

fn run_fixtures(out: &std::path::Path, extra: &[&str]) -> std::process::Output {
    steiner()
        .args(["run", "--algo", "greedy", "--algo", "zel", "--algo", "ir", "--k", "2", "--k", "3"])
        .arg("--instances")
        .arg(fixtures())
        .arg("--best-known")
        .arg(fixtures().join("fixtures.best.csv"))
        .args(["--timeout-sec", "60", "--jobs", "2", "--out"])
        .arg(out)
        .args(extra)
        .output()
        .unwrap()
}

#[test]
fn run_aggregate_plots() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_fixtures(dir.path(), &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let results = fs::read_to_string(dir.path().join("results.csv")).unwrap();
    let mut lines = results.lines();
    assert_eq!(lines.next(), Some("instance,algorithm,cost,seconds,status"));
    assert_eq!(results.lines().count(), 1 + 2 * 4);
    assert!(results.contains("star3,greedy,3,"));

    let records = dir.path().join("records.csv");
    let agg = steiner().args(["aggregate", "--records"]).arg(&records).arg("--out").arg(dir.path()).output().unwrap();
    assert!(agg.status.success());
    let t1 = fs::read_to_string(dir.path().join("table1.csv")).unwrap();
    assert_eq!(t1, "Algorithm,Solved cases,Percent\ngreedy,2,100%\nzel,2,100%\nir-k2,2,100%\nir-k3,2,100%\n");
    let t2 = fs::read_to_string(dir.path().join("table2.csv")).unwrap();
    assert!(t2.starts_with("class,greedy_ratio,greedy_time,zel_ratio"));
    assert!(t2.lines().nth(1).unwrap().starts_with("Fx,1.000,"));
    assert!(dir.path().join("table3.csv").exists());

    let plots = steiner().args(["plots", "--records"]).arg(&records).arg("--out").arg(dir.path()).output().unwrap();
    assert!(plots.status.success());
    let hist = fs::read_to_string(dir.path().join("histogram.csv")).unwrap();
    assert_eq!(hist, "bin,greedy,zel,ir-k2,ir-k3\n1.00,2,2,2,2\n");
    assert!(dir.path().join("scatter_greedy__zel.csv").exists());
    assert!(dir.path().join("scatter_ir-k2__ir-k3.csv").exists());
}

#[test]
fn plot_outputs_are_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        assert!(run_fixtures(d.path(), &["--seed", "5"]).status.success());
        let records = d.path().join("records.csv");
        assert!(steiner().args(["plots", "--records"]).arg(&records).arg("--out").arg(d.path()).status().unwrap().success());
        assert!(steiner().args(["aggregate", "--records"]).arg(&records).arg("--out").arg(d.path()).status().unwrap().success());
    }
    for f in ["histogram.csv", "scatter_greedy__ir-k3.csv", "table1.csv"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn json_and_isolated_runs() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_fixtures(dir.path(), &["--format", "json", "--isolate", "--ir-no-cache"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let json = fs::read_to_string(dir.path().join("records.json")).unwrap();
    let records: serde_json::Value = serde_json::from_str(&json).unwrap();
    let list = records.as_array().unwrap();
    assert_eq!(list.len(), 8);
    assert!(list.iter().all(|r| r["status"] == "ok"));
    assert!(list.iter().any(|r| r["algorithm"] == "ir-k3-nocache"));
}

#[test]
fn solve_prints_a_tree() {
    let out = steiner()
        .args(["solve", "--algo", "dw", "--instance"])
        .arg(fixtures().join("star3.stp"))
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["cost"], 3);
    assert_eq!(v["edges"].as_array().unwrap().len(), 3);
}

#[test]
fn errors_set_the_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("broken.stp"), "33D32945 STP File\nSECTION Graph\nNodes 2\nE 1 3 1\nEND\nEOF\n").unwrap();
    let out = steiner()
        .args(["run", "--algo", "greedy", "--instances"])
        .arg(dir.path())
        .arg("--out")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert!(!out.status.success());
    let results = fs::read_to_string(dir.path().join("out/results.csv")).unwrap();
    assert!(results.contains("broken,greedy,,"));
    assert!(results.trim_end().ends_with("error"));

    let missing = steiner().args(["aggregate", "--records", "/nonexistent.csv", "--out", "/tmp"]).output().unwrap();
    assert!(!missing.status.success());
}
