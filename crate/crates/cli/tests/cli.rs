use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use dqcopt::frontend::{generate, write_corpus, Family};

fn dqcopt(args: &[&str]) -> Output {
    dqcopt_env(args, None)
}

fn dqcopt_env(args: &[&str], seed_env: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_dqcopt"));
    cmd.args(args).env_remove("DQCOPT_SEED");
    if let Some(v) = seed_env {
        cmd.env("DQCOPT_SEED", v);
    }
    cmd.output().expect("binary runs")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn read_dir_sorted(dir: &Path) -> BTreeMap<String, String> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read_to_string(e.path()).unwrap())
        })
        .collect()
}

#[test]
fn user_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    assert_eq!(dqcopt(&["run", "--bogus"]).status.code(), Some(1));
    assert_eq!(dqcopt(&["frobnicate"]).status.code(), Some(1));
    let missing = dir.path().join("nope");
    assert_eq!(dqcopt(&["run", "--corpus", p(&missing), "--out", p(&out)]).status.code(), Some(1));
    assert_eq!(dqcopt(&["run", "--corpus", p(dir.path()), "--out", p(&out), "--qpus", "1..3"]).status.code(), Some(1));
    assert_eq!(dqcopt(&["run", "--corpus", p(dir.path()), "--out", p(&out), "--strategies", "magic"]).status.code(), Some(1));

    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "a,b,c\n1,2,3\n").unwrap();
    let summary = dir.path().join("s.json");
    assert_eq!(dqcopt(&["summarize", "--in", p(&bad), "--out", p(&summary)]).status.code(), Some(1));
    assert!(dqcopt(&["--help"]).status.success());
}

#[test]
fn single_circuit_run_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    fs::create_dir(&corpus).unwrap();
    write_corpus(&corpus, &[generate(Family::Random, 12, 4).unwrap()]).unwrap();
    let csv = dir.path().join("results.csv");
    let run = dqcopt(&["run", "--corpus", p(&corpus), "--out", p(&csv), "--repeats", "1", "--seed", "3"]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(dir.path().join("results.summary.json").exists());

    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("circuit_id,width,strategy,k,n1q,n2q,n3q,depth_max,depth_mean,n_nonlocal,conn_minus_1,compile_time_s")
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 36);

    let json_path = dir.path().join("again.json");
    let sum = dqcopt(&["summarize", "--in", p(&csv), "--out", p(&json_path)]);
    assert!(sum.status.success());
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(
        fs::read_to_string(&json_path).unwrap(),
        fs::read_to_string(dir.path().join("results.summary.json")).unwrap()
    );

    for s in ["baseline", "global", "local", "hybrid"] {
        let mut times: Vec<f64> = rows.iter().filter(|r| r[2] == s).map(|r| r[11].parse().unwrap()).collect();
        let n1q: Vec<f64> = rows.iter().filter(|r| r[2] == s).map(|r| r[4].parse().unwrap()).collect();
        assert_eq!(times.len(), 9);
        let mean = times.iter().sum::<f64>() / 9.0;
        let var = times.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / 8.0;
        times.sort_by(f64::total_cmp);
        let median = times[4];

        let entry = json["strategies"].as_array().unwrap().iter().find(|e| e["strategy"] == s).unwrap();
        let t = &entry["compile_time_s"];
        assert!((t["mean"].as_f64().unwrap() - mean).abs() <= 1e-12);
        assert!((t["median"].as_f64().unwrap() - median).abs() <= 1e-12);
        assert!((t["stddev"].as_f64().unwrap() - var.sqrt()).abs() <= 1e-12);
        let n1q_mean = n1q.iter().sum::<f64>() / 9.0;
        assert!((entry["means"]["n1q"].as_f64().unwrap() - n1q_mean).abs() <= 1e-12);
    }
}

#[test]
fn seed_env_applies_only_without_flag() {
    let dir = tempfile::tempdir().unwrap();
    let gen = |name: &str, flag: Option<&str>, env: Option<&str>| {
        let out = dir.path().join(name);
        let mut args = vec!["gen-corpus", "--out", p(&out), "--max-width", "8"];
        if let Some(f) = flag {
            args.extend(["--seed", f]);
        }
        assert!(dqcopt_env(&args, env).status.success());
        read_dir_sorted(&out)
    };
    let from_env = gen("env", None, Some("5"));
    let from_flag = gen("flag", Some("5"), None);
    let overridden = gen("both", Some("0"), Some("5"));
    let default = gen("none", None, None);
    assert_eq!(from_env, from_flag);
    assert_eq!(overridden, default);
    assert_ne!(from_env, default);

    let bad = dqcopt_env(&["gen-corpus", "--out", p(&dir.path().join("x"))], Some("abc"));
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn verify_small_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("c");
    assert!(dqcopt(&["gen-corpus", "--out", p(&corpus), "--max-width", "4"]).status.success());
    let out = dqcopt(&["verify", "--corpus", p(&corpus), "--qpus", "2,3"]);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains(" 0 failed"), "{stdout}");
}
