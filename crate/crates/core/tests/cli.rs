use std::process::{Command, Output};

use serde_json::Value;

fn rumorlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rumorlab"))
        .args(args)
        .env_remove("RUMORLAB_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn without_duration(text: &str) -> String {
    text.lines()
        .filter(|l| !l.contains("duration_seconds"))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn pc_table_csv() {
    let out = rumorlab(&["--seed", "1", "--format", "csv", "pc-table", "--d-min", "3", "--d-max", "11"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(
        body[0],
        "d,pc_numerator,pc_denominator,pc_float,pc_asymptotic,pc_rounded_4dp,pc_truncated_4dp"
    );
    assert_eq!(body.len(), 10);
    assert!(body[1].starts_with("3,32,39,0.82051"));
    assert!(text.contains("# seed=1\n"));
}

#[test]
fn pc_table_json_single_row() {
    let out = rumorlab(&["--seed", "2", "pc-table", "--d-min", "3", "--d-max", "3"]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 1);
    assert_eq!(v["rows"][0]["pc_numerator"], "32");
    assert_eq!(v["rows"][0]["pc_denominator"], "39");
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["pc-table", "--d-min", "4", "--d-max", "3"],
        vec!["pc-table", "--d-min", "2"],
        vec!["theta", "--d", "4", "--p", "1.5"],
        vec!["simulate", "--d", "4", "--p", "1", "--alpha", "0.3"],
        vec!["alpha-c", "--d", "5", "--k", "1", "--h", "2"],
        vec!["no-such-command"],
    ] {
        let out = rumorlab(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn seed_from_environment_is_echoed() {
    let out = Command::new(env!("CARGO_BIN_EXE_rumorlab"))
        .args(["psi", "--d", "3", "--p", "1"])
        .env("RUMORLAB_SEED", "4242")
        .output()
        .unwrap();
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["manifest"]["seed"], 4242);
    assert!(String::from_utf8_lossy(&out.stderr).contains("seed = 4242"));
    assert!((v["psi"].as_f64().unwrap() - 0.581_988_897_471_6).abs() < 1e-10);
}

#[test]
fn unseeded_runs_still_report_a_seed() {
    let out = rumorlab(&["gw", "--d", "3", "--p", "0.5", "--replicas", "10"]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["manifest"]["seed"].is_u64());
}

#[test]
fn simulate_is_reproducible_and_writes_files() {
    let dir = std::env::temp_dir().join(format!("rumorlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let mut texts = Vec::new();
    for i in 0..2 {
        let path = dir.join(format!("run{i}.json"));
        let out = rumorlab(&[
            "--seed", "77", "--out", path.to_str().unwrap(), "simulate", "--d", "4", "--p", "1",
            "--level", "10", "--replicas", "300",
        ]);
        assert_eq!(out.status.code(), Some(0));
        texts.push(std::fs::read_to_string(&path).unwrap());
    }
    assert_eq!(without_duration(&texts[0]), without_duration(&texts[1]));
    let v: Value = serde_json::from_str(&texts[0]).unwrap();
    for key in ["estimate", "ci_low", "ci_high", "replicas", "cap_hits", "manifest"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn hub_path_sweep_csv() {
    let out = rumorlab(&[
        "--seed", "5", "--format", "csv", "simulate", "--topology", "hub-path", "--d", "5", "--k", "4",
        "--alpha", "0.9", "--h", "4", "--p", "1", "--level", "4", "--replicas", "200", "--sweep",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(body[0], "level,estimate,ci_low,ci_high");
    assert_eq!(body.len(), 6);
    assert!(body[1].starts_with("0,1,"));
}

#[test]
fn analytic_commands() {
    let v: Value = serde_json::from_str(&stdout(&rumorlab(&["alpha-c", "--d", "5", "--k", "3", "--h", "2"]))).unwrap();
    assert_eq!(v["feasible"], false);
    assert!((v["float_value"].as_f64().unwrap() - 1.690_434_78).abs() < 1e-6);

    let v: Value = serde_json::from_str(&stdout(&rumorlab(&["max-h", "--d", "5", "--k", "3"]))).unwrap();
    assert_eq!(v["max_h"], 1);
    assert!(v["log_d_over_log_k"].is_f64());

    let v: Value = serde_json::from_str(&stdout(&rumorlab(&["theta", "--d", "4", "--p", "0.5"]))).unwrap();
    assert_eq!(v["analytic"], 0.0);

    let v: Value =
        serde_json::from_str(&stdout(&rumorlab(&["--seed", "1", "audit-beta", "--k", "4", "--replicas", "1000"]))).unwrap();
    assert_eq!(v["beta_paper"]["numerator"], "3");
    assert_eq!(v["beta_paper"]["denominator"], "8");
    assert_eq!(v["beta_series"]["numerator"], "13");
    assert_eq!(v["beta_series"]["denominator"], "32");

    let out = rumorlab(&["--format", "csv", "offspring", "--d", "3"]);
    let text = stdout(&out);
    assert!(text.lines().any(|l| l.starts_with("0,0.25,")));
}
