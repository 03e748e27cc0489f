use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn localctl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_localctl")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn json(out: &Output) -> Value {
    assert_eq!(code(out), 0, "{}", stderr(out));
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert_eq!(text.lines().count(), 1, "{text}");
    serde_json::from_str(&text).unwrap()
}

/// Data rows of a CSV file, after checking the header and params line.
fn rows(path: &Path, header: &str) -> Vec<Vec<String>> {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(header));
    let params = lines.next().unwrap();
    assert!(params.starts_with("# params: {"), "{params}");
    lines.map(|l| l.split(',').map(String::from).collect()).collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn sweep_j_reference_run() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig3.csv");
    let p = path.to_str().unwrap();
    let args = ["sweep-j", "--beta-h", "0.5", "--beta-c", "1", "--j-min", "-5", "--j-max", "5", "--j-step", "0.1", "-o", p];
    let out = localctl(&args);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let r = rows(&path, "J,h_opt,work_density,efficiency,mode");
    assert_eq!(r.len(), 101);
    let js: Vec<f64> = r.iter().map(|row| num(&row[0])).collect();
    assert!(js.windows(2).all(|w| w[0] < w[1]));
    let zero = r.iter().find(|row| num(&row[0]) == 0.0).unwrap();
    assert!((num(&zero[3]) - 0.5).abs() < 1e-6);
    assert!(r.iter().all(|row| row[4] == "paper"));

    let first = fs::read(&path).unwrap();
    let mut threaded = args.to_vec();
    threaded.extend(["--threads", "3"]);
    assert_eq!(code(&localctl(&threaded)), 0);
    assert_eq!(fs::read(&path).unwrap(), first);
}

#[test]
fn sweep_j_free_mode_and_stdout() {
    let out = localctl(&["sweep-j", "--j-min", "-1", "--j-max", "1", "--j-step", "0.5", "--mode", "free"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 7);
    assert!(text.lines().skip(2).all(|l| l.ends_with(",free")));
}

#[test]
fn config_errors_exit_two_and_name_the_flag() {
    for (args, flag) in [
        (vec!["sweep-j", "--j-step", "0"], "--j-step"),
        (vec!["sweep-j", "--j-min", "1", "--j-max", "0"], "--j-max"),
        (vec!["sweep-j", "--mode", "fast"], "--mode"),
        (vec!["sweep-j", "--threads", "0"], "--threads"),
        (vec!["precision", "-N", "13", "--epsilon", "0.1"], "-N"),
        (vec!["precision", "-N", "6"], "--epsilon"),
        (vec!["bound", "--beta-h", "1", "--beta-c", "0.5", "--h-a", "4", "--h-b", "1", "--h-c", "0.5", "--h-d", "2"], "--beta-h"),
        (vec!["bound", "--h-a", "4", "--h-b", "1", "--h-c", "0.5"], "--h-d"),
        (vec!["control", "--controls", "site0:q"], "--controls"),
    ] {
        let out = localctl(&args);
        assert_eq!(code(&out), 2, "{args:?}");
        assert!(stderr(&out).contains(flag), "{args:?}: {}", stderr(&out));
    }
    assert_eq!(code(&localctl(&["sweep-j", "--no-such-flag"])), 2);
}

#[test]
fn io_failures_exit_three() {
    let out = localctl(&["sweep-j", "--j-min", "0", "--j-max", "0", "-o", "/nonexistent-dir/x.csv"]);
    assert_eq!(code(&out), 3);
    let out = localctl(&["--config", "/nonexistent-dir/c.json", "gs-deg", "-N", "4"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn config_file_is_merged_under_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(&cfg, r#"{"beta_h": 0.25, "j_min": -1, "j_max": 1, "j_step": 0.5, "mode": "free"}"#).unwrap();
    let out_path = dir.path().join("s.csv");
    let out = localctl(&["--config", cfg.to_str().unwrap(), "sweep-j", "--j-step", "1", "-o", out_path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = fs::read_to_string(&out_path).unwrap();
    assert!(text.contains(r#""beta_h":0.25"#) && text.contains(r#""j_step":1.0"#) && text.contains(r#""mode":"free""#), "{text}");
    assert_eq!(text.lines().count(), 2 + 3);

    fs::write(&cfg, r#"{"beta_hot": 0.25}"#).unwrap();
    assert_eq!(code(&localctl(&["--config", cfg.to_str().unwrap(), "sweep-j"])), 2);
    fs::write(&cfg, "{not json").unwrap();
    assert_eq!(code(&localctl(&["--config", cfg.to_str().unwrap(), "sweep-j"])), 2);
}

#[test]
fn precision_curves() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig4.csv");
    let eps = ["0.05", "0.1", "0.25", "0.5"];
    let mut args = vec!["precision", "-N", "6", "--j-min", "0", "--j-max", "20", "--j-step", "0.5", "-o", path.to_str().unwrap()];
    for e in &eps {
        args.extend(["--epsilon", e]);
    }
    let out = localctl(&args);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let r = rows(&path, "J,epsilon,efficiency");
    assert_eq!(r.len(), 4 * 41);
    let mut last = Vec::new();
    for (k, e) in eps.iter().enumerate() {
        let curve: Vec<f64> = r[41 * k..41 * (k + 1)]
            .iter()
            .map(|row| {
                assert_eq!(num(&row[1]), num(e));
                num(&row[2])
            })
            .collect();
        let has_local_min = (1..curve.len() - 1).any(|i| curve[i] < curve[i - 1] && curve[i] < curve[i + 1]);
        assert!(has_local_min, "ε {e}: {curve:?}");
        last.push(*curve.last().unwrap());
    }
    assert!(last.windows(2).all(|w| w[0] > w[1]), "{last:?}");

    let out = localctl(&["precision", "-N", "6", "--epsilon", "0", "--j-min", "30", "--j-max", "30", "--j-step", "1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let eta = num(text.lines().nth(2).unwrap().split(',').nth(2).unwrap());
    let betas = localctl::InverseTemperaturePair::new(0.5, 1.0).unwrap();
    let limit = localctl::ising::ferro_efficiency_limit(0.0, 6, &betas).unwrap();
    assert!((eta - limit).abs() < 5e-2, "{eta} vs {limit}");
}

#[test]
fn optimal_field_curves() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig5.csv");
    let out = localctl(&["optimal-field", "--j-min", "-3", "--j-max", "0", "--j-step", "0.01", "-o", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let r = rows(&path, "beta,J,h_opt");
    assert_eq!(r.len(), 3 * 301);
    for row in &r {
        let (beta, j, h) = (num(&row[0]), num(&row[1]), num(&row[2]));
        if j.abs() <= 1.0 / (2.0 * beta) {
            assert_eq!(h, 0.0, "β {beta}, J {j}");
        } else if j.abs() >= 1.0 / (2.0 * beta) + 0.01 {
            assert!(h > 0.0, "β {beta}, J {j}");
        }
        if j == -1.0 {
            let residual = h - 2.0 * (beta * h).tanh();
            assert!(residual.abs() < 1e-3, "β {beta}: {h}");
            if beta == 1.0 {
                assert!((h - 1.91501).abs() < 1e-5, "{h}");
            }
        }
    }
}

#[test]
fn ground_state_query() {
    let v = json(&localctl(&["gs-deg", "-N", "8", "-J", "-1", "-h", "2"]));
    assert!(v["g0"].as_u64().unwrap() >= 16);
    assert_eq!(v["inputs"]["N"], 8);
    assert_eq!(v["inputs"]["h"], 2.0);
    let v = json(&localctl(&["gs-deg", "-N", "5", "-J", "-1", "-h", "0"]));
    assert_eq!(v["g0"], 10);
}

#[test]
fn control_queries() {
    let v = json(&localctl(&["control", "--model", "heisenberg-chain", "-N", "2", "--controls", "site0:x,z"]));
    assert_eq!(v["class"], "FULL");
    assert_eq!(v["dim"], 15);
    let v = json(&localctl(&["control", "--model", "ising-chain", "-N", "3", "--controls", "all:z"]));
    assert_eq!(v["class"], "COMMUTING");
    let v = json(&localctl(&["control", "--model", "ising-chain", "-N", "2", "--controls", "site0:x"]));
    assert_eq!(v["class"], "INTERMEDIATE");
}

#[test]
fn bound_and_cycle_queries() {
    let corners = ["--h-a", "4", "--h-b", "1", "--h-c", "0.5", "--h-d", "2"];
    let mut args = vec!["bound"];
    args.extend(corners);
    let v = json(&localctl(&args));
    assert!((v["bound"].as_f64().unwrap() - 0.5).abs() < 1e-9);
    assert_eq!(v["inputs"]["class"], "commuting");

    let mut args = vec!["cycle", "--micro-steps", "200"];
    args.extend(corners);
    args.extend(["-J", "1"]);
    let v = json(&localctl(&args));
    let eta = v["efficiency"].as_f64().unwrap();
    assert!(eta < 0.5 && eta <= v["bound"].as_f64().unwrap() + 1e-9);
    assert!(v["first_law_residual"].as_f64().unwrap().abs() < 1e-9);
    assert_eq!(v["converged"], true);

    // a hot corner that is much colder in entropy than the cold one
    let out = localctl(&["bound", "--h-a", "1", "--h-b", "10", "--h-c", "1", "--h-d", "0.1"]);
    assert_eq!(code(&out), 4, "{}", stderr(&out));
}

#[test]
fn help_is_long_only() {
    let out = localctl(&["gs-deg", "--help"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("-h <H>"));
}
