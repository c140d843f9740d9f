//! End-to-end runs of the installed binary: output contracts and exit codes.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

const HEADER: &str = "family,s,n,p,E,rho_sup,rho_tilde_sup,leading,remainder,explicit_rhs,sharpness_ratio,interp_gap,status";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_poussin"))
}

fn cfg_file(tag: &str, body: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("poussin_cli_{tag}_{}.json", std::process::id()));
    fs::write(&path, body).unwrap();
    path
}

fn stdout_lines(out: &Output) -> Vec<String> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(str::to_owned)
        .collect()
}

#[test]
fn sweep_prints_the_pinned_csv_contract() {
    let cfg = cfg_file("sweep", r#"{"n_range": [4, 4], "p_range": [2, 3]}"#);
    let out = bin().args(["sweep", "--config"]).arg(&cfg).output().unwrap();
    assert!(out.status.success());
    let lines = stdout_lines(&out);
    assert_eq!(lines[0], HEADER);
    assert_eq!(lines.len(), 3);
    for line in &lines[1..] {
        assert_eq!(line.split(',').count(), 13);
        assert!(line.ends_with(",ok"));
    }
    fs::remove_file(cfg).ok();
}

#[test]
fn out_of_range_cell_becomes_a_status_row() {
    let cfg = cfg_file("range", r#"{"n_range": [3, 3], "p_range": [5, 5]}"#);
    let out = bin().args(["sweep", "--config"]).arg(&cfg).output().unwrap();
    assert!(out.status.success(), "cell errors must not kill the run");
    let lines = stdout_lines(&out);
    assert_eq!(lines.len(), 2);
    assert!(lines[1].ends_with(",parameter range"));
    fs::remove_file(cfg).ok();
}

#[test]
fn empty_range_gives_header_only() {
    let cfg = cfg_file("empty", r#"{"n_range": [6, 5]}"#);
    let out = bin().args(["sweep", "--config"]).arg(&cfg).output().unwrap();
    assert!(out.status.success());
    assert_eq!(stdout_lines(&out), vec![HEADER.to_string()]);
    fs::remove_file(cfg).ok();
}

#[test]
fn config_problems_exit_with_2() {
    let cfg = cfg_file("badfam", r#"{"psi": {"family": "gauss"}}"#);
    let out = bin().args(["sweep", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown psi.family"));
    fs::remove_file(cfg).ok();

    let out = bin()
        .args(["sweep", "--config", "/nonexistent/poussin.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    let cfg = cfg_file("badkey", r#"{"psi": {"sigma": 0.1}}"#);
    let out = bin().args(["sweep", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    fs::remove_file(cfg).ok();

    let out = bin().args(["verify", "--check", "no_such_check"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn single_verify_check_passes() {
    let out = bin()
        .args(["verify", "--check", "tau_sum_identity"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASS tau_sum_identity"));
    assert_eq!(text.lines().count(), 1);
}

#[test]
fn perturbed_multipliers_fail_verification() {
    let out = bin()
        .args([
            "verify",
            "--check",
            "multiplier_identity",
            "--lambda-perturb",
            "1e-3",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("FAIL multiplier_identity"));
}

#[test]
fn json_sweep_round_trips_with_seed() {
    let cfg = cfg_file("json", r#"{"n_range": [4, 4], "p_range": [2, 2]}"#);
    let out = bin()
        .args(["sweep", "--format", "json", "--seed", "7", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["seed"], 7);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    for key in ["E", "rho_sup", "rho_tilde_sup", "explicit_rhs", "status", "seed"] {
        assert!(rows[0].get(key).is_some(), "missing {key}");
    }
    fs::remove_file(cfg).ok();
}

#[test]
fn runs_are_deterministic_in_the_seed() {
    let cfg = cfg_file("seed", r#"{"n_range": [5, 5], "p_range": [2, 2]}"#);
    let run = |seed: &str| {
        bin()
            .args(["sweep", "--seed", seed, "--config"])
            .arg(&cfg)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("1"), run("1"));
    assert_ne!(run("1"), run("2"));
    fs::remove_file(cfg).ok();
}

#[test]
fn kernel_emits_grid_samples() {
    let out = bin().args(["kernel", "--grid-size", "64"]).output().unwrap();
    assert!(out.status.success());
    let lines = stdout_lines(&out);
    assert_eq!(lines[0], "t,value");
    assert_eq!(lines.len(), 65);
    // value at t = 0 is the full weight sum
    assert!(lines[1].starts_with("0.0000000000000000e0,5.644684136"));
}

#[test]
fn approximate_writes_one_row_to_out() {
    let cfg = cfg_file("approx", r#"{"n_range": [4, 6], "p_range": [2, 2]}"#);
    let dst = std::env::temp_dir().join(format!("poussin_row_{}.csv", std::process::id()));
    let out = bin()
        .args(["approximate", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&dst)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(&dst).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], HEADER);
    assert_eq!(lines.len(), 2);
    assert!(lines[1].starts_with("q_pow_k_squared(0.5),2,4,2,"));
    fs::remove_file(cfg).ok();
    fs::remove_file(dst).ok();

    let cfg = cfg_file("approx_empty", r#"{"n_range": [6, 5]}"#);
    let out = bin().args(["approximate", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    fs::remove_file(cfg).ok();
}
