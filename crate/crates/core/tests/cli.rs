//! End-to-end runs of the `pflc` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use pfl::cli::Workspace;
use tempfile::TempDir;

fn pflc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pflc")).args(args).output().expect("binary runs")
}

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data").join(name).to_string_lossy().into_owned()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

const SMALL: &str = r#"
[model]
rule = "simple_fuzzy"
tnorm = "product"

[spaces.x]
kind = "pmf"
atoms = [[0, 0.25], [1, 0.25], [2, 0.5]]

[attributes.big]
space = "x"
breakpoints = [[0, 0], [2, 1]]
base = 0
"#;

#[test]
fn eval_prints_sorted_rounded_json() {
    let dir = TempDir::new().unwrap();
    let ws = write(&dir, "ws.toml", SMALL);
    let out = pflc(&["eval", "prob_omega_is", "big", "--workspace", ws.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // 0.25·0.5 + 0.5·1
    assert_eq!(json["results"]["value"], serde_json::json!(0.625));
    assert_eq!(json["command"], "eval");
    assert_eq!(json["inputs_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn unnormalized_pmf_is_rejected() {
    let dir = TempDir::new().unwrap();
    let ws = write(&dir, "ws.toml", &SMALL.replace("[2, 0.5]", "[2, 0.4]"));
    let out = pflc(&["eval", "prob_omega_is", "big", "--workspace", ws.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn improper_base_is_rejected_naming_properness() {
    let dir = TempDir::new().unwrap();
    let ws = write(&dir, "ws.toml", &SMALL.replace("base = 0", "base = 2"));
    let out = pflc(&["eval", "expect_xi", "big", "--workspace", ws.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("proper"));
}

#[test]
fn malformed_toml_and_unknown_command_exit_2() {
    let dir = TempDir::new().unwrap();
    let ws = write(&dir, "ws.toml", "[model\n");
    assert_eq!(pflc(&["eval", "prob_omega_is", "big", "--workspace", ws.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(pflc(&["frobnicate", "--workspace", ws.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn out_file_matches_stdout() {
    let dir = TempDir::new().unwrap();
    let target = dir.path().join("report.csv");
    let repro = data("reproductive.toml");
    let args = ["table", "d", "early", "normal", "57", "x=57", "y=100", "--workspace", &repro, "--format", "csv"];
    let printed = pflc(&args);
    assert_eq!(printed.status.code(), Some(0));
    let mut with_out = args.to_vec();
    with_out.extend(["--out", target.to_str().unwrap()]);
    assert_eq!(pflc(&with_out).status.code(), Some(0));
    assert_eq!(fs::read(&target).unwrap(), printed.stdout);
    assert!(String::from_utf8_lossy(&printed.stdout).starts_with("given,value,prob\n"));
}

#[test]
fn seed_changes_simulation_but_not_estimand() {
    let dose = data("dose.toml");
    let run = |seed: &str| {
        let out = pflc(&["fate", "linear", "--workspace", &dose, "--seed", seed]);
        assert_eq!(out.status.code(), Some(0));
        serde_json::from_slice::<serde_json::Value>(&out.stdout).unwrap()
    };
    let (a, b) = (run("1"), run("2"));
    assert_eq!(a["results"]["report"]["fate_lh"], b["results"]["report"]["fate_lh"]);
    assert_ne!(a["results"]["report"]["estimate"], b["results"]["report"]["estimate"]);
    assert_eq!(a["seed"], 1);
}

#[test]
fn check_properties_reports_diamond_failure() {
    let repro = data("reproductive.toml");
    let out = pflc(&["check-properties", "diamond", "bern(0.6)", "bern(0.7)", "min", "--workspace", &repro]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["results"]["diamond"]["holds"], false);
}

#[test]
fn workspace_round_trips_through_toml() {
    let ws = Workspace::load(Path::new(&data("reproductive.toml"))).unwrap();
    let dir = TempDir::new().unwrap();
    let again = Workspace::from_toml(&ws.to_toml(), dir.path()).unwrap();
    assert_eq!(ws.digest, again.digest);
}
