//! End-to-end tests of the `bullwhip` binary: known point values, exit
//! codes, config handling, and byte-level determinism of CSV output.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_bullwhip"));
    // Keep the ambient environment from steering seeded runs.
    cmd.env_remove("BULLWHIP_SEED");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

/// Pulls the number following `label` out of a report line.
fn value_after(text: &str, label: &str) -> f64 {
    let rest = text
        .split_once(label)
        .unwrap_or_else(|| panic!("missing {label:?} in:\n{text}"))
        .1;
    rest.split_whitespace()
        .next()
        .and_then(|tok| tok.trim_end_matches([',', ')']).parse().ok())
        .unwrap_or_else(|| panic!("no number after {label:?} in:\n{text}"))
}

#[test]
fn analytic_reports_the_benchmark_value() {
    let out = run(&[
        "analytic", "--mu-d", "20", "--sigma-d", "4", "--mu-l", "10", "--sigma-l", "5", "--n",
        "5", "--m", "2", "--rho", "0",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("BM = 328.5"), "unexpected output:\n{text}");
    assert!((value_after(&text, "dBM/drho at rho = 0") - 4.0).abs() < 1e-9);
    assert!((value_after(&text, "limit rho -> 1") - 326.0).abs() < 1e-9);
}

#[test]
fn analytic_reduces_to_the_constant_leadtime_form() {
    let out = run(&["analytic", "--sigma-l", "0", "--mu-l", "2", "--n", "4", "--rho", "0"]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    assert!((value_after(&stdout(&out), "BM = ") - 2.5).abs() < 1e-12);
}

#[test]
fn rho_on_the_boundary_exits_2_and_points_at_the_limit_flag() {
    let out = run(&["analytic", "--n", "5", "--m", "2", "--rho", "1.0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--limit rho1"), "stderr: {}", stderr(&out));

    let out = run(&["analytic", "--n", "5", "--m", "2", "--rho", "-1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--limit rho-1"));

    let out = run(&["analytic", "--preset", "fig3", "--limit", "rho1"]);
    assert!(out.status.success());
    assert!((value_after(&stdout(&out), "BM = ") - 326.0).abs() < 1e-9);
}

#[test]
fn missing_windows_are_config_errors() {
    let out = run(&["analytic", "--rho", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--n"), "stderr: {}", stderr(&out));
}

#[test]
fn unknown_config_keys_are_rejected_by_name() {
    let path = scratch("bad.toml");
    fs::write(&path, "n = 5\nm = 2\nbogus = 1\n").unwrap();
    let out = run(&["analytic", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("bogus"), "stderr: {}", stderr(&out));
}

#[test]
fn flags_override_config_file_values() {
    let path = scratch("fig3.toml");
    fs::write(&path, "n = 5\nm = 2\nrho = 0.0\n").unwrap();
    let base = run(&["analytic", "--config", path.to_str().unwrap()]);
    assert!(base.status.success());
    assert!((value_after(&stdout(&base), "BM = ") - 328.5).abs() < 1e-9);

    let widened = run(&["analytic", "--config", path.to_str().unwrap(), "--m", "20"]);
    assert!(widened.status.success());
    // Same scenario with the wide lead-time window: 1 + 3.125 + 12 + 0.12.
    assert!((value_after(&stdout(&widened), "BM = ") - 16.245).abs() < 1e-9);
}

#[test]
fn sweep_emits_201_points_and_a_reusable_header() {
    let first = scratch("sweep_a.csv");
    let out = run(&["sweep", "--preset", "fig3", "--out", first.to_str().unwrap()]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let body = fs::read_to_string(&first).unwrap();

    let data_rows: Vec<&str> =
        body.lines().filter(|l| !l.starts_with('#') && !l.starts_with("rho,")).collect();
    assert_eq!(data_rows.len(), 201);
    assert!(body.lines().any(|l| l == "rho,n,m,bm_analytic,bm_mc,bm_mc_se"));
    assert!(data_rows.iter().all(|l| l.contains(",5,2,")));

    // The header comment block is a complete config: rerunning from it
    // reproduces the file byte for byte.
    let header: String = body
        .lines()
        .filter_map(|l| l.strip_prefix("# "))
        .map(|l| format!("{l}\n"))
        .collect();
    let cfg = scratch("sweep_a_header.toml");
    fs::write(&cfg, &header).unwrap();
    let second = scratch("sweep_b.csv");
    let out = run(&["sweep", "--config", cfg.to_str().unwrap(), "--out", second.to_str().unwrap()]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    assert_eq!(fs::read(&first).unwrap(), fs::read(&second).unwrap());
}

#[test]
fn validate_is_deterministic_and_exits_0_on_pass() {
    let first = scratch("validate_a.csv");
    let second = scratch("validate_b.csv");
    let args = |out: &PathBuf| {
        vec![
            "validate".to_string(),
            "--preset".into(),
            "fig3".into(),
            "--periods".into(),
            "50000".into(),
            "--replications".into(),
            "8".into(),
            "--seed".into(),
            "9".into(),
            "--out".into(),
            out.to_str().unwrap().to_string(),
        ]
    };
    let out1 = bin().args(args(&first)).output().unwrap();
    assert_eq!(out1.status.code(), Some(0), "stderr: {}", stderr(&out1));
    assert!(stdout(&out1).contains("validation: PASS"));
    let out2 = bin().args(args(&second)).output().unwrap();
    assert_eq!(out2.status.code(), Some(0));
    assert_eq!(fs::read(&first).unwrap(), fs::read(&second).unwrap());
    let body = fs::read_to_string(&first).unwrap();
    assert!(body.lines().any(|l| l == "rho,n,m,bm_analytic,bm_decomposed,bm_mc,bm_mc_se,z_score"));
}

#[test]
fn simulate_writes_a_deterministic_trace_with_a_sane_summary() {
    let first = scratch("trace_a.csv");
    let args: Vec<String> = [
        "simulate", "--preset", "fig3", "--rho", "0", "--periods", "30000", "--seed", "11",
        "--holding-cost", "1", "--backlog-cost", "9", "--out",
    ]
    .iter()
    .map(|s| s.to_string())
    .chain([first.to_str().unwrap().to_string()])
    .collect();
    let out = bin().args(&args).output().unwrap();
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let bm = value_after(&text, "BM estimate");
    assert!((bm / 328.5 - 1.0).abs() < 0.1, "BM estimate {bm} too far from 328.5");
    assert!(value_after(&text, "empirical TNS") > 0.0);
    assert!((value_after(&text, "mean order") - 20.0).abs() < 1.0);

    // Same seed via the environment variable: byte-identical trace.
    let second = scratch("trace_b.csv");
    let mut env_args = args.clone();
    let seed_pos = env_args.iter().position(|a| a == "--seed").unwrap();
    env_args.drain(seed_pos..seed_pos + 2);
    *env_args.last_mut().unwrap() = second.to_str().unwrap().to_string();
    let out = bin().args(&env_args).env("BULLWHIP_SEED", "11").output().unwrap();
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    assert_eq!(fs::read(&first).unwrap(), fs::read(&second).unwrap());

    let body = fs::read_to_string(&first).unwrap();
    assert!(body.lines().any(|l| l == "t,demand,lead_time,ltd_forecast,order,receipts,net_stock"));
}

#[test]
fn simulate_without_an_output_path_is_a_config_error() {
    let out = run(&["simulate", "--preset", "fig3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--out"));
}

#[test]
fn extrema_locates_the_benchmark_stationary_points() {
    let out = run(&["extrema", "--preset", "fig3"]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let min_rho = value_after(&text, "minimum at rho = ").abs();
    let max_rho = value_after(&text, "maximum at rho = ");
    assert!((min_rho - 0.5).abs() <= 0.1, "minimum magnitude {min_rho}");
    assert!((max_rho - 0.7).abs() <= 0.1, "maximum {max_rho}");
    assert!(text.contains("maximum guaranteed yes"));
    assert!(text.contains("minimum guaranteed yes"));
}

#[test]
fn paper_preset_fans_out_to_all_eight_scenarios() {
    let path = scratch("paper_sweep.csv");
    let out = run(&[
        "sweep", "--preset", "paper", "--rho-points", "3", "--rho-min", "-0.5", "--rho-max",
        "0.5", "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let body = fs::read_to_string(&path).unwrap();
    let data_rows =
        body.lines().filter(|l| !l.starts_with('#') && !l.starts_with("rho,")).count();
    assert_eq!(data_rows, 8 * 3);
    assert!(body.contains("# preset = \"paper\""));
}

#[test]
fn value_parsing_of_negative_rho_works() {
    let out = run(&["analytic", "--preset", "fig3", "--rho", "-0.5"]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let bm = value_after(&stdout(&out), "BM = ");
    assert!((bm / 327.45 - 1.0).abs() < 1e-3, "BM {bm}");
}
