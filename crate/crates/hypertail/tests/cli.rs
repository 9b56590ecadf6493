//! End-to-end tests of the `hypertail` binary: real process spawns, checked
//! on stdout/stderr bytes and exit codes.

use std::process::{Command, Output};

fn hypertail(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypertail"))
        .args(args)
        .output()
        .expect("spawn hypertail")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

#[test]
fn pmf_text_and_json() {
    let out = hypertail(&["pmf", "-N", "10", "-M", "5", "-n", "5", "-i", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "25/63 = 0.3968253968253968\n");

    let out = hypertail(&[
        "pmf", "-N", "10", "-M", "5", "-n", "5", "-i", "3", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["pmf_fraction"], "25/63");
    assert_eq!(v["backend"], "exact");
    assert!((v["pmf"].as_f64().unwrap() - 25.0 / 63.0).abs() < 1e-15);
}

#[test]
fn pmf_log_backend() {
    let out = hypertail(&[
        "pmf", "-N", "10", "-M", "5", "-n", "5", "-i", "3", "--backend", "log",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("(ln "), "log backend shows ln: {text}");
    let value: f64 = text.split_whitespace().next().unwrap().parse().unwrap();
    assert!((value - 25.0 / 63.0).abs() < 1e-12);
}

#[test]
fn tail_clamps_and_values() {
    let out = hypertail(&["tail", "-N", "10", "-M", "5", "-n", "5", "-k", "6"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "0/1 = 0\n");

    let out = hypertail(&[
        "tail", "-N", "10", "-M", "5", "-n", "5", "-k", "2", "--side", "lower",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "1/2 = 0.5\n");
}

#[test]
fn moments() {
    let out = hypertail(&["mean", "-N", "10", "-M", "4", "-n", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "2/1 = 2\n");

    let out = hypertail(&["var", "-N", "10", "-M", "5", "-n", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "25/36 = 0.6944444444444444\n");
}

#[test]
fn bound_relaxed_matches_closed_form() {
    let out = hypertail(&[
        "bound", "-N", "100", "-M", "50", "-n", "100", "--t", "1/10", "--form", "relaxed",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let value: f64 = stdout(&out).trim().parse().unwrap();
    assert!((value - (-2.0f64).exp()).abs() <= 1e-12);
}

#[test]
fn bound_accepts_threshold_and_decimal_t() {
    let from_k = hypertail(&["bound", "-N", "10", "-M", "5", "-n", "5", "-k", "3"]);
    assert_eq!(from_k.status.code(), Some(0));
    let from_t = hypertail(&["bound", "-N", "10", "-M", "5", "-n", "5", "--t", "0.1"]);
    assert_eq!(from_t.status.code(), Some(0));
    // k = 3 on this urn is exactly t = 1/10
    assert_eq!(stdout(&from_k), stdout(&from_t));
}

#[test]
fn bound_flags_negative_t_as_vacuous() {
    let out = hypertail(&["bound", "-N", "10", "-M", "5", "-n", "5", "--t", "-1/10"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "1 (vacuous: t < 0)\n");
}

#[test]
fn bound_requires_exactly_one_deviation_source() {
    let neither = hypertail(&["bound", "-N", "10", "-M", "5", "-n", "5"]);
    assert_eq!(neither.status.code(), Some(2));
    let both = hypertail(&[
        "bound", "-N", "10", "-M", "5", "-n", "5", "--t", "1/10", "-k", "3",
    ]);
    assert_eq!(both.status.code(), Some(2));
}

#[test]
fn invalid_urn_is_a_clean_error() {
    let out = hypertail(&["pmf", "-N", "5", "-M", "6", "-n", "2", "-i", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).is_empty());
    assert!(
        stderr(&out).contains("invalid urn parameters"),
        "stderr: {}",
        stderr(&out)
    );
}

#[test]
fn sample_is_seed_deterministic() {
    let args = [
        "sample", "-N", "100", "-M", "40", "-n", "30", "-k", "16", "--seed", "7", "--reps",
        "20000",
    ];
    let a = hypertail(&args);
    let b = hypertail(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).starts_with("estimate = "));

    let other_seed = hypertail(&[
        "sample", "-N", "100", "-M", "40", "-n", "30", "-k", "16", "--seed", "8", "--reps",
        "20000",
    ]);
    assert_ne!(stdout(&a), stdout(&other_seed));
}

#[test]
fn verify_writes_report_file_and_prints_summary() {
    let dir = std::env::temp_dir().join(format!("hypertail-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.csv");
    let out = hypertail(&[
        "verify",
        "--N-min",
        "2",
        "--N-max",
        "8",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let file = std::fs::read_to_string(&path).unwrap();
    assert!(file.starts_with("N,M,n,k,t_fraction,t,exact_fraction,exact,hoeffding,relaxed,"));
    let text = stdout(&out);
    assert!(text.contains("violations"), "summary on stdout: {text}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_rejects_empty_range() {
    let out = hypertail(&["verify", "--N-min", "9", "--N-max", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("empty population range"));
}

#[test]
fn help_shows_notation_table() {
    let out = hypertail(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("Notation"));
    let sub = hypertail(&["pmf", "--help"]);
    assert_eq!(sub.status.code(), Some(0));
    assert!(stdout(&sub).contains("--population"));
}

#[test]
fn oversized_log_population_is_rejected() {
    let out = hypertail(&[
        "pmf",
        "-N",
        "20000000",
        "-M",
        "5",
        "-n",
        "5",
        "-i",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("log backend limit"));
}
