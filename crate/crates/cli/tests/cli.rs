use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_swe-rexi"))
}

fn run_in(out: &Path, args: &[&str]) -> Output {
    bin()
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

const SMALL: [&str; 4] = ["--trunc", "10", "--horizon-hours", "1"];

fn run_args<'a>(stepper: &'a str, dt: &'a str, extra: &[&'a str]) -> Vec<&'a str> {
    let mut v = vec!["run", "--stepper", stepper, "--dt", dt];
    v.extend_from_slice(&SMALL);
    v.extend_from_slice(extra);
    v
}

#[test]
fn forced_blowup_exits_with_divergence_code_and_no_snapshot() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["run", "--stepper", "ln_erk", "--dt", "1e9", "--trunc", "10", "--horizon-hours", "277777.7777777778"],
    );
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
    let snaps: Vec<_> = fs::read_dir(dir.path())
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_name().to_string_lossy().starts_with("snapshot_"))
        .collect();
    assert!(snaps.is_empty());
}

#[test]
fn parse_and_config_errors_have_distinct_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &run_args("lg_irk_lc_n_erk", "600", &[]));
    assert_eq!(out.status.code(), Some(2));
    let out = run_in(dir.path(), &run_args("ln_erk", "700", &[]));
    assert_eq!(out.status.code(), Some(3));
    let out = run_in(dir.path(), &run_args("ln_erk", "600", &["--rexi-n", "0"]));
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn unknown_config_file_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "trunc = 10\nfrobnicate = 3\n").unwrap();
    let out = run_in(
        dir.path(),
        &["run", "--stepper", "ln_erk", "--dt", "600", "--config", cfg.to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn artifacts_are_deterministic_and_worker_independent() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let c = tempfile::tempdir().unwrap();
    let id = "lg_rexi_lc_n_erk_ver1";
    for (dir, workers) in [(&a, "1"), (&b, "1"), (&c, "4")] {
        let out = run_in(dir.path(), &run_args(id, "600", &["--workers", workers]));
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let snap = format!("snapshot_barotropic_instability_T10_dt600_h1_{id}.bin");
    let read = |d: &tempfile::TempDir, f: &str| fs::read(d.path().join(f)).unwrap();
    assert_eq!(read(&a, &snap), read(&b, &snap));
    assert_eq!(read(&a, &snap), read(&c, &snap));
    assert_eq!(read(&a, "error_report.json"), read(&b, "error_report.json"));
    assert_eq!(read(&a, "error_report.json"), read(&c, "error_report.json"));
    let timing: serde_json::Value = serde_json::from_slice(&read(&c, "timing.json")).unwrap();
    assert_eq!(timing["min"]["K"], 4);
    assert_eq!(timing["min"]["N"], 128);
    for key in ["overall", "rexi_total", "term_solves", "broadcast", "reduce", "nonlinearities"] {
        assert!(timing["min"][key].as_f64().unwrap() >= 0.0, "{key}");
    }
}

#[test]
fn reference_is_reused_on_rerun() {
    let dir = tempfile::tempdir().unwrap();
    let args = run_args("ln_erk", "600", &[]);
    assert!(run_in(dir.path(), &args).status.success());
    let second = run_in(dir.path(), &args);
    assert!(second.status.success());
    assert!(!String::from_utf8_lossy(&second.stderr).contains("generating reference"));
}

#[test]
fn sweep_single_cell_and_idempotent_rerun() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["sweep", "--steppers", "ln_erk", "--dts", "600"];
    args.extend_from_slice(&SMALL);
    for _ in 0..2 {
        let out = run_in(dir.path(), &args);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let csv = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines.len(), 2, "{csv}");
        assert_eq!(lines[0], "stepper_id,dt_seconds,linf_h_error_m,status,wallclock_s");
        assert!(lines[1].starts_with("ln_erk,600,"));
        assert!(lines[1].contains(",ok,"));
    }
}

#[test]
fn sweep_marks_divergence_in_error_column() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["sweep", "--steppers", "ln_erk", "--dts", "5400", "--trunc", "21", "--horizon-hours", "6"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert!(csv.contains("ln_erk,5400,DIVERGED,diverged,"), "{csv}");
    let wc = fs::read_to_string(dir.path().join("wallclock_vs_error.csv")).unwrap();
    assert_eq!(wc.lines().count(), 1);
}
