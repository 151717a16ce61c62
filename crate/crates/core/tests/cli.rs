use std::path::PathBuf;
use std::process::{Command, Output};

use fio_lab::lab::{cli_main, CSV_NAME, SCHEMA, SUMMARY_NAME};

fn fio_lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fio-lab"))
        .args(args)
        .output()
        .expect("fio-lab runs")
}

fn config(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

#[test]
fn thresholds_defaults_print_the_square_branch() {
    let out = fio_lab(&["thresholds"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("m_arc = 0 (exact)"), "{text}");
    assert!(text.contains("branch = square"), "{text}");
}

#[test]
fn thresholds_take_exact_rationals() {
    let out = fio_lab(&["thresholds", "--rho", "1/2", "--p", "2", "--q", "2", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("rho = 1/2"), "{text}");
}

#[test]
fn malformed_exponent_is_a_usage_error() {
    assert_eq!(cli_main(["fio-lab", "thresholds", "--p", "two"]), 2);
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    assert_eq!(fio_lab(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(cli_main(["fio-lab", "frobnicate"]), 2);
}

#[test]
fn help_exits_zero() {
    assert_eq!(cli_main(["fio-lab", "--help"]), 0);
}

#[test]
fn missing_or_broken_config_is_a_usage_error() {
    assert_eq!(fio_lab(&["run", "/nonexistent/config.toml"]).status.code(), Some(2));
    assert_eq!(fio_lab(&["run"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "experiment = \"no-such-experiment\"\n").unwrap();
    assert_eq!(fio_lab(&["run", bad.to_str().unwrap()]).status.code(), Some(2));

    let invalid = dir.path().join("invalid.toml");
    std::fs::write(
        &invalid,
        "experiment = \"threshold-table\"\nrho = [\"1\"]\np = [\"2\"]\nq = [\"2\"]\nn = [0]\n",
    )
    .unwrap();
    assert_eq!(fio_lab(&["run", invalid.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn run_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = fio_lab(&[
        "run",
        "--config",
        config("coefficient-decay.toml").to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let csv = std::fs::read_to_string(dir.path().join(CSV_NAME)).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("schema,experiment,series,index,abscissa,value"));
    assert!(lines.all(|l| l.starts_with(SCHEMA)));
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join(SUMMARY_NAME)).unwrap()).unwrap();
    assert_eq!(summary["status"], "passed");
    assert_eq!(summary["schema"], SCHEMA);
}

#[test]
fn identical_seed_gives_identical_csv() {
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for d in &dirs {
        let out = fio_lab(&[
            "run",
            config("decomposition.toml").to_str().unwrap(),
            "--seed",
            "7",
            "--out",
            d.path().to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    let a = std::fs::read(dirs[0].path().join(CSV_NAME)).unwrap();
    let b = std::fs::read(dirs[1].path().join(CSV_NAME)).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn catalog_lists_every_entry() {
    let out = fio_lab(&["catalog"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["hormander", "rough-log", "joint-bessel", "wave", "kdv", "variable-wave"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name} missing");
    }
}
