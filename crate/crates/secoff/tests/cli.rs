//! End-to-end checks of the command-line binary: exit codes, file outputs,
//! and the shipped configuration files.

use std::path::Path;
use std::process::{Command, Output};

use secoff::simkit::config::ExperimentConfig;
use secoff::simkit::csvio::read_csv;
use secoff::{SchemeId, SolveStatus};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_secoff")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn sweep_writes_the_expected_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("rows.csv");
    let out = run(&["sweep", "--out", out_path.to_str().unwrap(), "--seeds", "2"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let rows = read_csv(&out_path).expect("output parses back");
    let exp = ExperimentConfig::default_task_sweep();
    assert_eq!(rows.len(), exp.sweep_values.len() * 2 * exp.schemes.len());
    for scheme in SchemeId::ALL {
        assert!(rows.iter().any(|r| r.scheme == scheme), "{scheme} missing from output");
    }
    let keys: Vec<_> = rows.iter().map(|r| (r.scheme, r.sweep_value.to_bits(), r.seed)).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted, "file rows must keep the sweep's sorted order");
    for row in &rows {
        assert!(row.seed.wrapping_sub(exp.base_seed) < 2, "unexpected seed {}", row.seed);
        if row.status != SolveStatus::Infeasible {
            assert!(row.avg_energy_j >= 0.0 && row.avg_energy_j.is_finite());
        }
    }
}

#[test]
fn solve_prints_one_report_per_scheme() {
    let out = run(&["solve", "--scheme", "proposed,local_only,no_eavesdropper"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    for name in ["proposed:", "local_only:", "no_eavesdropper:"] {
        assert!(text.contains(name), "missing {name} in:\n{text}");
    }
    assert!(text.contains("status=optimal"), "no optimal status in:\n{text}");
}

#[test]
fn undeliverable_tasks_exit_one() {
    // Tasks beyond the CPU cap with no usable secrecy link: the worst-case
    // eavesdropper gain dwarfs every access link.
    let mut exp = ExperimentConfig::default_task_sweep();
    for user in &mut exp.users {
        user.task_bits = 2e6;
    }
    exp.system.csi_error_fraction = 1e9;
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hopeless.json");
    std::fs::write(&path, serde_json::to_string(&exp).unwrap()).unwrap();

    let out = run(&["solve", "--config", path.to_str().unwrap(), "--scheme", "proposed"]);
    assert_eq!(out.status.code(), Some(1), "stdout: {}", stdout(&out));
    assert!(stdout(&out).contains("infeasible"));
}

#[test]
fn malformed_or_invalid_configs_exit_two() {
    let dir = tempfile::tempdir().unwrap();

    let garbled = dir.path().join("garbled.json");
    std::fs::write(&garbled, "{ this is not json").unwrap();
    let out = run(&["solve", "--config", garbled.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("error:"), "unhelpful stderr: {err}");

    // Well-formed JSON that fails validation must land on the same code.
    let mut exp = ExperimentConfig::default_task_sweep();
    exp.num_seeds = 0;
    let invalid = dir.path().join("invalid.json");
    std::fs::write(&invalid, serde_json::to_string(&exp).unwrap()).unwrap();
    let out = run(&["solve", "--config", invalid.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let missing = dir.path().join("nowhere.json");
    let out = run(&["sweep", "--config", missing.to_str().unwrap(), "--out", "x.csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn shipped_configs_match_the_built_in_experiments() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../..");
    let task = ExperimentConfig::load(&root.join("configs/task_sweep.json")).unwrap();
    assert_eq!(task, ExperimentConfig::default_task_sweep());
    let dist = ExperimentConfig::load(&root.join("configs/eve_distance_sweep.json")).unwrap();
    assert_eq!(dist, ExperimentConfig::default_distance_sweep());
}

#[test]
fn oracle_check_and_selftest_pass() {
    let out = run(&["oracle-check", "--seeds", "5"]);
    assert!(out.status.success(), "stdout: {}", stdout(&out));
    assert!(stdout(&out).contains("oracle check passed"));

    let out = run(&["selftest"]);
    assert!(out.status.success(), "stdout: {}", stdout(&out));
    assert!(stdout(&out).contains("selftest passed"));
}
