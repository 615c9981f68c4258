//! Integration tests for the command-line front end: deterministic outputs,
//! structured validation errors, side-effect discipline, and exit codes.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

/// A fast campaign touching both a Monte Carlo suite and an exact one.
const SMALL_CAMPAIGN: &str = r#"
seed = 99
functions = ["indicator_0"]
suites = ["martingale", "topology"]

[sampling]
n_paths = 400
"#;

const CORRUPTED_CAMPAIGN: &str = r#"
seed = 4
functions = ["indicator_0"]
suites = ["martingale"]

[space]
kind = "finite"
n = 2

[model]
family = "two_state"
corruption = "double_generator"

[sampling]
n_paths = 2000

[schedule]
initial_uniform_to = 0
"#;

fn strictlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_strictlab"))
        .args(args)
        .output()
        .expect("binary spawns")
}

fn write_config(dir: &Path, contents: &str) -> String {
    let path = dir.join("campaign.toml");
    fs::write(&path, contents).expect("config written");
    path.to_string_lossy().into_owned()
}

fn dir_entries(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = fs::read_dir(dir)
        .expect("output dir readable")
        .map(|e| e.expect("entry").file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    names
}

#[test]
fn identical_configs_produce_byte_identical_outputs() {
    let tmp = tempfile::tempdir().expect("tempdir");
    let config = write_config(tmp.path(), SMALL_CAMPAIGN);
    let (out_a, out_b) = (tmp.path().join("a"), tmp.path().join("b"));

    for out in [&out_a, &out_b] {
        let run = strictlab(&["run", "--config", &config, "--out", &out.to_string_lossy()]);
        assert!(run.status.success(), "run failed: {}", String::from_utf8_lossy(&run.stderr));
    }

    let names = dir_entries(&out_a);
    assert_eq!(names, dir_entries(&out_b));
    assert!(names.contains(&"report.json".to_string()));
    assert!(names.iter().any(|n| n.ends_with(".csv")), "expected CSV artifacts: {names:?}");
    for name in names {
        let a = fs::read(out_a.join(&name)).expect("artifact a");
        let b = fs::read(out_b.join(&name)).expect("artifact b");
        assert_eq!(a, b, "{name} differs between identical runs");
    }
}

#[test]
fn jobs_flag_does_not_change_the_artifacts() {
    let tmp = tempfile::tempdir().expect("tempdir");
    let config = write_config(tmp.path(), SMALL_CAMPAIGN);
    let (out_a, out_b) = (tmp.path().join("j1"), tmp.path().join("j4"));

    for (out, jobs) in [(&out_a, "1"), (&out_b, "4")] {
        let run = strictlab(&[
            "run",
            "--config",
            &config,
            "--out",
            &out.to_string_lossy(),
            "--jobs",
            jobs,
        ]);
        assert!(run.status.success(), "run failed: {}", String::from_utf8_lossy(&run.stderr));
    }
    for name in dir_entries(&out_a) {
        assert_eq!(
            fs::read(out_a.join(&name)).expect("a"),
            fs::read(out_b.join(&name)).expect("b"),
            "{name} depends on the worker count"
        );
    }
}

#[test]
fn missing_seed_is_a_validation_error_naming_the_key() {
    let tmp = tempfile::tempdir().expect("tempdir");
    let config = write_config(tmp.path(), "suites = [\"topology\"]\n");
    let out_dir = tmp.path().join("out");

    let run = strictlab(&["run", "--config", &config, "--out", &out_dir.to_string_lossy()]);
    assert_eq!(run.status.code(), Some(2), "config errors exit with 2");
    let stderr = String::from_utf8_lossy(&run.stderr);
    assert!(stderr.contains("seed"), "error must name the missing key: {stderr}");
    assert!(!out_dir.exists(), "no output may be written for an invalid config");
}

#[test]
fn unknown_keys_and_bad_kinds_are_rejected() {
    let tmp = tempfile::tempdir().expect("tempdir");
    let config = write_config(tmp.path(), "seed = 1\nbogus_key = 3\n");
    let run = strictlab(&["describe", "--config", &config]);
    assert_eq!(run.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&run.stderr).contains("bogus_key"));

    let config = write_config(tmp.path(), "seed = 1\n[space]\nkind = \"hyperbolic\"\n");
    let run = strictlab(&["describe", "--config", &config]);
    assert_eq!(run.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&run.stderr).contains("hyperbolic"));
}

#[test]
fn describe_prints_the_plan_without_side_effects() {
    let tmp = tempfile::tempdir().expect("tempdir");
    let config = write_config(tmp.path(), SMALL_CAMPAIGN);
    let out_dir = tmp.path().join("never-created");

    let run =
        strictlab(&["describe", "--config", &config, "--out", &out_dir.to_string_lossy()]);
    assert!(run.status.success());
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert!(stdout.contains("campaign plan"), "plan header expected: {stdout}");
    assert!(stdout.contains("martingale"), "selected suites listed: {stdout}");
    assert!(!out_dir.exists(), "describe must not touch the filesystem");
}

#[test]
fn export_writes_only_csv_artifacts() {
    let tmp = tempfile::tempdir().expect("tempdir");
    let config = write_config(tmp.path(), SMALL_CAMPAIGN);
    let out_dir = tmp.path().join("csv-only");

    let run = strictlab(&["export", "--config", &config, "--out", &out_dir.to_string_lossy()]);
    assert!(run.status.success());
    let names = dir_entries(&out_dir);
    assert!(!names.is_empty(), "export produces artifacts");
    assert!(
        names.iter().all(|n| n.ends_with(".csv")),
        "export must write only CSV files: {names:?}"
    );
}

#[test]
fn failing_campaign_exits_one_but_still_writes_the_report() {
    let tmp = tempfile::tempdir().expect("tempdir");
    let config = write_config(tmp.path(), CORRUPTED_CAMPAIGN);
    let out_dir = tmp.path().join("failed");

    let run = strictlab(&["run", "--config", &config, "--out", &out_dir.to_string_lossy()]);
    assert_eq!(run.status.code(), Some(1), "check failures exit with 1");
    let report = fs::read_to_string(out_dir.join("report.json")).expect("report written");
    assert!(report.contains("\"exit_status\": \"fail\""));
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert!(stdout.contains("FAIL"), "failed checks appear in the log: {stdout}");
}

#[test]
fn seed_override_is_echoed_in_the_report() {
    let tmp = tempfile::tempdir().expect("tempdir");
    let config = write_config(tmp.path(), SMALL_CAMPAIGN);
    let out_dir = tmp.path().join("seeded");

    let run = strictlab(&[
        "run",
        "--config",
        &config,
        "--out",
        &out_dir.to_string_lossy(),
        "--seed",
        "123",
    ]);
    assert!(run.status.success());
    let report = fs::read_to_string(out_dir.join("report.json")).expect("report written");
    assert!(report.contains("\"seed\": 123"), "overridden seed must be recorded");
}
