//! End-to-end checks of the binary: exit codes, config validation, report
//! determinism and re-parsing.

use std::path::Path;
use std::process::Command;

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_anyonfock"))
}

fn write_config(dir: &Path, samples: u64) -> std::path::PathBuf {
    let path = dir.join("config.toml");
    std::fs::write(
        &path,
        format!(
            "[run]\nsuite = \"exclusion\"\nseed = 11\nsamples = {samples}\n\n[output]\nformat = \"csv\"\n"
        ),
    )
    .unwrap();
    path
}

#[test]
fn run_exclusion_exits_zero_and_is_byte_deterministic() {
    let dir = std::env::temp_dir().join("anyonfock_cli_io_a");
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = write_config(&dir, 1000);

    let out_a = dir.join("run_a");
    let out_b = dir.join("run_b");
    for out in [&out_a, &out_b] {
        let status = binary()
            .args(["run", "exclusion", "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(out)
            .status()
            .unwrap();
        assert!(status.success(), "exclusion run should exit 0");
    }
    let a = std::fs::read(out_a.join("report_exclusion.json")).unwrap();
    let b = std::fs::read(out_b.join("report_exclusion.json")).unwrap();
    assert_eq!(a, b, "reports from identical config+seed must be byte-identical");
    let a_csv = std::fs::read(out_a.join("report_exclusion.csv")).unwrap();
    let b_csv = std::fs::read(out_b.join("report_exclusion.csv")).unwrap();
    assert_eq!(a_csv, b_csv);
}

#[test]
fn seed_flag_and_env_override() {
    let dir = std::env::temp_dir().join("anyonfock_cli_io_b");
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = write_config(&dir, 500);

    let flag_out = dir.join("flag");
    let env_out = dir.join("env");
    let status = binary()
        .args(["run", "exclusion", "--config"])
        .arg(&cfg)
        .args(["--seed", "777", "--out"])
        .arg(&flag_out)
        .status()
        .unwrap();
    assert!(status.success());
    let status = binary()
        .args(["run", "exclusion", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&env_out)
        .env("ANYONFOCK_SEED", "777")
        .status()
        .unwrap();
    assert!(status.success());
    let a = std::fs::read(flag_out.join("report_exclusion.json")).unwrap();
    let b = std::fs::read(env_out.join("report_exclusion.json")).unwrap();
    assert_eq!(a, b, "--seed and ANYONFOCK_SEED must agree");
}

#[test]
fn invalid_config_exits_two_naming_the_field() {
    let dir = std::env::temp_dir().join("anyonfock_cli_io_c");
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("bad.toml");
    std::fs::write(&cfg, "[grid]\nm = 0\n").unwrap();
    let output = binary()
        .args(["run", "exclusion", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let err = String::from_utf8_lossy(&output.stderr);
    assert!(err.contains("grid.m"), "stderr must name the field: {err}");
}

#[test]
fn unknown_suite_rejected() {
    let output = binary().args(["run", "warp-drive"]).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
    let err = String::from_utf8_lossy(&output.stderr);
    assert!(err.contains("run.suite"), "{err}");
}

#[test]
fn report_subcommand_replays_verdict() {
    let dir = std::env::temp_dir().join("anyonfock_cli_io_d");
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = write_config(&dir, 400);
    let out = dir.join("out");
    assert!(binary()
        .args(["run", "exclusion", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap()
        .success());
    let report_path = out.join("report_exclusion.json");
    let output = binary().arg("report").arg(&report_path).output().unwrap();
    assert_eq!(output.status.code(), Some(0));
    let text = String::from_utf8_lossy(&output.stdout);
    assert!(text.contains("suite exclusion: PASS"), "{text}");
    assert!(text.contains("exclusion_create_power_k2"), "{text}");
}

#[test]
fn failing_suite_exits_one() {
    // qcr carries the known constant-symmetrization failures
    let dir = std::env::temp_dir().join("anyonfock_cli_io_e");
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("out");
    let status = binary()
        .args(["run", "qcr", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
}

#[test]
fn example_config_parses_and_validates() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../config.example.toml")
        .canonicalize()
        .unwrap();
    let text = std::fs::read_to_string(path).unwrap();
    let cfg = anyonfock_cli::ExperimentConfig::from_toml(&text).unwrap();
    assert_eq!(cfg.run.suite, "all");
    assert_eq!(cfg.grid.m, 5);
    cfg.build_grid().unwrap();
    cfg.build_kernel().unwrap();
}

#[test]
fn parallel_all_matches_sequential() {
    let dir = std::env::temp_dir().join("anyonfock_cli_io_f");
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("config.toml");
    std::fs::write(&cfg, "[run]\nsamples = 2000\n").unwrap();
    let seq = dir.join("seq");
    let par = dir.join("par");
    let status = binary()
        .args(["run", "all", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&seq)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1)); // known qcr reds
    let status = binary()
        .args(["run", "all", "--config"])
        .arg(&cfg)
        .args(["--parallel", "--out"])
        .arg(&par)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
    let a = std::fs::read(seq.join("report_all.json")).unwrap();
    let b = std::fs::read(par.join("report_all.json")).unwrap();
    assert_eq!(a, b, "parallel execution must not change the report");
}
