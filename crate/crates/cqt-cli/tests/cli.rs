//! End-to-end checks of the command-line surface: flags, config files,
//! output files and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn cqt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cqt"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn tmp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cqt_cli_{tag}_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn sweep_writes_csv_and_plot_data() {
    let dir = tmp_dir("sweep");
    let out = dir.join("rows.csv");
    let output = cqt(&[
        "sweep",
        "--channel",
        "total",
        "--p-min",
        "0",
        "--p-max",
        "0.1",
        "--p-step",
        "0.05",
        "--restarts",
        "4",
        "--seed",
        "7",
        "--jobs",
        "2",
        "--plot-data",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success());

    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "channel,p,s_closed_form,s_optimized,f_c_ne,f_nc_e,ecp,sdp_gap"
    );
    assert_eq!(lines.count(), 3);

    let plot = std::fs::read_to_string(dir.join("rows.total.dat")).unwrap();
    assert_eq!(plot.lines().count(), 3);
    for line in plot.lines() {
        let fields: Vec<&str> = line.split_whitespace().collect();
        assert_eq!(fields.len(), 2);
        fields[0].parse::<f64>().unwrap();
        fields[1].parse::<f64>().unwrap();
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn config_file_fills_defaults_and_flags_override() {
    let dir = tmp_dir("config");
    let config_path = dir.join("run.conf");
    let out_from_config = dir.join("from_config.csv");
    std::fs::write(
        &config_path,
        format!(
            "# sweep configuration\nchannel = total\np_min = 0\np_max = 0.1\np_step = 0.1\nrestarts = 3\nseed = 9\nout = {}\n",
            out_from_config.display()
        ),
    )
    .unwrap();

    // Config alone: writes where the file says.
    let output = cqt(&["sweep", "--config", config_path.to_str().unwrap()]);
    assert!(output.status.success(), "{output:?}");
    assert!(out_from_config.exists());

    // Flag overrides the config's output path and step.
    let out_override = dir.join("override.csv");
    let output = cqt(&[
        "sweep",
        "--config",
        config_path.to_str().unwrap(),
        "--p-step",
        "0.05",
        "--out",
        out_override.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let text = std::fs::read_to_string(&out_override).unwrap();
    assert_eq!(text.lines().count(), 4); // header + p ∈ {0, 0.05, 0.1}

    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tmp_dir("badconfig");
    let config_path = dir.join("bad.conf");
    std::fs::write(&config_path, "p_mni = 0.3\n").unwrap();
    let output = cqt(&["sweep", "--config", config_path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn invalid_arguments_exit_one() {
    assert_eq!(cqt(&["sweep", "--p-step", "0"]).status.code(), Some(1));
    assert_eq!(
        cqt(&["teleport", "--channel", "nope", "--p", "0.1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        cqt(&["teleport", "--channel", "total", "--p", "1.5"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(cqt(&["no-such-subcommand"]).status.code(), Some(1));
}

#[test]
fn teleport_prints_report() {
    let output = cqt(&["teleport", "--channel", "qubit", "--p", "0.05"]);
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    for field in ["f_c_ne", "f_nc_e", "f_nc_guess", "ecp", "sdp_gap"] {
        assert!(text.contains(field), "missing {field} in:\n{text}");
    }
}

#[test]
fn demo_bounds_reports_the_split() {
    let output = cqt(&["demo-bounds", "--restarts", "6", "--seed", "3"]);
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    assert!(text.contains("svetlichny"));
    assert!(text.contains("5.65685424"));
    assert!(text.contains("mermin"));
}

#[test]
fn povm_selftest_passes() {
    let output = cqt(&["povm-selftest"]);
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    assert!(text.contains("helstrom"));
    assert!(text.contains("orthogonal"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn uncertifiable_tolerance_exits_two() {
    // The solver's certified gap bottoms out around machine precision, so
    // demanding 1e-18 is a numerical failure, not an argument error.
    let output = cqt(&["povm-selftest", "--sdp-tol", "1e-18"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn help_exits_zero() {
    assert!(cqt(&["--help"]).status.success());
    assert!(cqt(&["sweep", "--help"]).status.success());
}
