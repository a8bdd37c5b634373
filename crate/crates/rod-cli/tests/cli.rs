//! End-to-end tests of the run driver, output files, and the binary.

use std::path::Path;
use std::process::Command;

use rod_cli::{execute_converge, execute_run, RunConfig};

fn config_text(dir: &Path, extra: &str) -> String {
    format!(
        "\
rho = 1
alpha = 1
beta = 0.8
bend_k = 0.7
radius = 1
length = 4
n_nodes = 32
bc = free
dt_factor = 0.125
t_end = 0.05
preset = paper
constrained = true
diag_path = {dir}/diag.csv
snap_path = {dir}/snap.csv
snap_every = 10
{extra}",
        dir = dir.display()
    )
}

#[test]
fn run_produces_expected_row_and_block_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig::parse(&config_text(dir.path(), "")).unwrap();
    let summary = execute_run(&cfg).unwrap();

    let k: f64 = 4.0 / 31.0;
    let h = k * k / 8.0;
    let expected_steps = (0.05f64 / h).ceil() as u64;
    assert_eq!(summary.steps, expected_steps);
    assert!(!summary.stability_warning);

    let diag = std::fs::read_to_string(dir.path().join("diag.csv")).unwrap();
    let lines: Vec<&str> = diag.lines().collect();
    assert_eq!(lines[0], "step,t,energy,px,py,ptheta,jz,c1_max,c2_max,stretch_min,stretch_max");
    assert_eq!(lines.len() as u64, expected_steps + 1);
    assert!(lines[1].starts_with("1,"));

    // Snapshot blocks: step 0 plus every snap_every-th step, each block
    // is a header, n_nodes rows and a blank separator.
    let snap = std::fs::read_to_string(dir.path().join("snap.csv")).unwrap();
    let blocks = 1 + expected_steps / 10;
    assert_eq!(snap.lines().count() as u64, blocks * (32 + 2));
    assert!(snap.starts_with("0,0"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig::parse(&config_text(dir.path(), "")).unwrap();
    execute_run(&cfg).unwrap();
    let first = std::fs::read(dir.path().join("diag.csv")).unwrap();
    let first_snap = std::fs::read(dir.path().join("snap.csv")).unwrap();
    execute_run(&cfg).unwrap();
    assert_eq!(first, std::fs::read(dir.path().join("diag.csv")).unwrap());
    assert_eq!(first_snap, std::fs::read(dir.path().join("snap.csv")).unwrap());
}

#[test]
fn constraint_columns_stay_tiny_in_constrained_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig::parse(&config_text(dir.path(), "")).unwrap();
    execute_run(&cfg).unwrap();
    let diag = std::fs::read_to_string(dir.path().join("diag.csv")).unwrap();
    for line in diag.lines().skip(1) {
        let cols: Vec<f64> = line.split(',').skip(1).map(|v| v.parse().unwrap()).collect();
        let (c1, c2) = (cols[6], cols[7]);
        assert!(c1.abs() < 1e-12 && c2.abs() < 1e-12, "line {line}");
    }
}

#[test]
fn custom_initial_file_drives_run() {
    let dir = tempfile::tempdir().unwrap();
    let init = dir.path().join("init.csv");
    let mut text = String::from("x,y,theta,vx,vy,vtheta\n");
    let k = 4.0 / 31.0;
    for i in 0..32 {
        text.push_str(&format!("{},0,0,0,0,0\n", i as f64 * k));
    }
    std::fs::write(&init, text).unwrap();
    let extra = format!("initial_file = {}\n", init.display());
    let cfg_text = config_text(dir.path(), &extra).replace("preset = paper", "preset = custom");
    let cfg = RunConfig::parse(&cfg_text).unwrap();
    let summary = execute_run(&cfg).unwrap();
    // A straight resting rod stays put.
    assert!(summary.final_record.energy.abs() < 1e-20);
    assert!((summary.final_record.stretch_min - 1.0).abs() < 1e-12);
    assert!((summary.final_record.stretch_max - 1.0).abs() < 1e-12);
}

#[test]
fn converge_reports_second_order_for_theta_wave() {
    let dir = tempfile::tempdir().unwrap();
    let text = config_text(dir.path(), "")
        .replace("preset = paper", "preset = theta_wave")
        .replace("radius = 1", "radius = 0")
        .replace("t_end = 0.05", "t_end = 1.0");
    let cfg = RunConfig::parse(&text).unwrap();
    let rows = execute_converge(&cfg, &[17, 33, 65]).unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].order.is_none());
    for row in &rows[1..] {
        let order = row.order.unwrap();
        assert!((order - 2.0).abs() < 0.3, "order = {order}");
    }
}

#[test]
fn converge_rejects_nonzero_radius() {
    let dir = tempfile::tempdir().unwrap();
    let text = config_text(dir.path(), "").replace("preset = paper", "preset = theta_wave");
    let cfg = RunConfig::parse(&text).unwrap();
    let err = execute_converge(&cfg, &[17, 33]).unwrap_err();
    assert_eq!(err.exit_code(), 1);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_rodsim");
    let dir = tempfile::tempdir().unwrap();

    // Usage error: missing config file.
    let status = Command::new(bin)
        .args(["run", "/nonexistent/config.txt"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));

    // Usage error: bad subcommand.
    let status = Command::new(bin).arg("frobnicate").status().unwrap();
    assert_eq!(status.code(), Some(1));

    // Success.
    let cfg_path = dir.path().join("run.cfg");
    std::fs::write(&cfg_path, config_text(dir.path(), "")).unwrap();
    let out = Command::new(bin)
        .args(["run", cfg_path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("completed"));

    // Numerical abort: a huge explicit dt blows up the explicit scheme.
    let unstable = config_text(dir.path(), "")
        .replace("dt_factor = 0.125", "dt = 0.5")
        .replace("t_end = 0.05", "t_end = 50");
    let bad_path = dir.path().join("unstable.cfg");
    std::fs::write(&bad_path, unstable).unwrap();
    let out = Command::new(bin)
        .args(["run", bad_path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("warning"), "{stderr}");

    // Converge smoke test.
    let conv = config_text(dir.path(), "")
        .replace("preset = paper", "preset = theta_wave")
        .replace("radius = 1", "radius = 0");
    let conv_path = dir.path().join("conv.cfg");
    std::fs::write(&conv_path, conv).unwrap();
    let out = Command::new(bin)
        .args(["converge", conv_path.to_str().unwrap(), "--levels", "9,17"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.starts_with("n_nodes,h,error,order"), "{stdout}");
    assert_eq!(stdout.lines().count(), 3);
}
