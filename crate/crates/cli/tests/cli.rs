use std::fs;
use std::process::{Command, Output};

fn cvtele(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cvtele"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn fidelity_at_rest() {
    let o = cvtele(&["fidelity"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let line = text.lines().find(|l| l.starts_with("F_corrected")).unwrap();
    assert!(line.ends_with("7.31058578630e-1"), "{line}");
}

#[test]
fn fidelity_with_trajectory_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let traj = dir.path().join("t.txt");
    fs::write(&traj, "accel 1e17 1e-10\ninertial 5e-11\n").unwrap();
    let out = dir.path().join("f.csv");
    let o = cvtele(&[
        "fidelity",
        "--trajectory",
        traj.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(&out).unwrap();
    let data: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data.len(), 2);
    assert!(data[0].starts_with("h,phi,F_raw"));
}

#[test]
fn parse_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let traj = dir.path().join("bad.txt");
    fs::write(&traj, "inertial 1e-10\nhover 3\n").unwrap();
    let o = cvtele(&["fidelity", "--trajectory", traj.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    let cfg = dir.path().join("c.conf");
    fs::write(&cfg, "L = 0.01\n").unwrap();
    assert_eq!(cvtele(&["--config", cfg.to_str().unwrap(), "fidelity"]).status.code(), Some(2));
    assert_eq!(cvtele(&["--preset", "nope", "fidelity"]).status.code(), Some(2));
    assert_eq!(cvtele(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn io_errors_exit_4() {
    let o = cvtele(&["coeffs", "--h", "0.1", "--out", "/nonexistent/dir/c.csv"]);
    assert_eq!(o.status.code(), Some(4));
    let o = cvtele(&["fidelity", "--trajectory", "/nonexistent/t.txt"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn numeric_errors_exit_3() {
    assert_eq!(cvtele(&["coeffs", "--h", "2.5"]).status.code(), Some(3));
    assert_eq!(cvtele(&["--nmax", "4", "fidelity"]).status.code(), Some(3));
}

#[test]
fn validate_exit_codes() {
    let o = cvtele(&["validate"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).lines().all(|l| l.starts_with("PASS")));
    let o = cvtele(&["validate", "--inject-beta-flip"]);
    assert_eq!(o.status.code(), Some(5));
    let o = cvtele(&["--nmax", "4", "validate"]);
    assert_eq!(o.status.code(), Some(5));
    assert!(stdout(&o).lines().next().unwrap().starts_with("FAIL  truncation adequacy"));
}

#[test]
fn coeffs_table() {
    let o = cvtele(&["coeffs", "--h", "0.245"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 101);
    assert!(rows[1..].iter().all(|r| r.ends_with("true")));
}

#[test]
fn small_sweep_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("grid.conf");
    fs::write(&cfg, "tau_steps = 3\na_steps = 2\n").unwrap();
    let out = dir.path().join("s.csv");
    let plot = dir.path().join("s.dat");
    let o = cvtele(&[
        "--config",
        cfg.to_str().unwrap(),
        "sweep",
        "--out",
        out.to_str().unwrap(),
        "--plot-data",
        plot.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 7);
    assert_eq!(fs::read_to_string(&plot).unwrap().lines().count(), 1 + 6 + 2);
}
