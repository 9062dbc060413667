use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_ross-robin"));
    c.env_remove("ROSS_ROBIN_TOLERANCE");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json_stdout(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn diagnostic(out: &Output) -> Value {
    let err = String::from_utf8_lossy(&out.stderr);
    let line = err.lines().last().expect("diagnostic line");
    serde_json::from_str(line).expect("diagnostic is JSON")
}

#[test]
fn eig_reports_first_harmonic() {
    let out = run(&["eig", "--space", "R", "--n", "2", "--ball", "1.0", "--alpha", "0", "--ell", "1", "--index", "1"]);
    assert!(out.status.success());
    let v = json_stdout(&out);
    let row = &v["results"][0];
    assert_eq!(row["kind"], "R");
    assert_eq!(row["nodes"], 0);
    assert!(row["lambda"].as_f64().unwrap() > 0.0);
    assert!(row["bc_residual"].as_f64().unwrap() <= 1e-8);
    assert_eq!(v["tolerances"]["profile"], "default");
    assert_eq!(v["config"]["command"], "eig");
}

#[test]
fn eig_on_annulus_and_negative_alpha() {
    let out = run(&["eig", "--space", "H", "--annulus", "0.3", "1.2", "--alpha", "-0.25", "--ell", "0", "--index", "2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json_stdout(&out);
    assert_eq!(v["results"][0]["R1"].as_f64(), Some(0.3));
    assert_eq!(v["results"][0]["nodes"], 1);
}

#[test]
fn output_is_deterministic() {
    let args = ["sweep", "--spaces", "R2,C2", "--radii", "0.5,1", "--alpha-grid", "3", "--format", "csv"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    assert_eq!(
        lines.next().unwrap(),
        "kind,n,k,m,R1,R2,alpha,ell,index,lambda,nodes,bc_residual"
    );
    // 2 spaces x 2 radii x 3 alphas x 2 modes x 2 indices.
    assert_eq!(lines.count(), 48);
    assert!(text.starts_with("# config: "));
}

#[test]
fn check_grid_passes() {
    let out = run(&["check", "--space", "C", "--n", "2", "--ball", "1.0", "--alpha-grid", "9"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json_stdout(&out);
    let rows = v["results"].as_array().unwrap();
    assert_eq!(rows.len(), 9);
    assert!(rows.iter().all(|r| r["all_hold"] == true));
}

#[test]
fn verify_writes_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&[
        "verify", "--space", "R", "--n", "2", "--volume-of-ball", "1.0", "--alpha", "-0.0", "--inners", "0.05:0.5:10",
        "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let rows = v["report"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 10);
    assert!(rows.iter().all(|r| r["gap"].as_f64().unwrap() > 0.0));
    assert!(v["report"]["fitted_constant"].as_f64().unwrap() > 0.0);
}

#[test]
fn verify_steklov_fraction() {
    let out = run(&[
        "verify", "--space", "O", "--volume-of-ball", "1", "--steklov-fraction", "1", "--inners", "0.75,0.9",
        "--format", "csv",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 3);
}

#[test]
fn steklov_routes_agree() {
    let out = run(&["steklov", "--space", "C", "--ball", "1"]);
    assert!(out.status.success());
    let v = json_stdout(&out);
    assert!(v["results"][0]["route_difference"].as_f64().unwrap().abs() < 1e-8);
}

#[test]
fn validation_errors_exit_two() {
    for args in [
        vec!["eig", "--space", "O", "--n", "3", "--ball", "1", "--alpha", "0"],
        vec!["eig", "--space", "R", "--ball", "1", "--alpha", "0", "--bogus"],
        vec!["eig", "--space", "R", "--ball", "-1", "--alpha", "0"],
        vec!["check", "--space", "R", "--ball", "1", "--alpha", "-5"],
        vec!["eig", "--space", "R", "--ball", "1", "--annulus", "0.1", "0.5", "--alpha", "0"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let d = diagnostic(&out);
        assert_eq!(d["error"], "validation");
        assert_eq!(d["exit_code"], 2);
        assert_eq!(String::from_utf8_lossy(&out.stderr).lines().count(), 1);
    }
}

#[test]
fn convergence_failure_exits_three() {
    let out = run(&["eig", "--space", "R", "--ball", "1", "--alpha", "0", "--index", "3", "--max-iter", "1"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(diagnostic(&out)["error"], "convergence");
}

#[test]
fn tolerance_profile_from_environment() {
    let out = bin()
        .args(["eig", "--space", "R", "--ball", "1", "--alpha", "0", "--quad-points", "4"])
        .env("ROSS_ROBIN_TOLERANCE", "strict")
        .output()
        .unwrap();
    assert!(out.status.success());
    let v = json_stdout(&out);
    assert_eq!(v["tolerances"]["profile"], "strict");
    assert_eq!(v["tolerances"]["ode_rtol"].as_f64(), Some(1e-12));
    assert_eq!(v["tolerances"]["quad_points"], 4);

    let bad = bin().args(["steklov", "--space", "R", "--ball", "1"]).env("ROSS_ROBIN_TOLERANCE", "nope").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
