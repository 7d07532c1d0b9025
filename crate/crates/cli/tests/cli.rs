use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use covariant_lab_cli::ReportEnvelope;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_covariant-lab"))
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

fn line_csv(f: impl Fn(f64) -> (f64, f64)) -> String {
    let n = 1025;
    let mut s = String::from("q,re,im\n");
    for i in 0..n {
        let q = -8.0 + 16.0 * i as f64 / (n - 1) as f64;
        let (re, im) = f(q);
        s.push_str(&format!("{q},{re},{im}\n"));
    }
    s
}

fn circle_csv(n: usize, f: impl Fn(f64) -> (f64, f64)) -> String {
    let mut s = String::from("theta,re,im\n");
    for j in 0..n {
        let t = 2.0 * PI * j as f64 / n as f64;
        let (re, im) = f(t);
        s.push_str(&format!("{t},{re},{im}\n"));
    }
    s
}

fn run(args: &[&str]) -> (Output, Option<ReportEnvelope>) {
    let out = bin().args(args).output().unwrap();
    let env = ReportEnvelope::from_json(&String::from_utf8_lossy(&out.stdout)).ok();
    (out, env)
}

fn check<'a>(env: &'a ReportEnvelope, name: &str) -> &'a covariant_lab_cli::Check {
    env.checks.iter().find(|c| c.name == name).unwrap_or_else(|| panic!("missing check {name}"))
}

#[test]
fn gaussian_fsb_passes_and_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "g.csv", &line_csv(|q| ((-PI * q * q).exp(), 0.0)));
    let output = dir.path().join("image.csv");
    let (out, env) = run(&["fsb", input.to_str().unwrap(), "--output", output.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let env = env.unwrap();
    assert_eq!(env.schema, "covariant-lab/1");
    assert!(check(&env, "annihilation_residual").value.unwrap() < 1e-4);
    assert!(check(&env, "cauchy_riemann_residual").value.unwrap() < 1e-4);
    let table = fs::read_to_string(output).unwrap();
    let mut lines = table.lines();
    assert_eq!(lines.next(), Some("x,y,re,im"));
    assert_eq!(lines.count(), 257 * 257);
}

#[test]
fn fsb_off_standard_scaling_skips_cauchy_riemann() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "g.csv", &line_csv(|q| ((-q * q).exp(), 0.0)));
    let (out, env) = run(&["--hbar", "0.5", "--c", "2", "fsb", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let env = env.unwrap();
    assert!(env.checks.iter().all(|c| c.name != "cauchy_riemann_residual"));
    assert!(!env.notes.is_empty());
}

#[test]
fn non_decaying_signal_is_a_precondition_failure() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "flat.csv", &line_csv(|_| (1.0, 0.0)));
    let (out, _) = run(&["fsb", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn malformed_inputs_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let empty = write(dir.path(), "empty.csv", "");
    let bad_header = write(dir.path(), "h.csv", "x,re,im\n0,1,0\n");
    let ragged = write(dir.path(), "r.csv", "q,re,im\n0,1\n");
    let circle = write(dir.path(), "c.csv", &circle_csv(100, |_| (1.0, 0.0)));
    for args in [
        vec!["fsb", empty.to_str().unwrap()],
        vec!["fsb", bad_header.to_str().unwrap()],
        vec!["fsb", ragged.to_str().unwrap()],
        vec!["hardy", circle.to_str().unwrap()],
        vec!["fsb", "/nonexistent/input.csv"],
        vec!["verify", "nope"],
        vec!["--tolerance", "gap", "verify", "su11"],
        vec!["--grid-n", "10", "verify", "su11"],
        vec!["--rho-max", "1", "verify", "su11"],
    ] {
        let (out, _) = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn hardy_transform_of_first_mode_is_holomorphic() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "z1.csv", &circle_csv(256, |t| (t.cos(), t.sin())));
    let (out, env) = run(&["hardy", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(check(&env.unwrap(), "holomorphy_residual").value.unwrap() < 1e-10);
}

#[test]
fn hardy_of_negative_modes_notes_the_vanishing_image() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "neg.csv", &circle_csv(256, |t| ((-3.0 * t).cos(), (-3.0 * t).sin())));
    let (out, env) = run(&["hardy", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let env = env.unwrap();
    assert!(env.results["max_abs"].as_f64().unwrap() < 1e-12);
    assert!(!env.notes.is_empty());
}

#[test]
fn uncertainty_reports_equality_for_gaussian_and_gap_for_hermite() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.csv", &line_csv(|q| ((-PI * q * q).exp(), 0.0)));
    let h = write(dir.path(), "h.csv", &line_csv(|q| (q * (-PI * q * q).exp(), 0.0)));
    let (out, env) = run(&["uncertainty", g.to_str().unwrap(), "--pair", "MD"]);
    assert_eq!(out.status.code(), Some(0));
    let env = env.unwrap();
    assert!((env.results["product"].as_f64().unwrap() - 0.5).abs() < 1e-10);
    assert_eq!(env.results["equality"], true);
    let (_, env) = run(&["uncertainty", h.to_str().unwrap(), "--pair", "MD"]);
    let env = env.unwrap();
    assert!((env.results["product"].as_f64().unwrap() - 1.5).abs() < 1e-8);
    assert_eq!(env.results["equality"], false);
}

#[test]
fn su11_pair_on_f_plus_carries_quarter_note() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "fp.csv", &circle_csv(256, |_| (1.0, 0.0)));
    let (out, env) = run(&["uncertainty", input.to_str().unwrap(), "--pair", "su11AB"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let env = env.unwrap();
    assert!((env.results["product"].as_f64().unwrap() - 0.25).abs() < 1e-12);
    assert!(env.notes.iter().any(|n| n.contains("1/4")));
}

#[test]
fn verify_su11_passes_and_tolerance_override_can_fail_it() {
    let (out, env) = run(&["verify", "su11"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(env.unwrap().pass);
    assert!(String::from_utf8_lossy(&out.stderr).contains("pass"));
    let (out, env) = run(&["--tolerance", "closure=1e-30", "verify", "su11"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!env.unwrap().pass);
}

#[test]
fn json_output_file_matches_stdout_envelope() {
    let dir = tempfile::tempdir().unwrap();
    let output = dir.path().join("report.json");
    let (out, env) = run(&["verify", "su11", "--output", output.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let written = ReportEnvelope::from_json(&fs::read_to_string(output).unwrap()).unwrap();
    let env = env.unwrap();
    assert_eq!(written.checks.len(), env.checks.len());
    assert_eq!(written.schema, env.schema);
}
