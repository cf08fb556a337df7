use std::path::Path;
use std::process::{Command, Output};

fn relnorm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relnorm")).args(args).output().expect("binary runs")
}

fn check_to(path: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["check", "--surface", "ellipsoid", "--q", "affine", "--samples", "40", "--report"];
    args.push(path.to_str().unwrap());
    args.extend_from_slice(extra);
    relnorm(&args)
}

#[test]
fn repeated_runs_write_identical_reports() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    assert_eq!(check_to(&a, &["--workers", "1"]).status.code(), Some(0));
    assert_eq!(check_to(&b, &["--workers", "8"]).status.code(), Some(0));
    let text = std::fs::read(&a).unwrap();
    assert_eq!(text, std::fs::read(&b).unwrap());
    let json: serde_json::Value = serde_json::from_slice(&text).unwrap();
    assert_eq!(json["config"]["samples"], 40);
    assert!(json["diagnostics"].as_array().unwrap().iter().any(|d| d["name"] == "mean_curvature_formula_difference"));
}

#[test]
fn text_format_lists_identities() {
    let out = relnorm(&["check", "--surface", "sphere", "--q", "generic", "--samples", "10", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("normalization_independence"));
    assert!(text.contains("diagnostic"));
}

#[test]
fn violations_exit_with_one() {
    let out = relnorm(&["check", "--surface", "ellipsoid", "--alpha", "0.3", "--samples", "10", "--tol", "1e-30"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("violation"));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(relnorm(&["check", "--surface", "torus", "--q", "affine"]).status.code(), Some(2));
    assert_eq!(relnorm(&["check", "--surface", "sphere", "--q", "nope"]).status.code(), Some(2));
    assert_eq!(relnorm(&["check", "--surface", "sphere"]).status.code(), Some(2));
}

#[test]
fn flat_surface_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("plane.spec");
    std::fs::write(&spec, "name = plane\nn = 2\ndomain = [-1,1] x [-1,1]\nx = [u1, u2, 0.1*u1 + 0.2*u2]\n").unwrap();
    let out = relnorm(&["check", "--spec", spec.to_str().unwrap(), "--q", "euclidean", "--samples", "5"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn pair_and_eval_subcommands() {
    let out = relnorm(&[
        "pair", "--surface", "ellipsoid", "--q1", "generic", "--q2", "2*(1 + exp(0.2*u1 - 0.1*u2))",
        "--relation", "power", "--lambda", "2", "--alpha", "1", "--samples", "10",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let out = relnorm(&["eval", "--surface", "ellipsoid", "--q", "affine", "--point", "0.3,0.4", "--quantity", "tchebychev"]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let t: Vec<f64> = serde_json::from_value(json["darboux"].clone()).unwrap();
    assert!(t.iter().all(|v| v.abs() < 1e-12));
}

#[test]
fn oracle_subcommand_reports_small_deltas() {
    let out = relnorm(&["oracle", "--surface", "ellipsoid4", "--q", "affine", "--point", "0.2,-0.3,0.4"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for key in ["g_delta", "h_delta", "xi_delta", "curvature_delta", "y_d_delta"] {
        assert!(json[key].as_f64().unwrap() < 1e-5, "{key}");
    }
}
