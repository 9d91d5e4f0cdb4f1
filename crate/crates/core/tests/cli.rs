use std::process::{Command, Output};

use leja_core::io::read_section_csv;
use leja_core::leja::{canonical_disk_leja, CompactTag};
use leja_core::ComplexPoint;

fn leja(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_leja"))
        .args(args)
        .env_remove("LEJA_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn disk_section_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let o = leja(&["--disk", "-N", "16", "-o", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 17);
    let back = read_section_csv(text.as_bytes(), CompactTag::UnitDisk).unwrap();
    assert_eq!(back, canonical_disk_leja(16, ComplexPoint::new(1.0, 0.0)).unwrap());
}

#[test]
fn zero_points_is_usage_error() {
    assert_eq!(leja(&["--disk", "-N", "0"]).status.code(), Some(1));
    assert_eq!(leja(&["leja", "--ellipse", "1.2", "0.8", "-N", "4"]).status.code(), Some(1));
    assert_eq!(leja(&["bounds", "--special-n", "--p", "5..2"]).status.code(), Some(1));
    assert_eq!(leja(&["bounds", "--tol", "0"]).status.code(), Some(1));
    assert_eq!(leja(&["--help"]).status.code(), Some(0));
}

#[test]
fn greedy_ellipse_json() {
    let o = leja(&["leja", "--ellipse", "1.2", "0.8", "--greedy", "-N", "32", "--samples", "4096", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["n"], 32);
    assert_eq!(v["compact_tag"], "sampled_compact");
    assert_eq!(v["validation"]["passed"], true);
    assert!(String::from_utf8_lossy(&o.stderr).contains("max_violation"));
}

#[test]
fn greedy_section_is_exact_on_its_samples() {
    let o = leja(&["leja", "--greedy", "-N", "20", "--samples", "64", "--tol", "1e-12", "--seed-index", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn failed_check_exits_two() {
    // rounding alone exceeds a 1e-20 relative tolerance on the Lebesgue identity
    let o = leja(&["bounds", "--special-n", "--p", "3..4", "--tol", "1e-20"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("violation"));
}

#[test]
fn bounds_tables() {
    let o = leja(&["bounds", "--max-n", "16"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("N,max_sup,lebesgue,sup_margin,lebesgue_over_n\n"));
    assert_eq!(out.lines().count(), 17);

    let o = leja(&["bounds", "--special-n", "--p", "2..6", "--avg", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v["special_n"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    for r in rows {
        let n = r["N"].as_f64().unwrap();
        assert!((r["lebesgue"].as_f64().unwrap() - n).abs() / n < 1e-6);
    }
}

#[test]
fn bivariate_experiments() {
    let o = leja(&["bivariate", "--delta", "--n-max", "13"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = leja(&["bivariate", "--verify-2d-leja", "--n-max", "20"]);
    assert_eq!(o.status.code(), Some(0));
    let o = leja(&["bivariate", "--lebesgue", "--n", "2..6", "--grid", "32"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("n,N,value\n2,6,"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("lebesgue_loglog_slope"));

    let o = leja(&["bivariate", "--oracle", "--factorization", "--n-max", "8", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["oracle"].as_array().unwrap().len(), 8);
    assert_eq!(v["factorization"].as_array().unwrap().len(), 8);
    assert!(v["violations"].as_array().unwrap().is_empty());

    let o = leja(&["bivariate", "--delta", "--lebesgue", "--n-max", "15", "--n", "1..2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\n\nn,N,value\n"));
}

#[test]
fn transport_identity_and_alper() {
    let o = leja(&["transport", "--ellipse", "1", "1", "--max-n", "16"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("identity_gap"));

    let o = leja(&["transport", "--alper", "--ellipse", "1", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["summary"]["alper_constant"].as_f64().unwrap().abs() < 1e-6);

    let o = leja(&["transport", "--ellipse", "1.2", "0.8", "--max-n", "12"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("max_sup_loglog_slope"));
    assert_eq!(leja(&["transport", "--ellipse", "0.8", "1.2"]).status.code(), Some(1));
}

#[test]
fn output_independent_of_thread_count() {
    let run = |t: &str| {
        stdout(&leja(&["bivariate", "--oracle", "--n-max", "10", "--seed", "7", "--threads", t]))
    };
    assert_eq!(run("1"), run("3"));
    let run = |t: &str| stdout(&leja(&["bounds", "--max-n", "20", "--threads", t]));
    assert_eq!(run("1"), run("4"));
}
