use std::fs;
use std::process::{Command, Output};

use whstab::arith::GaussianRational;
use whstab::cli::{exit_code, EXIT_IO, EXIT_NOT_CERTIFIED, EXIT_NOT_MONOMIAL, EXIT_USAGE, EXIT_VERIFICATION};
use whstab::error::Error;
use whstab::laurent::{LaurentMatrix2, LaurentScalar};

fn whstab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_whstab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_matrix(dir: &tempfile::TempDir, m: &LaurentMatrix2) -> String {
    let path = dir.path().join("a.json");
    fs::write(&path, serde_json::to_string(m).unwrap()).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn factor_prints_verified_json() {
    let dir = tempfile::tempdir().unwrap();
    let g = GaussianRational::from_ints;
    let a = &(&LaurentMatrix2::new(
        LaurentScalar::one(),
        LaurentScalar::zero(),
        LaurentScalar::monomial(g(0, 2), -1),
        LaurentScalar::one(),
    ) * &LaurentMatrix2::diag_powers(0, 1))
        * &LaurentMatrix2::new(LaurentScalar::one(), LaurentScalar::from_coeffs(0, vec![g(1, 0), g(3, 0)]), LaurentScalar::zero(), LaurentScalar::one());
    let o = whstab(&["factor", &write_matrix(&dir, &a)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["indices"], serde_json::json!([0, 1]));
    assert_eq!(v["stable"], serde_json::json!(true));
    let back: LaurentMatrix2 = serde_json::from_value(v["a_minus"].clone()).unwrap();
    let plus: LaurentMatrix2 = serde_json::from_value(v["a_plus"].clone()).unwrap();
    assert_eq!(&(&back * &LaurentMatrix2::diag_powers(0, 1)) * &plus, a);
}

#[test]
fn non_monomial_determinant_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let a = LaurentMatrix2::diag(LaurentScalar::from_coeffs(0, vec![GaussianRational::from_ints(1, 0); 2]), LaurentScalar::one());
    let o = whstab(&["factor", &write_matrix(&dir, &a)]);
    assert_eq!(o.status.code(), Some(EXIT_NOT_MONOMIAL));
}

#[test]
fn error_codes() {
    assert_eq!(exit_code(&Error::VerificationFailed("x".into())), EXIT_VERIFICATION);
    assert_eq!(whstab(&["factor", "/nonexistent/a.json"]).status.code(), Some(EXIT_IO));
}

#[test]
fn certify_reports_first_order() {
    let o = whstab(&["certify", "--family", "ex61", "--nmax", "8", "--no-timestamp"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(stderr(&o).trim(), "CERTIFIED at N=6");
    assert!(out.contains("6,1.42627417e-3,"));
    assert!(!out.contains("generated"));
}

#[test]
fn uncertified_range_exits_10() {
    let o = whstab(&["certify", "--family", "ex61", "--nmax", "3"]);
    assert_eq!(o.status.code(), Some(EXIT_NOT_CERTIFIED));
    assert_eq!(stderr(&o).trim(), "NOT CERTIFIED for any N");
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(whstab(&["certify", "--family", "ex61", "--k1", "0.2"]).status.code(), Some(EXIT_USAGE));
    assert_eq!(whstab(&["certify", "--family", "ex61", "--zeta1", "1/2"]).status.code(), Some(EXIT_USAGE));
    assert_eq!(whstab(&["frobnicate"]).status.code(), Some(EXIT_USAGE));
    assert_eq!(whstab(&["--help"]).status.code(), Some(0));
}

#[test]
fn optimised_circles_for_ex61() {
    let o = whstab(&["optimize-zeta", "--family", "ex61", "--n", "10", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rows"][0]["zeta1"], "1/5");
    assert_eq!(v["rows"][0]["zeta2"], "5");
}

#[test]
fn bounds_written_to_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_string_lossy().into_owned();
    let o = whstab(&["bounds", "--family", "ex62", "--n", "20", "--out", &out, "--no-timestamp"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("bounds.csv")).unwrap();
    assert!(csv.starts_with("# bounds: family=ex62"));
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 2);
}

#[test]
fn stream_spec_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spec.json");
    fs::write(&path, r#"{"family": "ex61", "k1": "1/5", "k2": "5"}"#).unwrap();
    let o = whstab(&["certify", "--spec", &path.to_string_lossy(), "--nmax", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stderr(&o).trim(), "CERTIFIED at N=6");
}

#[test]
fn tolerance_must_be_a_fraction() {
    assert_ne!(whstab(&["certify", "--family", "ex61", "--nmax", "2", "--tol", "2"]).status.code(), Some(0));
}
