use whstab_web::{certify_json, delta_grid, factor_json};

const EX61: &str = r#"{"family": "ex61", "k1": "1/5", "k2": "5"}"#;

#[test]
fn factor_round_trip() {
    let m = r#"{"rows": 2, "cols": 2, "entries": [
        [{"pmin": 0, "coeffs": [{"re": "1", "im": "0"}]}, {"pmin": -1, "coeffs": [{"re": "0", "im": "1"}]}],
        [{"pmin": 0, "coeffs": [{"re": "5", "im": "0"}]}, {"pmin": -1, "coeffs": [{"re": "0", "im": "5"}, {"re": "1", "im": "0"}]}]]}"#;
    let out: serde_json::Value = serde_json::from_str(&factor_json(m, "auto").unwrap()).unwrap();
    assert_eq!(out["stable"], true);
    assert!(factor_json("{}", "auto").is_err());
    assert!(factor_json(m, "sideways").is_err());
}

#[test]
fn certify_finds_first_order() {
    let out: serde_json::Value = serde_json::from_str(&certify_json(EX61, 7).unwrap()).unwrap();
    assert_eq!(out["first_certified"], 6);
    assert_eq!(out["rows"].as_array().unwrap().len(), 7);
    assert!(certify_json(EX61, 0).is_err());
}

#[test]
fn surface_shape_and_domain() {
    let g = delta_grid(EX61, 10, (0.1, 0.9), (1.5, 6.0), 5).unwrap();
    assert_eq!(g.len(), 25);
    // zeta1 = 0.1 lies inside k1 and zeta2 = 6 outside k2
    assert!(g[0].is_nan());
    assert!(g[24].is_nan());
    assert!(g[6].is_finite());
}
