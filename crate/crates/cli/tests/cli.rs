use std::process::{Command, Output};

#[path = "../../core/tests/common/mod.rs"]
mod common;

fn finsler(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_finsler")).args(args).output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn values(v: &serde_json::Value) -> Vec<f64> {
    v["components"].as_array().unwrap().iter().map(|c| c["value"].as_f64().unwrap()).collect()
}

#[test]
fn euclidean_check_passes_tightly() {
    let out = finsler(&["check", "--metric", "builtin:euclidean", "--points", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    for r in v["results"].as_array().unwrap() {
        assert!(r["relative_residual"].as_f64().unwrap() <= 1e-12, "{}", r["id"]);
    }
}

#[test]
fn randers_report_lists_catalog() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = finsler(&[
        "check", "--metric", "builtin:randers", "--dim", "2", "--points", "20", "--seed", "42", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(v["results"].as_array().unwrap().len() >= 60);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["summary"]["passed"], true);
}

#[test]
fn non_homogeneous_expression_is_a_config_error() {
    let out = finsler(&["check", "--metric", "expr:y1^2+y2^2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("homogeneity"));
}

#[test]
fn impossible_tolerance_is_an_identity_failure() {
    let out = finsler(&["check", "--metric", "builtin:randers", "--points", "2", "--tol", "1e-30", "--ids", "C3.*"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bad_inputs_exit_two() {
    for args in [
        &["check", "--metric", "builtin:nope"][..],
        &["check", "--metric", "builtin:randers", "--ids", "Z9.*"],
        &["check", "--metric", "/no/such/file.json"],
        &["compute", "--metric", "builtin:euclidean", "--object", "g", "--point", "x=0,0;y=0,0"],
        &["compute", "--metric", "builtin:euclidean", "--object", "nope", "--point", "x=0,0;y=1,0"],
    ] {
        assert_eq!(finsler(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn csv_has_one_row_per_identity() {
    let out = finsler(&["check", "--metric", "builtin:euclidean", "--points", "1", "--ids", "C2.*", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 11);
    assert!(text.starts_with("id,"));
}

#[test]
fn metric_file_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    std::fs::write(&path, r#"{"dim": 2, "kind": "expression", "body": "sqrt(y1^2 + y2^2) + 0.2*y1"}"#).unwrap();
    let out = finsler(&["check", "--metric", path.to_str().unwrap(), "--points", "2", "--ids", "G0.*"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn compute_euclidean_metric_is_identity() {
    let v = json(&finsler(&["compute", "--object", "g", "--metric", "builtin:euclidean", "--point", "x=0,0;y=1,2"]));
    assert_eq!(values(&v), vec![1.0, 0.0, 0.0, 1.0]);
}

#[test]
fn compute_berwald_v_curvature_is_zero() {
    let v = json(&finsler(&[
        "compute", "--object", "S", "--connection", "berwald", "--metric", "builtin:randers", "--dim", "3", "--point",
        "x=0.1,0.2,0.3;y=1,0.5,-0.2",
    ]));
    let vals = values(&v);
    assert_eq!(vals.len(), 81);
    assert!(vals.iter().all(|x| *x == 0.0));
    assert_eq!(v["slots"], serde_json::json!(["down", "down", "down", "up"]));
}

#[test]
fn compute_sphere_spray_matches_christoffels() {
    let (x, y) = ([1.2, 0.4], [0.7, -1.3]);
    let v = json(&finsler(&[
        "compute", "--object", "spray", "--metric", "builtin:riemannian_sphere", "--point", "x=1.2,0.4;y=0.7,-1.3",
    ]));
    let c = common::christoffel(&common::sphere(&x));
    for (i, g) in values(&v).iter().enumerate() {
        let mut want = 0.0;
        for j in 0..2 {
            for k in 0..2 {
                want += 0.5 * c.gamma[i][j][k] * y[j] * y[k];
            }
        }
        assert!((g - want).abs() <= 1e-12, "{i}: {g} vs {want}");
    }
}

#[test]
fn compute_covariant_derivative_adds_a_slot() {
    let v = json(&finsler(&[
        "compute", "--object", "g", "--derivative", "h", "--connection", "cartan", "--metric", "builtin:randers", "--point",
        "x=0.1,0.2;y=1,0.5",
    ]));
    let vals = values(&v);
    assert_eq!(vals.len(), 8);
    assert!(vals.iter().all(|x| x.abs() < 1e-12));
}

#[test]
fn metrics_list_and_validate() {
    let out = finsler(&["metrics", "list"]);
    let text = String::from_utf8(out.stdout).unwrap();
    for f in ["euclidean", "riemannian_sphere", "riemannian_custom", "randers", "minkowski_quartic"] {
        assert!(text.lines().any(|l| l == f), "{f}");
    }
    let ok = finsler(&["metrics", "validate", "--metric", "builtin:randers"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["validation"]["pass"], true);
    let bad = finsler(&["metrics", "validate", "--metric", "expr:sqrt(y1^2 - y2^2)"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(json(&bad)["validation"]["positivity_violations"].as_u64().unwrap() > 0);
}

#[test]
fn catalog_matches_coverage_doc() {
    let out = finsler(&["catalog"]);
    let doc = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/coverage.md")).unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), doc);
}
