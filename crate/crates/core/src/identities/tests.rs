use super::*;
use crate::metric::{builtin_metric, Family};

#[test]
fn ids_are_unique_and_sorted() {
    let cat = catalog();
    assert!(cat.len() >= 60, "{} identities", cat.len());
    for w in cat.windows(2) {
        assert!(w[0].id < w[1].id, "{} / {}", w[0].id, w[1].id);
    }
}

#[test]
fn declared_orders_are_in_range() {
    for d in catalog() {
        assert!((crate::geometry::MIN_ORDER..=crate::geometry::DEFAULT_ORDER).contains(&d.order), "{}", d.id);
    }
}

#[test]
fn coverage_file_matches_catalog() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/coverage.md");
    let on_disk = std::fs::read_to_string(path).unwrap_or_default();
    assert!(on_disk == coverage_manifest(), "docs/coverage.md is stale; regenerate with `finsler catalog > docs/coverage.md`");
}

fn run(family: Family, dim: usize, points: usize) -> CheckReport {
    let spec = builtin_metric(family, dim, Default::default()).unwrap();
    let opts = CheckOptions {
        points,
        seed: 7,
        ..CheckOptions::default()
    };
    check_all::<f64>(&spec, &opts).unwrap()
}

fn failures(r: &CheckReport) -> Vec<String> {
    r.results
        .iter()
        .filter(|x| x.status == Status::Fail)
        .map(|x| format!("{} rel={:.3e} {:?}", x.id, x.relative_residual, x.note))
        .collect()
}

#[test]
fn euclidean_passes() {
    let r = run(Family::Euclidean, 2, 2);
    assert!(r.passed(), "{:#?}", failures(&r));
    assert_eq!(r.result("B5.flat").unwrap().status, Status::Pass);
    assert_eq!(r.result("B5.curved").unwrap().status, Status::NotApplicable);
}

#[test]
fn randers_passes() {
    let r = run(Family::Randers, 2, 2);
    assert!(r.passed(), "{:#?}", failures(&r));
    assert_eq!(r.result("H4").unwrap().status, Status::NotApplicable);
}

#[test]
fn low_order_skips_curvature_derivatives() {
    let spec = builtin_metric(Family::Euclidean, 2, Default::default()).unwrap();
    let opts = CheckOptions {
        points: 1,
        order: 4,
        ..CheckOptions::default()
    };
    let r = check_all::<f64>(&spec, &opts).unwrap();
    assert_eq!(r.result("C2.g").unwrap().status, Status::Skipped);
    assert_eq!(r.result("N.spray").unwrap().status, Status::Pass);
}

#[test]
fn unknown_id_is_rejected() {
    let spec = builtin_metric(Family::Euclidean, 2, Default::default()).unwrap();
    let opts = CheckOptions {
        ids: Some(vec!["nope".into()]),
        ..CheckOptions::default()
    };
    assert!(matches!(check_all::<f64>(&spec, &opts), Err(CheckError::UnknownId(_))));
}

#[test]
fn cyclic_sum_of_jacobi_vanishes() {
    let v = [[1.0, 2.0, -0.5], [0.3, -1.0, 4.0], [2.5, 0.7, 1.1]];
    let cross = |a: [f64; 3], b: [f64; 3]| [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
    let mut sum = [0.0; 3];
    for [a, b, c] in cyclic([0, 1, 2]) {
        let t = cross(v[a], cross(v[b], v[c]));
        for i in 0..3 {
            sum[i] += t[i];
        }
    }
    assert!(sum.iter().all(|s| s.abs() < 1e-12), "{sum:?}");
}

#[test]
fn interchange_kills_symmetric_part() {
    let a = [[1.0, 2.0], [2.0, 5.0]];
    let w = [[0.0, 3.0], [-3.0, 0.0]];
    let f = |x: usize, y: usize| a[x][y] + w[x][y];
    assert_eq!(interchange(0, 1, f), 2.0 * w[0][1]);
    assert_eq!(interchange(1, 1, f), 0.0);
}

#[test]
fn literal_berwald_eta_form_is_detected() {
    let r = run(Family::Randers, 2, 3);
    let lit = r.result("B3.f.literal").unwrap();
    assert!(lit.probe);
    assert_eq!(lit.status, Status::Fail);
    assert_eq!(r.result("B3.f").unwrap().status, Status::Pass);
}

#[test]
fn single_precision_runs() {
    let spec = builtin_metric(Family::Randers, 2, Default::default()).unwrap();
    let opts = CheckOptions {
        points: 2,
        tol: 1e-3,
        ..CheckOptions::default()
    };
    let r = check_all::<f32>(&spec, &opts).unwrap();
    assert!(r.passed(), "{:#?}", failures(&r));
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let spec = builtin_metric(Family::Randers, 2, Default::default()).unwrap();
    let mk = |threads| CheckOptions {
        points: 4,
        seed: 42,
        threads: Some(threads),
        ..CheckOptions::default()
    };
    let a = check_all::<f64>(&spec, &mk(1)).unwrap();
    let b = check_all::<f64>(&spec, &mk(3)).unwrap();
    assert_eq!(a.results, b.results);
}
