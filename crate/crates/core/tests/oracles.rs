mod common;

use common::*;
use finsler_core::identities::sample_points;
use finsler_core::{builtin_metric, Family};

#[test]
fn sphere_matches_levi_civita() {
    for dim in [2, 3] {
        let e = riemannian_errors(&sphere_spec(dim), sphere, 5, 1);
        assert!(e.h <= 1e-9 && e.v <= 1e-10 && e.sp <= 1e-10 && e.r <= 1e-8, "dim {dim}: {e:?}");
        if dim == 2 {
            assert!(e.sectional <= 1e-6, "{e:?}");
            assert!((e.sectional_literal + 1.0).abs() <= 1e-6, "{e:?}");
        }
    }
}

#[test]
fn rank_one_metric_matches_levi_civita() {
    for dim in [2, 3] {
        let e = riemannian_errors(&custom_spec(dim), |x| rank_one(x, 0.1), 5, 2);
        assert!(e.h <= 1e-9 && e.v <= 1e-10 && e.sp <= 1e-10 && e.r <= 1e-8, "dim {dim}: {e:?}");
    }
}

#[test]
fn oracle_riemann_has_sphere_curvature() {
    // Riem(e1,e2)e2 = K (g22 e1 − g12 e2) with K = 1
    let x = [1.1, 0.7];
    let c = christoffel(&sphere(&x));
    let r = riemann_textbook(&c);
    let g22 = x[0].sin().powi(2);
    assert!((r[0][1][1][0] - g22).abs() < 1e-12);
}

#[test]
fn randers_jets_agree_with_finite_differences() {
    for dim in [2, 3] {
        let spec = builtin_metric(Family::Randers, dim, Default::default()).unwrap();
        let worst = jet_vs_fd(&spec, 4, 3);
        assert!(worst <= 1e-6, "dim {dim}: {worst:e}");
    }
}

#[test]
fn berwald_hv_curvature_is_third_spray_derivative() {
    let spec = builtin_metric(Family::Randers, 3, Default::default()).unwrap();
    let (gap, asym) = berwald_p_vs_spray(&spec, 4, 4);
    assert!(gap <= 1e-9 && asym <= 1e-10, "{gap:e} {asym:e}");
}

#[test]
fn flatness_chain_regimes() {
    let quartic = builtin_metric(Family::MinkowskiQuartic, 2, Default::default()).unwrap();
    for (_, hi) in flatness_chain(&quartic, 5, 5) {
        assert!(hi <= 1e-10, "{hi:e}");
    }
    for (lo, _) in flatness_chain(&sphere_spec(2), 5, 5) {
        assert!(lo >= 1e-3, "{lo:e}");
    }
}

#[test]
fn structural_zeros_are_exact() {
    for (family, dim) in [(Family::Randers, 2), (Family::Randers, 3), (Family::MinkowskiQuartic, 2)] {
        let spec = builtin_metric(family, dim, Default::default()).unwrap();
        let (pts, _) = sample_points::<f64>(&spec, 2, 6, 5).unwrap();
        for p in &pts {
            let bad = structural_zero_violations(&spec, p);
            assert!(bad.is_empty(), "{family} {dim}: {bad:?}");
        }
    }
}
