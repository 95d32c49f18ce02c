//! Acceptance gate: one PASS/FAIL line per criterion, then a single assertion.

use std::io::Write;
use std::process::Command;
use std::time::Instant;

use finsler_core::identities::{catalog, check_all, sample_points, CheckOptions};
use finsler_core::{builtin_metric, Family, MetricSpec, Status};

#[path = "../../core/tests/common/mod.rs"]
mod common;

use common::*;

fn builtin(family: Family, dim: usize) -> MetricSpec {
    builtin_metric(family, dim, Default::default()).unwrap()
}

fn opts(points: usize, seed: u64, tol: f64, ids: Option<Vec<String>>) -> CheckOptions {
    CheckOptions {
        points,
        seed,
        tol,
        ids,
        ..Default::default()
    }
}

fn identity_suite() -> (bool, String) {
    let start = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    let mut checked = 0;
    for (family, dim) in [
        (Family::Euclidean, 2),
        (Family::Euclidean, 3),
        (Family::RiemannianSphere, 2),
        (Family::Randers, 2),
        (Family::Randers, 3),
        (Family::MinkowskiQuartic, 2),
    ] {
        let spec = builtin(family, dim);
        let report = check_all::<f64>(&spec, &opts(20, 0, 1e-7, None)).unwrap();
        let fails: Vec<&str> = report
            .results
            .iter()
            .filter(|r| !r.probe && r.status == Status::Fail)
            .map(|r| r.id.as_str())
            .collect();
        let worst = report
            .results
            .iter()
            .filter(|r| !r.probe && r.status == Status::Pass)
            .map(|r| r.relative_residual)
            .fold(0.0, f64::max);
        checked = checked.max(report.count(Status::Pass));
        ok &= fails.is_empty() && report.points_used == 20;
        parts.push(format!("{} n={dim} worst {worst:.1e} fails {fails:?}", family.tag()));
    }
    let secs = start.elapsed().as_secs_f64();
    ok &= secs <= 120.0 && checked >= 60;
    (ok, format!("{}; {checked} checks; {secs:.1}s", parts.join(", ")))
}

fn riemannian_oracle() -> (bool, String) {
    let sph = riemannian_errors(&sphere_spec(2), sphere, 10, 11);
    let cus = riemannian_errors(&custom_spec(3), |x| rank_one(x, 0.1), 10, 12);
    let mut ok = true;
    for e in [&sph, &cus] {
        ok &= e.h <= 1e-9 && e.v <= 1e-10 && e.sp <= 1e-10 && e.r <= 1e-8;
    }
    ok &= sph.sectional <= 1e-6;
    (
        ok,
        format!(
            "sphere H {:.1e} V {:.1e} S,P {:.1e} R {:.1e}; custom H {:.1e} V {:.1e} S,P {:.1e} R {:.1e}; \
             sectional |K-1| {:.1e} (R(e1,e2,e2,e1)/det = {:.6} under K = -[D,D] + D_[,])",
            sph.h, sph.v, sph.sp, sph.r, cus.h, cus.v, cus.sp, cus.r, sph.sectional, sph.sectional_literal
        ),
    )
}

fn jets_vs_fd() -> (bool, String) {
    let mut worst: f64 = 0.0;
    for dim in [2, 3] {
        worst = worst.max(jet_vs_fd(&builtin(Family::Randers, dim), 10, 7));
    }
    (worst <= 1e-6, format!("randers n=2,3, 10 points, worst relative {worst:.1e}"))
}

fn bracket_meta() -> (bool, String) {
    let mut ok = true;
    let mut worst: f64 = 0.0;
    let mut n = 0;
    let ids: Vec<String> = catalog().iter().filter(|d| d.id.starts_with("G0.")).map(|d| d.id.clone()).collect();
    for dim in [2, 3] {
        let spec = builtin(Family::Randers, dim);
        let r = check_all::<f64>(&spec, &opts(10, 8, 1e-9, Some(ids.clone()))).unwrap();
        for x in &r.results {
            ok &= x.status == Status::Pass;
            worst = worst.max(x.relative_residual);
            n += 1;
        }
    }
    ok &= n > 0;
    (ok, format!("{n} checks over all connections, worst {worst:.1e}"))
}

fn structural_zeros() -> (bool, String) {
    let mut bad = Vec::new();
    let mut count = 0;
    for (family, dim) in [
        (Family::Randers, 2),
        (Family::Randers, 3),
        (Family::MinkowskiQuartic, 2),
        (Family::RiemannianSphere, 2),
    ] {
        let spec = builtin(family, dim);
        let (pts, _) = sample_points::<f64>(&spec, 5, 9, 5).unwrap();
        for p in &pts {
            bad.extend(structural_zero_violations(&spec, p));
            count += 1;
        }
    }
    (bad.is_empty(), format!("{count} points, violations {bad:?}"))
}

fn flatness() -> (bool, String) {
    let flat = flatness_chain(&builtin(Family::MinkowskiQuartic, 2), 10, 10);
    let curved = flatness_chain(&sphere_spec(2), 10, 10);
    let hi = flat.iter().map(|x| x.1).fold(0.0, f64::max);
    let lo = curved.iter().map(|x| x.0).fold(f64::INFINITY, f64::min);
    (hi <= 1e-10 && lo >= 1e-3, format!("quartic max {hi:.1e}; sphere min of maxima {lo:.2e}"))
}

fn berwald_p() -> (bool, String) {
    let (gap, asym) = berwald_p_vs_spray(&builtin(Family::Randers, 3), 10, 13);
    (gap <= 1e-9 && asym <= 1e-10, format!("gap {gap:.1e}, asymmetry {asym:.1e}"))
}

fn cli_contract() -> (bool, String) {
    let run = |args: &[&str]| Command::new(env!("CARGO_BIN_EXE_finsler")).args(args).output().unwrap();
    let strip = |b: &[u8]| -> String {
        String::from_utf8_lossy(b)
            .lines()
            .filter(|l| !l.trim_start().starts_with("\"wall_time_seconds\""))
            .collect::<Vec<_>>()
            .join("\n")
    };
    let seeded = ["check", "--metric", "builtin:randers", "--dim", "3", "--seed", "42"];
    let (a, b) = (run(&seeded), run(&seeded));
    let same = a.status.code() == Some(0) && !a.stdout.is_empty() && strip(&a.stdout) == strip(&b.stdout);
    let ok0 = run(&["check", "--metric", "builtin:euclidean", "--points", "3"]).status.code();
    let fail1 = run(&["check", "--metric", "builtin:randers", "--points", "2", "--tol", "1e-30"]).status.code();
    let err2 = run(&["check", "--metric", "expr:y1^2+y2^2"]).status.code();
    (
        same && ok0 == Some(0) && fail1 == Some(1) && err2 == Some(2),
        format!("seed 42 identical {same}; exits {ok0:?} {fail1:?} {err2:?}"),
    )
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> (bool, String)); 8] = [
        ("identity suite", identity_suite),
        ("riemannian reduction oracle", riemannian_oracle),
        ("jets vs finite differences", jets_vs_fd),
        ("bracket sign convention", bracket_meta),
        ("structural zeros", structural_zeros),
        ("flatness chain", flatness),
        ("berwald hv-curvature oracle", berwald_p),
        ("cli determinism and exit codes", cli_contract),
    ];
    let mut failed = Vec::new();
    let mut err = std::io::stderr().lock();
    writeln!(err).unwrap();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let (ok, detail) = f();
        writeln!(err, "[{}] {}. {name}: {detail}", if ok { "PASS" } else { "FAIL" }, i + 1).unwrap();
        if !ok {
            failed.push(*name);
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}
