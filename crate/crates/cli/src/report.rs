//! Versioned report envelope written by `check`.

use finsler_core::identities::{CheckReport, IdentityResult, Status};
use finsler_core::MetricSpec;
use serde::Serialize;

use crate::CheckArgs;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
pub struct ConfigEcho {
    pub metric: String,
    pub description: String,
    pub dim: usize,
    pub order: usize,
    pub points: usize,
    pub seed: u64,
    pub tol: f64,
    pub ids: Vec<String>,
    pub precision: &'static str,
}

#[derive(Serialize)]
pub struct Summary {
    pub passed: bool,
    pub identities: usize,
    pub pass: usize,
    pub fail: usize,
    /// Failures of literal-form probes, which do not affect `passed`.
    pub probe_fail: usize,
    pub not_applicable: usize,
    pub skipped: usize,
    pub points_used: usize,
    pub points_redrawn: usize,
}

#[derive(Serialize)]
pub struct Envelope<'a> {
    pub schema_version: u32,
    pub tool: &'static str,
    pub tool_version: &'static str,
    pub config: ConfigEcho,
    pub summary: Summary,
    pub results: &'a [IdentityResult],
    /// Excluded from determinism comparisons.
    pub wall_time_seconds: f64,
}

impl<'a> Envelope<'a> {
    pub fn new(spec: &MetricSpec, args: &CheckArgs, report: &'a CheckReport) -> Self {
        Envelope {
            schema_version: SCHEMA_VERSION,
            tool: "finsler",
            tool_version: env!("CARGO_PKG_VERSION"),
            config: ConfigEcho {
                metric: report.metric.clone(),
                description: spec.description.clone(),
                dim: report.dim,
                order: report.order,
                points: report.points_requested,
                seed: report.seed,
                tol: report.tol,
                ids: args.ids.clone(),
                precision: match args.precision {
                    crate::Precision::F64 => "f64",
                    crate::Precision::F32 => "f32",
                },
            },
            summary: Summary {
                passed: report.passed(),
                identities: report.results.len(),
                pass: report.count(Status::Pass),
                fail: fails(report, false),
                probe_fail: fails(report, true),
                not_applicable: report.count(Status::NotApplicable),
                skipped: report.count(Status::Skipped),
                points_used: report.points_used,
                points_redrawn: report.points_redrawn,
            },
            results: &report.results,
            wall_time_seconds: report.elapsed.as_secs_f64(),
        }
    }
}

fn fails(report: &CheckReport, probe: bool) -> usize {
    report
        .results
        .iter()
        .filter(|r| r.status == Status::Fail && r.probe == probe)
        .count()
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::NotApplicable => "not_applicable",
        Status::Skipped => "skipped",
    }
}

/// One row per identity: id, worst relative residual, verdict.
pub fn csv(report: &CheckReport) -> String {
    let mut out = String::from("id,connection,relative_residual,max_residual,points,status,probe\n");
    for r in &report.results {
        out.push_str(&format!(
            "{},{},{:e},{:e},{},{},{}\n",
            r.id,
            r.connection.map(|k| k.name()).unwrap_or(""),
            r.relative_residual,
            r.max_residual,
            r.points,
            status_name(r.status),
            r.probe
        ));
    }
    out
}

pub fn summary_line(report: &CheckReport) -> String {
    format!(
        "{}: {} pass, {} fail, {} not applicable, {} skipped over {} points ({:.2}s)",
        report.metric,
        report.count(Status::Pass),
        fails(report, false),
        report.count(Status::NotApplicable),
        report.count(Status::Skipped),
        report.points_used,
        report.elapsed.as_secs_f64()
    )
}
