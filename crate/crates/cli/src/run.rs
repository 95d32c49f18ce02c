use std::io::Write;

use anyhow::{anyhow, bail, Context, Result};
use finsler_core::identities::{catalog, check_all, CheckOptions, CheckReport};
use finsler_core::metric::{validate_metric, MetricFile};
use finsler_core::{builtin_metric, parse_metric, Family, MetricSpec, Sampler};

use crate::report::{self, Envelope};
use crate::{CheckArgs, Format, MetricArgs, Precision};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "FINSLER_THREADS";

pub fn resolve_metric(args: &MetricArgs) -> Result<MetricSpec> {
    let dim = args.dim.unwrap_or(2);
    if let Some(name) = args.metric.strip_prefix("builtin:") {
        let family = Family::from_tag(name)?;
        let params = match &args.params {
            Some(text) => serde_json::from_str(text).context("--params must be a JSON object")?,
            None => Default::default(),
        };
        return Ok(builtin_metric(family, dim, params)?);
    }
    if args.params.is_some() {
        bail!("--params applies to builtin metrics only");
    }
    if let Some(text) = args.metric.strip_prefix("expr:") {
        return Ok(parse_metric(text, dim)?);
    }
    let text = std::fs::read_to_string(&args.metric)
        .with_context(|| format!("reading metric file `{}`", args.metric))?;
    let spec = MetricFile::from_json(&text)?;
    if let Some(d) = args.dim {
        if d != spec.dim {
            bail!("--dim {d} disagrees with the file's dim {}", spec.dim);
        }
    }
    Ok(spec)
}

fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => {
            let t: usize = v
                .trim()
                .parse()
                .with_context(|| format!("{THREADS_ENV}={v:?} is not a thread count"))?;
            Ok(Some(t.max(1)))
        }
        Err(_) => Ok(None),
    }
}

/// Expands glob patterns into exact catalog ids, in catalog order.
pub fn select_ids(patterns: &[String]) -> Result<Option<Vec<String>>> {
    if patterns.is_empty() {
        return Ok(None);
    }
    let pats = patterns
        .iter()
        .map(|p| glob::Pattern::new(p).with_context(|| format!("bad id pattern `{p}`")))
        .collect::<Result<Vec<_>>>()?;
    for (p, raw) in pats.iter().zip(patterns) {
        if !catalog().iter().any(|d| p.matches(&d.id)) {
            bail!("id pattern `{raw}` matches no identity");
        }
    }
    Ok(Some(
        catalog()
            .iter()
            .filter(|d| pats.iter().any(|p| p.matches(&d.id)))
            .map(|d| d.id.clone())
            .collect(),
    ))
}

pub fn check(args: &CheckArgs) -> Result<bool> {
    let spec = resolve_metric(&args.metric)?;
    let validation = validate_metric(&spec, &mut Sampler::for_spec(&spec, args.seed), 64);
    if !validation.pass {
        let mut msg = format!(
            "metric `{}` failed validation: homogeneity residual {:.3e}, {} positivity violations",
            spec.label(),
            validation.homogeneity_residual_max,
            validation.positivity_violations
        );
        for n in &validation.notes {
            msg.push_str("\n  ");
            msg.push_str(n);
        }
        bail!(msg);
    }
    if args.order < finsler_core::geometry::MIN_ORDER {
        bail!("--order must be at least {}", finsler_core::geometry::MIN_ORDER);
    }
    if args.points == 0 {
        bail!("--points must be at least 1");
    }
    let opts = CheckOptions {
        points: args.points,
        seed: args.seed,
        tol: args.tol,
        order: args.order,
        ids: select_ids(&args.ids)?,
        threads: threads_from_env()?,
    };
    let report: CheckReport = match args.precision {
        Precision::F64 => check_all::<f64>(&spec, &opts)?,
        Precision::F32 => check_all::<f32>(&spec, &opts)?,
    };
    let env = Envelope::new(&spec, args, &report);
    let text = match args.format {
        Format::Json => serde_json::to_string_pretty(&env)? + "\n",
        Format::Csv => report::csv(&report),
    };
    write_output(args.out.as_deref(), &text)?;
    eprintln!("{}", report::summary_line(&report));
    for r in report.results.iter().filter(|r| !r.probe && r.status == finsler_core::Status::Fail) {
        eprintln!(
            "FAIL {} relative residual {:.3e} at {}{}",
            r.id,
            r.relative_residual,
            r.worst_point.as_deref().unwrap_or("-"),
            r.note.as_deref().map(|n| format!(" ({n})")).unwrap_or_default()
        );
    }
    Ok(report.passed())
}

pub fn write_output(path: Option<&std::path::Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing `{}`", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

pub fn list_metrics() {
    for f in Family::ALL {
        println!("{}\n    {}", f.tag(), f.doc());
    }
}

pub fn validate(metric: &MetricArgs, points: usize, seed: u64) -> Result<bool> {
    let spec = resolve_metric(metric)?;
    if points == 0 {
        return Err(anyhow!("--points must be at least 1"));
    }
    let report = validate_metric(&spec, &mut Sampler::for_spec(&spec, seed), points);
    let out = serde_json::json!({
        "metric": spec.label(),
        "dim": spec.dim,
        "description": spec.description,
        "validation": report,
    });
    write_output(None, &(serde_json::to_string_pretty(&out)? + "\n"))?;
    Ok(report.pass)
}
