//! Registry of identities and the numerical checker.
//!
//! Every entry evaluates `lhs − rhs` componentwise at a point. The relative residual is
//! `max|lhs − rhs| / scale` with `scale = max(1, largest |term|)`, where a term is any
//! summand of either side.

mod catalog;
pub mod context;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::connections::ConnectionKind;
use crate::geometry::{ChartPoint, Sampler};
use crate::jets::JetError;
use crate::linalg::jacobi_eigenvalues;
use crate::metric::MetricSpec;
use crate::scalar::Scalar;

pub use context::{MetricFlags, Op, PointContext};

/// Default relative tolerance.
pub const DEFAULT_TOL: f64 = 1e-7;
/// Sample points with `L` at or below this are redrawn.
pub const MIN_L: f64 = 0.1;
/// Sample points where `λ_min(g)/λ_max(g)` is below this are redrawn.
pub const MIN_EIGEN_RATIO: f64 = 1e-2;

/// Argument triples of the cyclic sum `𝔖` over `(a, b, c)`.
pub fn cyclic(args: [usize; 3]) -> [[usize; 3]; 3] {
    let [a, b, c] = args;
    [[a, b, c], [b, c, a], [c, a, b]]
}

/// Interchange difference `𝔘_{X,Y} f(X,Y) = f(X,Y) − f(Y,X)`.
pub fn interchange<S: Scalar>(x: usize, y: usize, f: impl Fn(usize, usize) -> S) -> S {
    f(x, y) - f(y, x)
}

/// Running residual of one identity at one point.
#[derive(Debug, Clone, Copy)]
pub struct Acc<S> {
    pub residual: S,
    pub scale: S,
    pub components: usize,
}

/// Signed terms of one component equation `Σ terms = 0`.
#[derive(Debug, Clone, Copy)]
pub struct Terms<S> {
    total: S,
    max: S,
}

impl<S: Scalar> Terms<S> {
    pub fn new() -> Self {
        Terms {
            total: S::zero(),
            max: S::zero(),
        }
    }

    /// `+ v`
    pub fn p(mut self, v: S) -> Self {
        self.total = self.total + v;
        self.max = self.max.max(v.abs());
        self
    }

    /// `− v`
    pub fn m(self, v: S) -> Self {
        self.p(-v)
    }
}

impl<S: Scalar> Default for Terms<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Scalar> Default for Acc<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Scalar> Acc<S> {
    pub fn new() -> Self {
        Acc {
            residual: S::zero(),
            scale: S::one(),
            components: 0,
        }
    }

    fn bump(&mut self, r: S) {
        if !(r <= self.residual) {
            self.residual = r;
        }
        self.components += 1;
    }

    pub fn add(&mut self, t: Terms<S>) {
        self.scale = self.scale.max(t.max);
        self.bump(t.total.abs());
    }

    /// Component that must vanish.
    pub fn zero(&mut self, v: S) {
        self.add(Terms::new().p(v));
    }

    /// `a = b`
    pub fn eq(&mut self, a: S, b: S) {
        self.add(Terms::new().p(a).m(b));
    }

    /// Residual with an externally computed scale.
    pub fn raw(&mut self, residual: S, scale: S) {
        self.scale = self.scale.max(scale);
        self.bump(residual.abs());
    }

    /// Requires `max_abs ≥ threshold`; the residual is the relative shortfall.
    pub fn nonvanishing(&mut self, max_abs: S, threshold: S) {
        let short = (threshold - max_abs).max(S::zero()) / threshold;
        self.bump(if max_abs.is_nan() { S::nan() } else { short });
    }

    pub fn relative(&self) -> S {
        self.residual / self.scale
    }
}

/// Applicability condition of an identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Guard {
    Always,
    /// `L` independent of position.
    LocallyMinkowski,
    /// The round sphere, where every curvature is nonzero.
    RoundSphere,
    /// Riemannian or locally Minkowski, where the Berwald-type curvatures vanish.
    BerwaldRegime,
}

impl Guard {
    pub fn applies(self, f: MetricFlags) -> bool {
        match self {
            Guard::Always => true,
            Guard::LocallyMinkowski => f.locally_minkowski,
            Guard::RoundSphere => f.round_sphere,
            Guard::BerwaldRegime => f.riemannian || f.locally_minkowski,
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            Guard::Always => "all metrics",
            Guard::LocallyMinkowski => "locally Minkowski metrics",
            Guard::RoundSphere => "the round sphere",
            Guard::BerwaldRegime => "Riemannian or locally Minkowski metrics",
        }
    }
}

pub type EvalFn<S> = fn(&PointContext<S>, ConnectionKind, &mut Acc<S>) -> Result<(), JetError>;

/// The two monomorphizations of an evaluator.
#[derive(Clone, Copy)]
pub struct Evaluator {
    f64: EvalFn<f64>,
    f32: EvalFn<f32>,
}

/// Scalars the catalog can be evaluated in.
pub trait CatalogScalar: Scalar {
    fn pick(e: &Evaluator) -> EvalFn<Self>;
}

impl CatalogScalar for f64 {
    fn pick(e: &Evaluator) -> EvalFn<f64> {
        e.f64
    }
}

impl CatalogScalar for f32 {
    fn pick(e: &Evaluator) -> EvalFn<f32> {
        e.f32
    }
}

#[derive(Clone)]
pub struct IdentityDescriptor {
    pub id: String,
    /// Which object and property the identity is about.
    pub topic: String,
    /// The identity as a formula.
    pub statement: String,
    pub connection: Option<ConnectionKind>,
    pub guard: Guard,
    /// Jet order at which every term is available.
    pub order: usize,
    /// A literal transcription kept for comparison; excluded from the verdict.
    pub probe: bool,
    eval: Evaluator,
}

impl std::fmt::Debug for IdentityDescriptor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("IdentityDescriptor")
            .field("id", &self.id)
            .field("statement", &self.statement)
            .finish()
    }
}

impl IdentityDescriptor {
    pub fn evaluate<S: CatalogScalar>(&self, ctx: &PointContext<S>) -> Result<Acc<S>, JetError> {
        let mut acc = Acc::new();
        S::pick(&self.eval)(ctx, self.connection.unwrap_or(ConnectionKind::Cartan), &mut acc)?;
        Ok(acc)
    }
}

/// The full catalog, sorted by id.
pub fn catalog() -> &'static [IdentityDescriptor] {
    static CATALOG: std::sync::OnceLock<Vec<IdentityDescriptor>> = std::sync::OnceLock::new();
    CATALOG.get_or_init(|| {
        let mut v = catalog::build();
        v.sort_by(|a, b| a.id.cmp(&b.id));
        v
    })
}

pub fn find(id: &str) -> Option<&'static IdentityDescriptor> {
    catalog().iter().find(|d| d.id == id)
}

/// Markdown table of every registered identity.
pub fn coverage_manifest() -> String {
    let mut out = String::from(
        "# Identity coverage\n\nGenerated from the catalog; `cargo test` fails if this file drifts.\n\n\
         | id | connection | topic | statement | applies to |\n|---|---|---|---|---|\n",
    );
    for d in catalog() {
        let conn = d.connection.map(|k| k.name()).unwrap_or("-");
        let topic = if d.probe {
            format!("{} (literal form, reported only)", d.topic)
        } else {
            d.topic.clone()
        };
        out.push_str(&format!(
            "| `{}` | {} | {} | {} | {} |\n",
            d.id,
            conn,
            topic,
            d.statement.replace('|', "\\|"),
            d.guard.describe()
        ));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityResult {
    pub id: String,
    pub topic: String,
    pub statement: String,
    pub connection: Option<ConnectionKind>,
    pub probe: bool,
    pub status: Status,
    /// Largest relative residual over the evaluated points.
    pub relative_residual: f64,
    pub max_residual: f64,
    pub scale: f64,
    pub worst_point: Option<String>,
    pub points: usize,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub metric: String,
    pub dim: usize,
    pub order: usize,
    pub seed: u64,
    pub tol: f64,
    pub points_requested: usize,
    pub points_used: usize,
    pub points_redrawn: usize,
    pub results: Vec<IdentityResult>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl CheckReport {
    /// No non-probe identity failed.
    pub fn passed(&self) -> bool {
        self.results
            .iter()
            .all(|r| r.probe || r.status != Status::Fail)
    }

    pub fn count(&self, status: Status) -> usize {
        self.results.iter().filter(|r| r.status == status).count()
    }

    pub fn result(&self, id: &str) -> Option<&IdentityResult> {
        self.results.iter().find(|r| r.id == id)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOptions {
    pub points: usize,
    pub seed: u64,
    pub tol: f64,
    pub order: usize,
    /// Exact ids to run; all when `None`.
    pub ids: Option<Vec<String>>,
    /// Worker threads; rayon's default when `None`.
    pub threads: Option<usize>,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            points: 20,
            seed: 0,
            tol: DEFAULT_TOL,
            order: crate::geometry::DEFAULT_ORDER,
            ids: None,
            threads: None,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CheckError {
    #[error("unknown identity id `{0}`")]
    UnknownId(String),
    #[error("could not draw {wanted} usable points in {attempts} attempts: {last}")]
    Sampling {
        wanted: usize,
        attempts: usize,
        last: String,
    },
    #[error("thread pool: {0}")]
    Threads(String),
}

/// Whether a point is far enough from the boundary of the indicatrix domain for
/// finite-precision evaluation.
fn well_conditioned<S: CatalogScalar>(spec: &MetricSpec, p: &ChartPoint<S>, order: usize) -> Result<PointContext<S>, String> {
    let l = spec.eval_value(&p.x, &p.y).map_err(|e| e.to_string())?;
    if !(l.as_f64() > MIN_L) {
        return Err(format!("L = {l} too small"));
    }
    let ctx = PointContext::new(spec, p, order).map_err(|e| e.to_string())?;
    let n = spec.dim;
    let m: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| ctx.fd.g.at(&[i, j]).as_f64()).collect())
        .collect();
    let ev = jacobi_eigenvalues(&m);
    let (lo, hi) = (ev[0], ev[n - 1]);
    if !(lo > 0.0 && lo / hi >= MIN_EIGEN_RATIO) {
        return Err(format!("g eigenvalues {lo:.3e}..{hi:.3e}"));
    }
    Ok(ctx)
}

/// Draws `count` usable points deterministically.
pub fn sample_points<S: CatalogScalar>(
    spec: &MetricSpec,
    count: usize,
    seed: u64,
    order: usize,
) -> Result<(Vec<ChartPoint<S>>, usize), CheckError> {
    let mut sampler = Sampler::for_spec(spec, seed);
    let mut pts = Vec::with_capacity(count);
    let mut redrawn = 0;
    let attempts = 50 * count.max(1);
    let mut last = String::new();
    for _ in 0..attempts {
        if pts.len() == count {
            break;
        }
        let p: ChartPoint<S> = sampler.next_point();
        match well_conditioned(spec, &p, crate::geometry::MIN_ORDER.min(order)) {
            Ok(_) => pts.push(p),
            Err(e) => {
                redrawn += 1;
                last = e;
            }
        }
    }
    if pts.len() < count {
        return Err(CheckError::Sampling {
            wanted: count,
            attempts,
            last,
        });
    }
    Ok((pts, redrawn))
}

enum Outcome<S> {
    Value(Acc<S>),
    Shortfall(String),
    Error(String),
}

/// Evaluates one identity at one point.
pub fn check_identity<S: CatalogScalar>(
    desc: &IdentityDescriptor,
    spec: &MetricSpec,
    point: &ChartPoint<S>,
    order: usize,
) -> Result<Acc<S>, crate::geometry::GeometryError> {
    let ctx = PointContext::new(spec, point, order)?;
    Ok(desc.evaluate(&ctx)?)
}

/// Runs every selected identity at `opts.points` sampled points. Results do not depend
/// on the number of worker threads.
pub fn check_all<S: CatalogScalar>(spec: &MetricSpec, opts: &CheckOptions) -> Result<CheckReport, CheckError> {
    let start = Instant::now();
    let selected: Vec<&IdentityDescriptor> = match &opts.ids {
        None => catalog().iter().collect(),
        Some(ids) => ids
            .iter()
            .map(|id| find(id).ok_or_else(|| CheckError::UnknownId(id.clone())))
            .collect::<Result<_, _>>()?,
    };
    let flags = MetricFlags::of(spec);
    let (points, redrawn) = sample_points::<S>(spec, opts.points, opts.seed, opts.order)?;

    let runnable: Vec<&IdentityDescriptor> = selected
        .iter()
        .copied()
        .filter(|d| d.guard.applies(flags) && d.order <= opts.order)
        .collect();

    let eval_point = |p: &ChartPoint<S>| -> Vec<Outcome<S>> {
        let ctx = match PointContext::new(spec, p, opts.order) {
            Ok(c) => c,
            Err(e) => return runnable.iter().map(|_| Outcome::Error(e.to_string())).collect(),
        };
        runnable
            .iter()
            .map(|d| match d.evaluate(&ctx) {
                Ok(acc) => Outcome::Value(acc),
                Err(e @ JetError::OrderShortfall { .. }) => Outcome::Shortfall(e.to_string()),
                Err(e) => Outcome::Error(e.to_string()),
            })
            .collect()
    };
    let per_point: Vec<Vec<Outcome<S>>> = match opts.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .map_err(|e| CheckError::Threads(e.to_string()))?
            .install(|| points.par_iter().map(eval_point).collect()),
        None => points.par_iter().map(eval_point).collect(),
    };

    let mut by_id: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, d) in runnable.iter().enumerate() {
        by_id.insert(d.id.as_str(), i);
    }
    let tol = S::lit(opts.tol);
    let results = selected
        .iter()
        .map(|d| {
            let mut r = IdentityResult {
                id: d.id.clone(),
                topic: d.topic.clone(),
                statement: d.statement.clone(),
                connection: d.connection,
                probe: d.probe,
                status: Status::Skipped,
                relative_residual: 0.0,
                max_residual: 0.0,
                scale: 1.0,
                worst_point: None,
                points: 0,
                note: None,
            };
            if !d.guard.applies(flags) {
                r.status = Status::NotApplicable;
                r.note = Some(format!("applies to {}", d.guard.describe()));
                return r;
            }
            let Some(&col) = by_id.get(d.id.as_str()) else {
                r.note = Some(format!("needs jet order >= {}", d.order));
                return r;
            };
            let mut worst: Option<S> = None;
            let mut failed = false;
            for (p, outs) in points.iter().zip(&per_point) {
                match &outs[col] {
                    Outcome::Value(acc) => {
                        r.points += 1;
                        let rel = acc.relative();
                        let worse = match worst {
                            None => true,
                            Some(w) => !(rel <= w),
                        };
                        if worse {
                            worst = Some(rel);
                            r.relative_residual = rel.as_f64();
                            r.max_residual = acc.residual.as_f64();
                            r.scale = acc.scale.as_f64();
                            r.worst_point = Some(p.to_string());
                        }
                        if !(rel <= tol) {
                            failed = true;
                        }
                    }
                    Outcome::Shortfall(msg) => {
                        r.note.get_or_insert_with(|| msg.clone());
                    }
                    Outcome::Error(msg) => {
                        failed = true;
                        r.note.get_or_insert_with(|| msg.clone());
                    }
                }
            }
            r.status = if failed {
                Status::Fail
            } else if r.points == 0 {
                Status::Skipped
            } else {
                Status::Pass
            };
            r
        })
        .collect();

    Ok(CheckReport {
        metric: spec.label(),
        dim: spec.dim,
        order: opts.order,
        seed: opts.seed,
        tol: opts.tol,
        points_requested: opts.points,
        points_used: points.len(),
        points_redrawn: redrawn,
        results,
        elapsed: start.elapsed(),
    })
}

#[cfg(test)]
mod tests;
