//! Independent oracles shared by the integration and acceptance tests.
#![allow(dead_code)]

use finsler_core::identities::{sample_points, PointContext};
use finsler_core::{builtin_metric, seed_variables, ChartPoint, ConnectionKind, Family, MetricSpec};

pub type Mat = Vec<Vec<f64>>;

/// A Riemannian metric with its first and second x-derivatives,
/// `da[k][i][j] = ∂_k a_ij`, `dda[k][l][i][j] = ∂_k ∂_l a_ij`.
pub struct MetricDerivs {
    pub a: Mat,
    pub da: Vec<Mat>,
    pub dda: Vec<Vec<Mat>>,
}

fn zeros(n: usize) -> Mat {
    vec![vec![0.0; n]; n]
}

/// Round sphere in nested polar coordinates, `a_ii = Π_{m<i} sin² x_m`.
pub fn sphere(x: &[f64]) -> MetricDerivs {
    let n = x.len();
    let mut a = zeros(n);
    let mut da = vec![zeros(n); n];
    let mut dda = vec![vec![zeros(n); n]; n];
    for i in 0..n {
        let aii: f64 = (0..i).map(|m| x[m].sin().powi(2)).product();
        a[i][i] = aii;
        let cot = |m: usize| x[m].cos() / x[m].sin();
        for k in 0..i {
            da[k][i][i] = 2.0 * cot(k) * aii;
            for l in 0..i {
                dda[k][l][i][i] = if k == l {
                    aii * 2.0 * (2.0 * x[k]).cos() / x[k].sin().powi(2)
                } else {
                    4.0 * cot(k) * cot(l) * aii
                };
            }
        }
    }
    MetricDerivs { a, da, dda }
}

/// `a_ij = δ_ij + c x_i x_j`.
pub fn rank_one(x: &[f64], c: f64) -> MetricDerivs {
    let n = x.len();
    let d = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 };
    let a = (0..n).map(|i| (0..n).map(|j| d(i, j) + c * x[i] * x[j]).collect()).collect();
    let da = (0..n)
        .map(|k| (0..n).map(|i| (0..n).map(|j| c * (d(i, k) * x[j] + x[i] * d(j, k))).collect()).collect())
        .collect();
    let dda = (0..n)
        .map(|k| {
            (0..n)
                .map(|l| (0..n).map(|i| (0..n).map(|j| c * (d(i, k) * d(j, l) + d(i, l) * d(j, k))).collect()).collect())
                .collect()
        })
        .collect();
    MetricDerivs { a, da, dda }
}

pub fn invert(m: &Mat) -> Mat {
    let n = m.len();
    let mut a: Mat = m.clone();
    let mut inv = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect::<Mat>();
    for c in 0..n {
        let p = (c..n).max_by(|&r, &s| a[r][c].abs().total_cmp(&a[s][c].abs())).unwrap();
        a.swap(c, p);
        inv.swap(c, p);
        let piv = a[c][c];
        for j in 0..n {
            a[c][j] /= piv;
            inv[c][j] /= piv;
        }
        for r in 0..n {
            if r != c {
                let f = a[r][c];
                for j in 0..n {
                    a[r][j] -= f * a[c][j];
                    inv[r][j] -= f * inv[c][j];
                }
            }
        }
    }
    inv
}

/// Levi-Civita symbols `gamma[i][j][k] = Γ^i_jk` and `dgamma[l][i][j][k] = ∂_l Γ^i_jk`.
pub struct Christoffel {
    pub gamma: Vec<Mat>,
    pub dgamma: Vec<Vec<Mat>>,
}

pub fn christoffel(m: &MetricDerivs) -> Christoffel {
    let n = m.a.len();
    let ai = invert(&m.a);
    // first kind Γ_hjk and its derivative
    let first = |h: usize, j: usize, k: usize| 0.5 * (m.da[j][h][k] + m.da[k][h][j] - m.da[h][j][k]);
    let dfirst = |l: usize, h: usize, j: usize, k: usize| 0.5 * (m.dda[l][j][h][k] + m.dda[l][k][h][j] - m.dda[l][h][j][k]);
    // ∂_l a^{ih} = −a^{ip} ∂_l a_pq a^{qh}
    let dai = |l: usize, i: usize, h: usize| {
        let mut s = 0.0;
        for p in 0..n {
            for q in 0..n {
                s -= ai[i][p] * m.da[l][p][q] * ai[q][h];
            }
        }
        s
    };
    let mut gamma = vec![zeros(n); n];
    let mut dgamma = vec![vec![zeros(n); n]; n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                gamma[i][j][k] = (0..n).map(|h| ai[i][h] * first(h, j, k)).sum();
                for l in 0..n {
                    dgamma[l][i][j][k] = (0..n).map(|h| dai(l, i, h) * first(h, j, k) + ai[i][h] * dfirst(l, h, j, k)).sum();
                }
            }
        }
    }
    Christoffel { gamma, dgamma }
}

/// Textbook `Riem(∂_k, ∂_l)∂_j = ∇_k∇_l ∂_j − ∇_l∇_k ∂_j` as `[k][l][j][i]`.
pub fn riemann_textbook(c: &Christoffel) -> Vec<Vec<Mat>> {
    let n = c.gamma.len();
    let g = &c.gamma;
    let mut r = vec![vec![zeros(n); n]; n];
    for k in 0..n {
        for l in 0..n {
            for j in 0..n {
                for i in 0..n {
                    let mut v = c.dgamma[k][i][l][j] - c.dgamma[l][i][k][j];
                    for m in 0..n {
                        v += g[i][k][m] * g[m][l][j] - g[i][l][m] * g[m][k][j];
                    }
                    r[k][l][j][i] = v;
                }
            }
        }
    }
    r
}

fn rel(err: f64, scale: f64) -> f64 {
    err / scale.max(1.0)
}

/// Worst relative deviations of the jet pipeline from the Levi-Civita oracle.
#[derive(Debug, Default, Clone, Copy)]
pub struct RiemannianErrors {
    /// `H` of all four connections against `Γ`.
    pub h: f64,
    /// `max |V|` over all four connections.
    pub v: f64,
    /// `max(|S|, |P|)` of the Cartan connection.
    pub sp: f64,
    /// Cartan `R` against the textbook Riemann tensor with the opposite sign.
    pub r: f64,
    /// `|R(e1,e2,e1,e2)/det − 1|` over points, sphere only.
    pub sectional: f64,
    /// Mean of `R(e1,e2,e2,e1)/det`, the same quantity with the last pair in written order.
    pub sectional_literal: f64,
}

pub fn riemannian_errors(spec: &MetricSpec, derivs: impl Fn(&[f64]) -> MetricDerivs, points: usize, seed: u64) -> RiemannianErrors {
    let n = spec.dim;
    let (pts, _) = sample_points::<f64>(spec, points, seed, 6).unwrap();
    let mut e = RiemannianErrors::default();
    let mut literal_sum = 0.0;
    for p in &pts {
        let ctx = PointContext::new(spec, p, 6).unwrap();
        let ch = christoffel(&derivs(&p.x));
        let riem = riemann_textbook(&ch);
        for k in ConnectionKind::ALL {
            let data = &ctx.bundle(k).data;
            let (h, v) = (data.h.values(), data.v.values());
            let mut err: f64 = 0.0;
            let mut scale: f64 = 0.0;
            for i in 0..n {
                for j in 0..n {
                    for l in 0..n {
                        err = err.max((h.at(&[i, j, l]) - ch.gamma[i][j][l]).abs());
                        scale = scale.max(ch.gamma[i][j][l].abs());
                    }
                }
            }
            e.h = e.h.max(rel(err, scale));
            e.v = e.v.max(v.max_abs());
        }
        let cv = ctx.cv(ConnectionKind::Cartan).unwrap();
        e.sp = e.sp.max(cv.s.max_abs()).max(cv.p.max_abs());
        let mut err: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for ix in cv.r.indices() {
            let (k, l, j, i) = (ix[0], ix[1], ix[2], ix[3]);
            err = err.max((cv.r.at(&ix) + riem[k][l][j][i]).abs());
            scale = scale.max(riem[k][l][j][i].abs());
        }
        e.r = e.r.max(rel(err, scale));
        let g = ctx.g();
        let det = g.at(&[0, 0]) * g.at(&[1, 1]) - g.at(&[0, 1]).powi(2);
        e.sectional = e.sectional.max((cv.r_low.at(&[0, 1, 0, 1]) / det - 1.0).abs());
        literal_sum += cv.r_low.at(&[0, 1, 1, 0]) / det;
    }
    e.sectional_literal = literal_sum / pts.len() as f64;
    e
}

pub fn sphere_spec(dim: usize) -> MetricSpec {
    builtin_metric(Family::RiemannianSphere, dim, Default::default()).unwrap()
}

pub fn custom_spec(dim: usize) -> MetricSpec {
    builtin_metric(Family::RiemannianCustom, dim, Default::default()).unwrap()
}

/// Nested central differences of `f` in the listed coordinates with step `h`.
fn central(f: &dyn Fn(&[f64]) -> f64, p: &[f64], vars: &[usize], h: f64) -> f64 {
    match vars.split_first() {
        None => f(p),
        Some((&v, rest)) => {
            let mut plus = p.to_vec();
            let mut minus = p.to_vec();
            plus[v] += h;
            minus[v] -= h;
            (central(f, &plus, rest, h) - central(f, &minus, rest, h)) / (2.0 * h)
        }
    }
}

/// One Richardson step on top of central differences.
pub fn richardson(f: &dyn Fn(&[f64]) -> f64, p: &[f64], vars: &[usize], h: f64) -> f64 {
    let coarse = central(f, p, vars, h);
    let fine = central(f, p, vars, h / 2.0);
    (4.0 * fine - coarse) / 3.0
}

/// All non-decreasing variable lists of length `1..=max_order` over `0..nvars`.
pub fn multi_indices(nvars: usize, max_order: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![vec![]];
    let mut all = Vec::new();
    for _ in 0..max_order {
        let mut next = Vec::new();
        for m in &out {
            let start = m.last().copied().unwrap_or(0);
            for v in start..nvars {
                let mut e = m.clone();
                e.push(v);
                next.push(e);
            }
        }
        all.extend(next.iter().cloned());
        out = next;
    }
    all
}

/// Worst relative gap between jet partials of `L²` (order ≤ 3) and Richardson-extrapolated
/// finite differences of the plain evaluator.
pub fn jet_vs_fd(spec: &MetricSpec, points: usize, seed: u64) -> f64 {
    let n = spec.dim;
    let (pts, _) = sample_points::<f64>(spec, points, seed, 4).unwrap();
    let f = |z: &[f64]| {
        let l = spec.eval_value(&z[..n], &z[n..]).unwrap();
        l * l
    };
    let mut worst: f64 = 0.0;
    for p in &pts {
        let vars = seed_variables(&p.x, &p.y, 3);
        let l = spec.eval_jet(&vars).unwrap();
        let l2 = &l * &l;
        let z: Vec<f64> = p.x.iter().chain(&p.y).copied().collect();
        for m in multi_indices(2 * n, 3) {
            let exact = l2.partial_multi(&m).unwrap().value();
            let approx = richardson(&f, &z, &m, 1e-2);
            worst = worst.max(rel((exact - approx).abs(), exact.abs()));
        }
    }
    worst
}

/// Berwald `P°[k][l][j][i]` against `∂³G^i/∂y^j∂y^k∂y^l`: (worst relative gap, worst
/// asymmetry in `(j,k,l)`).
pub fn berwald_p_vs_spray(spec: &MetricSpec, points: usize, seed: u64) -> (f64, f64) {
    let n = spec.dim;
    let (pts, _) = sample_points::<f64>(spec, points, seed, 6).unwrap();
    let (mut gap, mut asym): (f64, f64) = (0.0, 0.0);
    for p in &pts {
        let ctx = PointContext::new(spec, p, 6).unwrap();
        let pb = &ctx.cv(ConnectionKind::Berwald).unwrap().p;
        for ix in pb.indices() {
            let (k, l, j, i) = (ix[0], ix[1], ix[2], ix[3]);
            let d3 = ctx.frame.spray[i].partial_multi(&[n + j, n + k, n + l]).unwrap().value();
            let v = pb.at(&ix);
            gap = gap.max(rel((v - d3).abs(), d3.abs()));
            for perm in [[l, k, j], [j, l, k], [k, j, l]] {
                asym = asym.max((v - pb.at(&[perm[0], perm[1], perm[2], i])).abs());
            }
        }
    }
    (gap, asym)
}

/// The five quantities that vanish together for locally Minkowski metrics: Barthel
/// curvature, Berwald `R°`, `R̂°`, Cartan `R̂`, and the `H`-tensor. Returns max |component|
/// of each, minimized (`min = true`) or maximized over the points.
pub fn flatness_chain(spec: &MetricSpec, points: usize, seed: u64) -> Vec<(f64, f64)> {
    let (pts, _) = sample_points::<f64>(spec, points, seed, 5).unwrap();
    let mut out = vec![(f64::INFINITY, 0.0f64); 5];
    for p in &pts {
        let ctx = PointContext::new(spec, p, 5).unwrap();
        let vals = [
            ctx.barthel_direct().unwrap().max_abs(),
            ctx.cv(ConnectionKind::Berwald).unwrap().r.max_abs(),
            ctx.tv(ConnectionKind::Berwald).rhat.max_abs(),
            ctx.tv(ConnectionKind::Cartan).rhat.max_abs(),
            finsler_core::curvature::h_tensor(&ctx.bundle(ConnectionKind::Berwald).tors.rhat, &ctx.frame)
                .values()
                .max_abs(),
        ];
        for (o, v) in out.iter_mut().zip(vals) {
            o.0 = o.0.min(v);
            o.1 = o.1.max(v);
        }
    }
    out
}

/// Names of the tensors that are not bit-exactly zero although their construction
/// path makes them so.
pub fn structural_zero_violations(spec: &MetricSpec, point: &ChartPoint<f64>) -> Vec<String> {
    use ConnectionKind::*;
    let ctx = PointContext::new(spec, point, 5).unwrap();
    let mut bad = Vec::new();
    let mut need = |name: String, ok: bool| {
        if !ok {
            bad.push(name);
        }
    };
    for k in ConnectionKind::ALL {
        let t = &ctx.bundle(k).tors;
        need(format!("Q {k}"), t.q.is_exactly_zero());
        need(format!("Shat {k}"), t.shat.is_exactly_zero());
    }
    for k in [Berwald, Chern] {
        need(format!("V {k}"), ctx.bundle(k).data.v.is_exactly_zero());
        need(format!("S {k}"), ctx.curvature_jets(k).unwrap().s.is_exactly_zero());
    }
    for k in [Berwald, Hashiguchi] {
        need(format!("Phat {k}"), ctx.bundle(k).tors.phat.is_exactly_zero());
    }
    bad
}
