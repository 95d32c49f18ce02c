//! Sample points on the slit tangent bundle and the jets of the objects derived from
//! `L`: energy, metric tensor, Cartan tensor, spray and Barthel connection.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;
use rand_xoshiro::SplitMix64;
use thiserror::Error;

use crate::jets::{seed_variables, sum_jets, Jet, JetError};
use crate::linalg::{jet_inverse, InverseError};
use crate::metric::{MetricError, MetricSpec};
use crate::scalar::Scalar;
use crate::tensor::{PiTensor, Slot};

/// Default truncation order: enough for one covariant derivative of every curvature.
pub const DEFAULT_ORDER: usize = 6;

/// Lowest order at which the Barthel connection and its derivative exist.
pub const MIN_ORDER: usize = 4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error("metric tensor is singular: pivot {pivot:e} below 1e-12 * {norm:e}")]
    Singular { pivot: f64, norm: f64 },
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("order {0} is too low; at least {MIN_ORDER} is required")]
    OrderTooLow(usize),
}

impl From<InverseError> for GeometryError {
    fn from(e: InverseError) -> Self {
        match e {
            InverseError::Singular { pivot, norm } => GeometryError::Singular { pivot, norm },
            InverseError::Jet(j) => GeometryError::Jet(j),
        }
    }
}

/// A point `(x, y)` of `TM` with `y ≠ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartPoint<S> {
    pub x: Vec<S>,
    pub y: Vec<S>,
}

impl<S: Scalar> ChartPoint<S> {
    pub fn new(x: Vec<S>, y: Vec<S>) -> Result<Self, GeometryError> {
        if x.len() != y.len() || x.is_empty() {
            return Err(GeometryError::InvalidPoint(format!(
                "x has {} coordinates and y has {}",
                x.len(),
                y.len()
            )));
        }
        if x.iter().chain(&y).any(|v| !v.is_finite()) {
            return Err(GeometryError::InvalidPoint("non-finite coordinate".into()));
        }
        if y.iter().all(|v| v.is_zero()) {
            return Err(GeometryError::InvalidPoint("y must be nonzero".into()));
        }
        Ok(ChartPoint { x, y })
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn cast<T: Scalar>(&self) -> ChartPoint<T> {
        ChartPoint {
            x: self.x.iter().map(|v| T::lit(v.as_f64())).collect(),
            y: self.y.iter().map(|v| T::lit(v.as_f64())).collect(),
        }
    }
}

impl<S: Scalar> fmt::Display for ChartPoint<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[S]| {
            v.iter()
                .map(|c| format!("{c}"))
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "x={};y={}", join(&self.x), join(&self.y))
    }
}

impl FromStr for ChartPoint<f64> {
    type Err = GeometryError;

    /// Parses `x=a,b;y=c,d`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |m: &str| GeometryError::InvalidPoint(format!("{m} in `{s}`"));
        let (mut x, mut y) = (None, None);
        for part in s.split(';') {
            let (key, vals) = part.split_once('=').ok_or_else(|| bad("expected key=values"))?;
            let vals: Vec<f64> = vals
                .split(',')
                .map(|v| v.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|_| bad("malformed number"))?;
            match key.trim() {
                "x" => x = Some(vals),
                "y" => y = Some(vals),
                other => return Err(bad(&format!("unknown key `{other}`"))),
            }
        }
        ChartPoint::new(x.ok_or_else(|| bad("missing x"))?, y.ok_or_else(|| bad("missing y"))?)
    }
}

/// Seeded sampler of points: `x` uniform in a box, `y` with a uniformly distributed
/// direction and a log-uniform length in `[0.5, 2]`.
#[derive(Debug, Clone)]
pub struct Sampler {
    rng: SplitMix64,
    bounds: Vec<(f64, f64)>,
    radius: (f64, f64),
}

impl Sampler {
    pub fn new(bounds: Vec<(f64, f64)>, seed: u64) -> Self {
        Sampler {
            rng: SplitMix64::seed_from_u64(seed),
            bounds,
            radius: (0.5, 2.0),
        }
    }

    pub fn for_spec(spec: &MetricSpec, seed: u64) -> Self {
        Self::new(spec.sample_box(), seed)
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn next_point<S: Scalar>(&mut self) -> ChartPoint<S> {
        let x: Vec<f64> = self
            .bounds
            .iter()
            .map(|&(lo, hi)| lo + (hi - lo) * self.rng.gen::<f64>())
            .collect();
        let mut dir: Vec<f64>;
        loop {
            dir = (0..self.bounds.len())
                .map(|_| self.rng.sample(StandardNormal))
                .collect();
            let norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm > 1e-3 {
                dir.iter_mut().for_each(|v| *v /= norm);
                break;
            }
        }
        let (lo, hi) = (self.radius.0.ln(), self.radius.1.ln());
        let r = (lo + (hi - lo) * self.rng.gen::<f64>()).exp();
        ChartPoint {
            x: x.into_iter().map(S::lit).collect(),
            y: dir.into_iter().map(|v| S::lit(r * v)).collect(),
        }
    }
}

/// Jets at a point of every object derived from `L` alone.
///
/// With truncation order `K` the orders are: `L`, `E` at `K`; `g`, `g⁻¹`, `G` at `K−2`;
/// `C`, `N` at `K−3`; `∂N/∂y` at `K−4`.
#[derive(Clone)]
pub struct FrameJets<S> {
    pub n: usize,
    pub order: usize,
    pub point: ChartPoint<S>,
    pub vars: Vec<Jet<S>>,
    pub l: Jet<S>,
    pub e: Jet<S>,
    /// `g_ij`
    pub g: PiTensor<Jet<S>>,
    /// `g^ij`
    pub g_inv: PiTensor<Jet<S>>,
    /// `C_ijk = ½ ∂³E/∂y^i∂y^j∂y^k`
    pub c: PiTensor<Jet<S>>,
    /// Spray coefficients `G^i`.
    pub spray: Vec<Jet<S>>,
    /// `N^i_j = ∂G^i/∂y^j`, stored at `i·n + j`.
    pub nl: Vec<Jet<S>>,
    /// `∂²G^i/∂y^j∂y^k`, stored at `(i·n + j)·n + k`.
    pub dn: Vec<Jet<S>>,
}

impl<S: Scalar> FrameJets<S> {
    pub fn new(spec: &MetricSpec, point: &ChartPoint<S>, order: usize) -> Result<Self, GeometryError> {
        if order < MIN_ORDER {
            return Err(GeometryError::OrderTooLow(order));
        }
        if point.dim() != spec.dim {
            return Err(GeometryError::InvalidPoint(format!(
                "point has dimension {}, metric has {}",
                point.dim(),
                spec.dim
            )));
        }
        let n = spec.dim;
        let vars = seed_variables(&point.x, &point.y, order);
        let l = spec.eval_jet(&vars)?;
        let e = (&l * &l) * S::lit(0.5);
        let yv = |k: usize| n + k;
        let g = PiTensor::try_from_fn(n, vec![Slot::Down, Slot::Down], |i| {
            e.partial_multi(&[yv(i[0]), yv(i[1])])
        })?;
        let c = PiTensor::try_from_fn(n, vec![Slot::Down; 3], |i| {
            e.partial_multi(&[yv(i[0]), yv(i[1]), yv(i[2])])
                .map(|j| j * S::lit(0.5))
        })?;
        let inv = jet_inverse(g.data(), n)?;
        let g_inv = PiTensor::new(n, vec![Slot::Up, Slot::Up], inv);

        // 2 g_kh G^h = y^j ∂²E/∂x^j∂y^k − ∂E/∂x^k
        let rhs: Vec<Jet<S>> = (0..n)
            .map(|k| -> Result<Jet<S>, JetError> {
                let mut acc = -&e.dx(k)?;
                for j in 0..n {
                    acc = &acc + &(&vars[yv(j)] * &e.partial_multi(&[j, yv(k)])?);
                }
                Ok(acc)
            })
            .collect::<Result<_, _>>()?;
        let spray: Vec<Jet<S>> = (0..n)
            .map(|i| {
                let s = sum_jets((0..n).map(|h| g_inv.get(&[i, h]) * &rhs[h])).expect("n > 0");
                s * S::lit(0.5)
            })
            .collect();
        let mut nl = Vec::with_capacity(n * n);
        let mut dn = Vec::with_capacity(n * n * n);
        for gi in &spray {
            for j in 0..n {
                nl.push(gi.dy(j)?);
                for k in 0..n {
                    dn.push(gi.partial_multi(&[yv(j), yv(k)])?);
                }
            }
        }
        Ok(FrameJets {
            n,
            order,
            point: point.clone(),
            vars,
            l,
            e,
            g,
            g_inv,
            c,
            spray,
            nl,
            dn,
        })
    }

    /// Coordinate function `y^i` as a jet.
    pub fn y_jet(&self, i: usize) -> &Jet<S> {
        &self.vars[self.n + i]
    }

    /// `N^i_j`
    pub fn nl(&self, i: usize, j: usize) -> &Jet<S> {
        &self.nl[i * self.n + j]
    }

    /// `∂N^i_j/∂y^k`, symmetric in `j, k`.
    pub fn dn(&self, i: usize, j: usize, k: usize) -> &Jet<S> {
        &self.dn[(i * self.n + j) * self.n + k]
    }

    /// `δ_k f = ∂f/∂x^k − N^m_k ∂f/∂y^m`
    pub fn delta(&self, f: &Jet<S>, k: usize) -> Result<Jet<S>, JetError> {
        let mut acc = f.dx(k)?;
        for m in 0..self.n {
            acc = &acc - &(self.nl(m, k) * &f.dy(m)?);
        }
        Ok(acc)
    }

    /// `δ_l N^a_k`, using the symmetric second derivative of the spray.
    pub fn delta_n(&self, a: usize, k: usize, l: usize) -> Result<Jet<S>, JetError> {
        let mut acc = self.nl(a, k).dx(l)?;
        for m in 0..self.n {
            acc = &acc - &(self.nl(m, l) * self.dn(a, k, m));
        }
        Ok(acc)
    }

    pub fn values(&self) -> FrameData<S> {
        let n = self.n;
        FrameData {
            n,
            point: self.point.clone(),
            l: self.l.value(),
            g: self.g.values(),
            g_inv: self.g_inv.values(),
            c: self.c.values(),
            spray: self.spray.iter().map(|j| j.value()).collect(),
            nl: PiTensor::from_fn(n, vec![Slot::Up, Slot::Down], |i| self.nl(i[0], i[1]).value()),
            dn: PiTensor::from_fn(n, vec![Slot::Up, Slot::Down, Slot::Down], |i| {
                self.dn(i[0], i[1], i[2]).value()
            }),
        }
    }
}

/// Values at the base point of the objects in [`FrameJets`].
#[derive(Debug, Clone, PartialEq)]
pub struct FrameData<S> {
    pub n: usize,
    pub point: ChartPoint<S>,
    pub l: S,
    pub g: PiTensor<S>,
    pub g_inv: PiTensor<S>,
    pub c: PiTensor<S>,
    pub spray: Vec<S>,
    pub nl: PiTensor<S>,
    pub dn: PiTensor<S>,
}

fn energy<S: Scalar>(
    spec: &MetricSpec,
    point: &ChartPoint<S>,
    order: usize,
) -> Result<Jet<S>, GeometryError> {
    if point.dim() != spec.dim {
        return Err(GeometryError::InvalidPoint(format!(
            "point has dimension {}, metric has {}",
            point.dim(),
            spec.dim
        )));
    }
    let vars = seed_variables(&point.x, &point.y, order);
    let l = spec.eval_jet(&vars)?;
    Ok((&l * &l) * S::lit(0.5))
}

/// `g_ij(x, y)`
pub fn metric_tensor<S: Scalar>(
    spec: &MetricSpec,
    point: &ChartPoint<S>,
) -> Result<PiTensor<S>, GeometryError> {
    let e = energy(spec, point, 2)?;
    let n = spec.dim;
    Ok(PiTensor::try_from_fn(n, vec![Slot::Down, Slot::Down], |i| {
        e.partial_multi(&[n + i[0], n + i[1]]).map(|j| j.value())
    })?)
}

/// `C_ijk(x, y)`
pub fn cartan_tensor<S: Scalar>(
    spec: &MetricSpec,
    point: &ChartPoint<S>,
) -> Result<PiTensor<S>, GeometryError> {
    let e = energy(spec, point, 3)?;
    let n = spec.dim;
    Ok(PiTensor::try_from_fn(n, vec![Slot::Down; 3], |i| {
        e.partial_multi(&[n + i[0], n + i[1], n + i[2]])
            .map(|j| j.value() * S::lit(0.5))
    })?)
}

/// Spray coefficients `G^i(x, y)`.
pub fn spray<S: Scalar>(spec: &MetricSpec, point: &ChartPoint<S>) -> Result<Vec<S>, GeometryError> {
    let f = FrameJets::new(spec, point, MIN_ORDER)?;
    Ok(f.spray.iter().map(|j| j.value()).collect())
}

/// Barthel coefficients `N^i_j(x, y)`.
pub fn barthel<S: Scalar>(spec: &MetricSpec, point: &ChartPoint<S>) -> Result<PiTensor<S>, GeometryError> {
    Ok(FrameJets::new(spec, point, MIN_ORDER)?.values().nl)
}

/// `δ_k f` for a jet field `f`.
pub fn horizontal_derivative<S: Scalar>(
    f: &Jet<S>,
    frame: &FrameJets<S>,
    k: usize,
) -> Result<Jet<S>, JetError> {
    frame.delta(f, k)
}

/// Components of `i_G Ω + dE` on `(dx, dy)` together with the largest term magnitude.
/// The spray is characterized by this form vanishing.
pub fn spray_defect<S: Scalar>(frame: &FrameJets<S>) -> Result<(Vec<S>, S), JetError> {
    let n = frame.n;
    let (y, e) = (&frame.point.y, &frame.e);
    let mut out = Vec::with_capacity(2 * n);
    let mut scale = S::one();
    let mut track = |v: S| {
        scale = scale.max(v.abs());
        v
    };
    for k in 0..n {
        let mut s = track(e.dx(k)?.value());
        for j in 0..n {
            let a_jk = e.partial_multi(&[j, n + k])?.value();
            let a_kj = e.partial_multi(&[k, n + j])?.value();
            s = s + track(y[j] * a_jk) - track(y[j] * a_kj);
            s = s - track(S::lit(2.0) * frame.g.get(&[k, j]).value() * frame.spray[j].value());
        }
        out.push(s);
    }
    for k in 0..n {
        let mut s = track(e.dy(k)?.value());
        for i in 0..n {
            s = s - track(frame.g.get(&[i, k]).value() * y[i]);
        }
        out.push(s);
    }
    Ok((out, scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{builtin_metric, Family};
    use serde_json::Map;

    fn randers(n: usize) -> MetricSpec {
        builtin_metric(Family::Randers, n, Map::new()).unwrap()
    }

    #[test]
    fn point_parsing() {
        let p: ChartPoint<f64> = "x=0.1,0.2;y=1,0".parse().unwrap();
        assert_eq!(p.x, vec![0.1, 0.2]);
        assert_eq!(p.y, vec![1.0, 0.0]);
        assert_eq!(p.to_string(), "x=0.1,0.2;y=1,0");
        assert!("x=0,0;y=0,0".parse::<ChartPoint<f64>>().is_err());
        assert!("x=0,0;y=1".parse::<ChartPoint<f64>>().is_err());
        assert!("x=0,a;y=1,1".parse::<ChartPoint<f64>>().is_err());
    }

    #[test]
    fn sampler_is_deterministic_and_in_range() {
        let spec = builtin_metric(Family::RiemannianSphere, 3, Map::new()).unwrap();
        let mut a = Sampler::for_spec(&spec, 9);
        let mut b = Sampler::for_spec(&spec, 9);
        for _ in 0..50 {
            let p: ChartPoint<f64> = a.next_point();
            assert_eq!(p, b.next_point());
            assert!(p.x.iter().all(|v| (0.3..=std::f64::consts::PI - 0.3).contains(v)));
            let r = p.y.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!((0.5 - 1e-12..=2.0 + 1e-12).contains(&r));
        }
    }

    #[test]
    fn euclidean_frame() {
        let spec = builtin_metric(Family::Euclidean, 3, Map::new()).unwrap();
        let p = ChartPoint::new(vec![0.1, 0.2, 0.3], vec![1.0, -2.0, 0.5]).unwrap();
        let f = FrameJets::new(&spec, &p, 6).unwrap();
        let d = f.values();
        for i in 0..3 {
            for j in 0..3 {
                let id: f64 = if i == j { 1.0 } else { 0.0 };
                assert!((d.g.get(&[i, j]) - id).abs() < 1e-14);
                assert!((d.g_inv.get(&[i, j]) - id).abs() < 1e-14);
                assert_eq!(*d.nl.get(&[i, j]), 0.0);
            }
        }
        assert!(d.c.max_abs() < 1e-14);
        assert_eq!(f.order, 6);
        assert_eq!(f.g.order(), 4);
        assert_eq!(f.nl[0].order(), 3);
        assert_eq!(f.dn[0].order(), 2);
    }

    #[test]
    fn spray_and_barthel_properties() {
        let spec = randers(3);
        let mut s = Sampler::for_spec(&spec, 5);
        for _ in 0..5 {
            let p: ChartPoint<f64> = s.next_point();
            let f = FrameJets::new(&spec, &p, 5).unwrap();
            let (defect, scale) = spray_defect(&f).unwrap();
            assert!(defect.iter().all(|v| v.abs() <= 1e-11 * scale), "{defect:?}");
            // Euler: N^i_j y^j = 2 G^i and dN symmetric
            for i in 0..3 {
                let ny: f64 = (0..3).map(|j| f.nl(i, j).value() * p.y[j]).sum();
                assert!((ny - 2.0 * f.spray[i].value()).abs() < 1e-12);
                for j in 0..3 {
                    for k in 0..3 {
                        assert_eq!(f.dn(i, j, k), f.dn(i, k, j));
                    }
                }
            }
            // δ_k L = 0
            for k in 0..3 {
                assert!(f.delta(&f.l, k).unwrap().value().abs() < 1e-12);
            }
        }
    }

    #[test]
    fn metric_tensor_of_randers_is_positive() {
        let spec = randers(2);
        let p = ChartPoint::new(vec![0.2, -0.4], vec![0.7, 1.1]).unwrap();
        let g = metric_tensor(&spec, &p).unwrap();
        let det = g.get(&[0, 0]) * g.get(&[1, 1]) - g.get(&[0, 1]) * g.get(&[1, 0]);
        assert!(det > 0.0 && *g.get(&[0, 0]) > 0.0);
        assert_eq!(g.get(&[0, 1]), g.get(&[1, 0]));
        let c = cartan_tensor(&spec, &p).unwrap();
        let cy: f64 = (0..2).map(|k| c.get(&[0, 1, k]) * p.y[k]).sum();
        assert!(cy.abs() < 1e-13);
    }

    #[test]
    fn order_too_low_is_rejected() {
        let spec = randers(2);
        let p = ChartPoint::new(vec![0.0, 0.0], vec![1.0, 0.0]).unwrap();
        assert!(matches!(
            FrameJets::new(&spec, &p, 3),
            Err(GeometryError::OrderTooLow(3))
        ));
    }
}
