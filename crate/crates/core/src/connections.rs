//! The four canonical connections as coefficient tables in the adapted frame
//! `δ_k = ∂_{x^k} − N^m_k ∂_{y^m}`, `∂̇_k = ∂_{y^k}`:
//!
//! `D_{δ_k} ē_j = H^i_jk ē_i`, `D_{∂̇_k} ē_j = V^i_jk ē_i`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::geometry::FrameJets;
use crate::jets::{sum_jets, Jet, JetError};
use crate::scalar::Scalar;
use crate::tensor::{PiTensor, Slot, TensorField};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConnectionKind {
    Cartan,
    Berwald,
    Chern,
    Hashiguchi,
}

impl ConnectionKind {
    pub const ALL: [ConnectionKind; 4] = [
        ConnectionKind::Cartan,
        ConnectionKind::Berwald,
        ConnectionKind::Chern,
        ConnectionKind::Hashiguchi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConnectionKind::Cartan => "cartan",
            ConnectionKind::Berwald => "berwald",
            ConnectionKind::Chern => "chern",
            ConnectionKind::Hashiguchi => "hashiguchi",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for ConnectionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ConnectionKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ConnectionKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown connection `{s}` (cartan, berwald, chern, hashiguchi)"))
    }
}

/// Coefficients of one connection; `h` and `v` have slots `[i, j, k]` for `H^i_jk`,
/// `V^i_jk`.
#[derive(Clone)]
pub struct ConnectionData<S> {
    pub kind: ConnectionKind,
    pub n: usize,
    pub h: TensorField<S>,
    pub v: TensorField<S>,
}

/// Horizontal or vertical direction of differentiation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    H,
    V,
}

fn coeff_slots() -> Vec<Slot> {
    vec![Slot::Up, Slot::Down, Slot::Down]
}

/// Cartan's `H^i_jk = ½ g^{ih}(δ_j g_hk + δ_k g_hj − δ_h g_jk)` and `V^i_jk = g^{ih} C_hjk`.
pub fn cartan_coefficients<S: Scalar>(
    frame: &FrameJets<S>,
) -> Result<(TensorField<S>, TensorField<S>), JetError> {
    let n = frame.n;
    // dg[h][k][j] = δ_j g_hk
    let dg = PiTensor::try_from_fn(n, vec![Slot::Down; 3], |i| {
        frame.delta(frame.g.get(&[i[0], i[1]]), i[2])
    })?;
    let half = S::lit(0.5);
    let h = PiTensor::try_from_fn(n, coeff_slots(), |idx| -> Result<Jet<S>, JetError> {
        let (i, j, k) = (idx[0], idx[1], idx[2]);
        let s = sum_jets((0..n).map(|h| {
            let inner = &(dg.get(&[h, k, j]) + dg.get(&[h, j, k])) - dg.get(&[j, k, h]);
            frame.g_inv.get(&[i, h]) * &inner
        }))
        .expect("n > 0");
        Ok(s * half)
    })?;
    let v = PiTensor::from_fn(n, coeff_slots(), |idx| {
        sum_jets((0..n).map(|h| frame.g_inv.get(&[idx[0], h]) * frame.c.get(&[h, idx[1], idx[2]])))
            .expect("n > 0")
    });
    Ok((h, v))
}

/// Berwald's `H^i_jk = ∂²G^i/∂y^j∂y^k`.
pub fn berwald_coefficients<S: Scalar>(frame: &FrameJets<S>) -> TensorField<S> {
    PiTensor::from_fn(frame.n, coeff_slots(), |i| frame.dn(i[0], i[1], i[2]).clone())
}

fn zero_coefficients<S: Scalar>(frame: &FrameJets<S>) -> TensorField<S> {
    let z = frame.c.get(&[0, 0, 0]).zero_like();
    PiTensor::from_fn(frame.n, coeff_slots(), |_| z.clone())
}

impl<S: Scalar> ConnectionData<S> {
    pub fn new(frame: &FrameJets<S>, kind: ConnectionKind) -> Result<Self, JetError> {
        let (h, v) = match kind {
            ConnectionKind::Cartan => cartan_coefficients(frame)?,
            ConnectionKind::Berwald => (berwald_coefficients(frame), zero_coefficients(frame)),
            ConnectionKind::Chern => (cartan_coefficients(frame)?.0, zero_coefficients(frame)),
            ConnectionKind::Hashiguchi => (berwald_coefficients(frame), cartan_coefficients(frame)?.1),
        };
        Ok(ConnectionData {
            kind,
            n: frame.n,
            h,
            v,
        })
    }

    /// All four, sharing the Cartan computation.
    pub fn all(frame: &FrameJets<S>) -> Result<[Self; 4], JetError> {
        let (ch, cv) = cartan_coefficients(frame)?;
        let bh = berwald_coefficients(frame);
        let z = zero_coefficients(frame);
        let mk = |kind, h: &TensorField<S>, v: &TensorField<S>| ConnectionData {
            kind,
            n: frame.n,
            h: h.clone(),
            v: v.clone(),
        };
        Ok([
            mk(ConnectionKind::Cartan, &ch, &cv),
            mk(ConnectionKind::Berwald, &bh, &z),
            mk(ConnectionKind::Chern, &ch, &z),
            mk(ConnectionKind::Hashiguchi, &bh, &cv),
        ])
    }

    pub fn coefficients(&self, dir: Direction) -> &TensorField<S> {
        match dir {
            Direction::H => &self.h,
            Direction::V => &self.v,
        }
    }
}

/// Covariant derivative of a jet tensor field in all directions of one kind. The
/// direction index is appended as a new last `Down` slot:
///
/// `(D_{δ_k} A)^{i}_{ab} = δ_k A^i_ab + H^i_mk A^m_ab − H^m_ak A^i_mb − H^m_bk A^i_am`.
pub fn cov_deriv<S: Scalar>(
    field: &TensorField<S>,
    conn: &ConnectionData<S>,
    frame: &FrameJets<S>,
    dir: Direction,
) -> Result<TensorField<S>, JetError> {
    let n = field.n();
    let rank = field.rank();
    let coef = conn.coefficients(dir);
    let slots = field.slots().to_vec();
    let mut out_slots = slots.clone();
    out_slots.push(Slot::Down);
    let mut scratch = vec![0usize; rank];
    PiTensor::try_from_fn(n, out_slots, |idx| {
        let k = idx[rank];
        let base = &idx[..rank];
        let comp = field.get(base);
        let mut acc = match dir {
            Direction::H => frame.delta(comp, k)?,
            Direction::V => comp.dy(k)?,
        };
        for (s, slot) in slots.iter().enumerate() {
            if *slot == Slot::Inert {
                continue;
            }
            scratch.copy_from_slice(base);
            let a = base[s];
            for m in 0..n {
                scratch[s] = m;
                let other = field.get(&scratch);
                match slot {
                    Slot::Up => {
                        let c = coef.get(&[a, m, k]);
                        if !c.is_zero() {
                            acc = &acc + &(c * other);
                        }
                    }
                    Slot::Down => {
                        let c = coef.get(&[m, a, k]);
                        if !c.is_zero() {
                            acc = &acc - &(c * other);
                        }
                    }
                    Slot::Inert => unreachable!(),
                }
            }
        }
        Ok(acc)
    })
}

/// Horizontal covariant derivative `D_{βX}` in every direction.
pub fn h_cov_deriv<S: Scalar>(
    field: &TensorField<S>,
    conn: &ConnectionData<S>,
    frame: &FrameJets<S>,
) -> Result<TensorField<S>, JetError> {
    cov_deriv(field, conn, frame, Direction::H)
}

/// Vertical covariant derivative `D_{γX}` in every direction.
pub fn v_cov_deriv<S: Scalar>(
    field: &TensorField<S>,
    conn: &ConnectionData<S>,
    frame: &FrameJets<S>,
) -> Result<TensorField<S>, JetError> {
    cov_deriv(field, conn, frame, Direction::V)
}

/// A vector field on `TM` in coordinates: `X = a^i ∂_{x^i} + b^i ∂_{y^i}`.
#[derive(Clone)]
pub struct LiftField<S> {
    pub a: Vec<Jet<S>>,
    pub b: Vec<Jet<S>>,
}

impl<S: Scalar> LiftField<S> {
    /// `δ_k`
    pub fn horizontal(frame: &FrameJets<S>, k: usize) -> Self {
        let z = frame.nl(0, 0).zero_like();
        let one = z.lift(S::one());
        LiftField {
            a: (0..frame.n)
                .map(|i| if i == k { one.clone() } else { z.clone() })
                .collect(),
            b: (0..frame.n).map(|m| -frame.nl(m, k)).collect(),
        }
    }

    /// `∂̇_k`
    pub fn vertical(frame: &FrameJets<S>, k: usize) -> Self {
        let z = frame.nl(0, 0).zero_like();
        let one = z.lift(S::one());
        LiftField {
            a: vec![z.clone(); frame.n],
            b: (0..frame.n)
                .map(|i| if i == k { one.clone() } else { z.clone() })
                .collect(),
        }
    }

    /// `X f`, chaining plain partial derivatives.
    pub fn apply(&self, f: &Jet<S>) -> Result<Jet<S>, JetError> {
        let n = self.a.len();
        let mut terms = Vec::with_capacity(2 * n);
        for i in 0..n {
            if !self.a[i].is_zero() {
                terms.push(&self.a[i] * &f.dx(i)?);
            }
            if !self.b[i].is_zero() {
                terms.push(&self.b[i] * &f.dy(i)?);
            }
        }
        Ok(sum_jets(terms.into_iter()).unwrap_or_else(|| f.zero_like().truncate(f.order().saturating_sub(1))))
    }

    /// Lie bracket `[X, Y]`.
    pub fn bracket(&self, other: &Self) -> Result<Self, JetError> {
        let comp = |xs: &[Jet<S>], ys: &[Jet<S>]| -> Result<Vec<Jet<S>>, JetError> {
            xs.iter()
                .zip(ys)
                .map(|(xc, yc)| Ok(&self.apply(yc)? - &other.apply(xc)?))
                .collect()
        };
        Ok(LiftField {
            a: comp(&self.a, &other.a)?,
            b: comp(&self.b, &other.b)?,
        })
    }

    /// `ρX`: the horizontal components in the adapted frame.
    pub fn rho(&self) -> &[Jet<S>] {
        &self.a
    }

    /// `KX`: the vertical components in the adapted frame, `b^i + N^i_m a^m`.
    pub fn vertical_part(&self, frame: &FrameJets<S>) -> Vec<Jet<S>> {
        (0..frame.n)
            .map(|i| {
                let mut acc = self.b[i].clone();
                for m in 0..frame.n {
                    if !self.a[m].is_zero() {
                        acc = &acc + &(frame.nl(i, m) * &self.a[m]);
                    }
                }
                acc
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ChartPoint, Sampler};
    use crate::metric::{builtin_metric, Family};
    use serde_json::Map;

    fn frame(family: Family, n: usize, seed: u64) -> FrameJets<f64> {
        let spec = builtin_metric(family, n, Map::new()).unwrap();
        let p: ChartPoint<f64> = Sampler::for_spec(&spec, seed).next_point();
        FrameJets::new(&spec, &p, 6).unwrap()
    }

    #[test]
    fn kinds_parse_and_print() {
        for k in ConnectionKind::ALL {
            assert_eq!(k.name().parse::<ConnectionKind>().unwrap(), k);
        }
        assert!("levi".parse::<ConnectionKind>().is_err());
    }

    #[test]
    fn cartan_is_metric_and_symmetric() {
        let f = frame(Family::Randers, 3, 11);
        let c = ConnectionData::new(&f, ConnectionKind::Cartan).unwrap();
        for dir in [Direction::H, Direction::V] {
            let dg = cov_deriv(&f.g, &c, &f, dir).unwrap().values();
            assert!(dg.max_abs() < 1e-12, "{dir:?}");
        }
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    assert_eq!(c.h.get(&[i, j, k]), c.h.get(&[i, k, j]));
                    assert_eq!(c.v.get(&[i, j, k]), c.v.get(&[i, k, j]));
                }
            }
        }
    }

    #[test]
    fn berwald_vertical_derivative_is_partial() {
        let f = frame(Family::Randers, 2, 3);
        let b = ConnectionData::new(&f, ConnectionKind::Berwald).unwrap();
        let d = v_cov_deriv(&f.g, &b, &f).unwrap();
        for i in d.indices() {
            let expect = f.g.get(&i[..2]).dy(i[2]).unwrap();
            assert_eq!(*d.get(&i), expect);
        }
    }

    #[test]
    fn product_rule_on_vector_covector() {
        let f = frame(Family::Randers, 2, 21);
        let conn = ConnectionData::new(&f, ConnectionKind::Cartan).unwrap();
        let x = &f.vars;
        let a = PiTensor::from_fn(2, vec![Slot::Up], |i| x[i[0]].sin() + &x[2] * &x[3]);
        let w = PiTensor::from_fn(2, vec![Slot::Down], |i| x[1 - i[0]].exp() * x[2 + i[0]].clone());
        let prod = PiTensor::from_fn(2, vec![Slot::Up, Slot::Down], |i| a.get(&[i[0]]) * w.get(&[i[1]]));
        let contracted =
            PiTensor::from_fn(2, vec![], |_| a.get(&[0]) * w.get(&[0]) + a.get(&[1]) * w.get(&[1]));
        for dir in [Direction::H, Direction::V] {
            let dp = cov_deriv(&prod, &conn, &f, dir).unwrap().values();
            let da = cov_deriv(&a, &conn, &f, dir).unwrap().values();
            let dw = cov_deriv(&w, &conn, &f, dir).unwrap().values();
            let (av, wv) = (a.values(), w.values());
            for i in dp.indices() {
                let expect = da.get(&[i[0], i[2]]) * wv.get(&[i[1]]) + av.get(&[i[0]]) * dw.get(&[i[1], i[2]]);
                assert!((dp.get(&i) - expect).abs() < 1e-12);
            }
            // contraction commutes with D
            let dc = cov_deriv(&contracted, &conn, &f, dir).unwrap().values();
            for k in 0..2 {
                let trace = dp.get(&[0, 0, k]) + dp.get(&[1, 1, k]);
                assert!((dc.get(&[k]) - trace).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn horizontal_brackets_are_vertical() {
        let f = frame(Family::Randers, 2, 8);
        let b = LiftField::horizontal(&f, 0)
            .bracket(&LiftField::horizontal(&f, 1))
            .unwrap();
        assert!(b.rho().iter().all(|j| j.is_zero()));
        let vv = LiftField::vertical(&f, 0)
            .bracket(&LiftField::vertical(&f, 1))
            .unwrap();
        assert!(vv.a.iter().chain(&vv.b).all(|j| j.is_zero()));
    }
}
