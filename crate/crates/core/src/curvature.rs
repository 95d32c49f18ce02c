//! Torsion and curvature tensors of a regular connection.
//!
//! Vector-valued tensors keep their output slot last: `T[x][y][i] = T(e_x, e_y)^i`,
//! `R[k][l][j][i] = (R(e_k, e_l) e_j)^i`. For `P̂` and `P` the first argument is the
//! horizontal one.

use crate::connections::{ConnectionData, LiftField};
use crate::geometry::FrameJets;
use crate::jets::{sum_jets, Jet, JetError};
use crate::scalar::Scalar;
use crate::tensor::{PiTensor, Slot, TensorField};

/// The five torsion tensors of a regular connection.
#[derive(Clone)]
pub struct TorsionSet<S> {
    /// (h)h-torsion `Q(X,Y) = D_{βX}Y − D_{βY}X − ρ[βX,βY]`
    pub q: TensorField<S>,
    /// (h)hv-torsion `T(X,Y) = D_{γX}Y − D_{βY}X − ρ[γX,βY]`
    pub t: TensorField<S>,
    /// (v)h-torsion `R̂(X,Y) = −K[βX,βY]`, up to sign convention `R̂ = R(X,Y)η`
    pub rhat: TensorField<S>,
    /// (v)hv-torsion `P̂(X,Y)`, horizontal argument first
    pub phat: TensorField<S>,
    /// (v)v-torsion `Ŝ(X,Y)`
    pub shat: TensorField<S>,
}

/// The three curvature tensors `R` (hh), `P` (hv), `S` (vv).
#[derive(Clone)]
pub struct CurvatureSet<S> {
    pub r: TensorField<S>,
    pub p: TensorField<S>,
    pub s: TensorField<S>,
}

fn vec2() -> Vec<Slot> {
    vec![Slot::Down, Slot::Down, Slot::Up]
}

fn vec3() -> Vec<Slot> {
    vec![Slot::Down, Slot::Down, Slot::Down, Slot::Up]
}

fn sum<S: Scalar>(terms: Vec<Jet<S>>) -> Jet<S> {
    sum_jets(terms.into_iter()).expect("non-empty sum")
}

/// `R̂^i_kl = δ_l N^i_k − δ_k N^i_l`, shared by all four connections.
pub fn rhat<S: Scalar>(frame: &FrameJets<S>) -> Result<TensorField<S>, JetError> {
    PiTensor::try_from_fn(frame.n, vec2(), |i| {
        let (k, l, a) = (i[0], i[1], i[2]);
        Ok(&frame.delta_n(a, k, l)? - &frame.delta_n(a, l, k)?)
    })
}

pub fn torsions<S: Scalar>(
    conn: &ConnectionData<S>,
    frame: &FrameJets<S>,
) -> Result<TorsionSet<S>, JetError> {
    let n = frame.n;
    let (h, v) = (&conn.h, &conn.v);
    let q = PiTensor::from_fn(n, vec2(), |i| h.get(&[i[2], i[1], i[0]]) - h.get(&[i[2], i[0], i[1]]));
    let t = PiTensor::from_fn(n, vec2(), |i| v.get(&[i[2], i[1], i[0]]).clone());
    let phat = PiTensor::from_fn(n, vec2(), |i| {
        frame.dn(i[2], i[0], i[1]) - h.get(&[i[2], i[1], i[0]])
    });
    let shat = PiTensor::from_fn(n, vec2(), |i| v.get(&[i[2], i[0], i[1]]) - v.get(&[i[2], i[1], i[0]]));
    Ok(TorsionSet {
        q,
        t,
        rhat: rhat(frame)?,
        phat,
        shat,
    })
}

/// Curvatures from `K(X,Y)Z = −D_X D_Y Z + D_Y D_X Z + D_{[X,Y]} Z` on the adapted frame.
pub fn curvatures<S: Scalar>(
    conn: &ConnectionData<S>,
    frame: &FrameJets<S>,
    rhat: &TensorField<S>,
) -> Result<CurvatureSet<S>, JetError> {
    let n = frame.n;
    let (h, v) = (&conn.h, &conn.v);
    let hc = |i: usize, j: usize, k: usize| h.get(&[i, j, k]);
    let vc = |i: usize, j: usize, k: usize| v.get(&[i, j, k]);
    let v_zero = v.is_exactly_zero();

    // δ_k H^i_jl, ∂̇_l H^i_jk, δ_k V^i_jl, ∂̇_k V^i_jl, all with the direction last
    let dh_h = PiTensor::try_from_fn(n, vec![Slot::Up, Slot::Down, Slot::Down, Slot::Down], |i| {
        frame.delta(h.get(&i[..3]), i[3])
    })?;
    let dh_v = PiTensor::try_from_fn(n, vec![Slot::Up, Slot::Down, Slot::Down, Slot::Down], |i| {
        h.get(&i[..3]).dy(i[3])
    })?;
    let (dv_h, dv_v) = if v_zero {
        (None, None)
    } else {
        (
            Some(PiTensor::try_from_fn(n, vec![Slot::Up, Slot::Down, Slot::Down, Slot::Down], |i| {
                frame.delta(v.get(&i[..3]), i[3])
            })?),
            Some(PiTensor::try_from_fn(n, vec![Slot::Up, Slot::Down, Slot::Down, Slot::Down], |i| {
                v.get(&i[..3]).dy(i[3])
            })?),
        )
    };

    let r = PiTensor::from_fn(n, vec3(), |idx| {
        let (k, l, j, i) = (idx[0], idx[1], idx[2], idx[3]);
        let mut terms = vec![
            dh_h.get(&[i, j, k, l]) - dh_h.get(&[i, j, l, k]),
        ];
        for m in 0..n {
            terms.push(hc(m, j, k) * hc(i, m, l) - hc(m, j, l) * hc(i, m, k));
        }
        if !v_zero {
            for a in 0..n {
                terms.push(rhat.get(&[k, l, a]) * vc(i, j, a));
            }
        }
        sum(terms)
    });

    let p = PiTensor::from_fn(n, vec3(), |idx| {
        let (k, l, j, i) = (idx[0], idx[1], idx[2], idx[3]);
        let mut terms = vec![dh_v.get(&[i, j, k, l]).clone()];
        if let Some(dv_h) = &dv_h {
            terms.push(-dv_h.get(&[i, j, l, k]));
            for m in 0..n {
                terms.push(hc(m, j, k) * vc(i, m, l) - vc(m, j, l) * hc(i, m, k));
            }
            for a in 0..n {
                terms.push(frame.dn(a, k, l) * vc(i, j, a));
            }
        }
        sum(terms)
    });

    let s = match &dv_v {
        None => {
            let z = dh_v.get(&[0, 0, 0, 0]).zero_like();
            PiTensor::from_fn(n, vec3(), |_| z.clone())
        }
        Some(dv_v) => PiTensor::from_fn(n, vec3(), |idx| {
            let (k, l, j, i) = (idx[0], idx[1], idx[2], idx[3]);
            let mut terms = vec![dv_v.get(&[i, j, k, l]) - dv_v.get(&[i, j, l, k])];
            for m in 0..n {
                terms.push(vc(m, j, k) * vc(i, m, l) - vc(m, j, l) * vc(i, m, k));
            }
            sum(terms)
        }),
    };
    Ok(CurvatureSet { r, p, s })
}

/// `H(X) = R̂(η, X)`.
pub fn h_tensor<S: Scalar>(rhat: &TensorField<S>, frame: &FrameJets<S>) -> TensorField<S> {
    let n = frame.n;
    PiTensor::from_fn(n, vec![Slot::Down, Slot::Up], |i| {
        sum((0..n).map(|k| frame.y_jet(k) * rhat.get(&[k, i[0], i[1]])).collect())
    })
}

/// Barthel curvature `𝕽(δ_k, δ_l) = −K[δ_k, δ_l]` from a direct Lie bracket; stored as
/// `[k][l][i]`.
pub fn barthel_curvature<S: Scalar>(frame: &FrameJets<S>) -> Result<TensorField<S>, JetError> {
    let n = frame.n;
    let lifts: Vec<_> = (0..n).map(|k| LiftField::horizontal(frame, k)).collect();
    let mut data = Vec::with_capacity(n * n * n);
    for k in 0..n {
        for l in 0..n {
            let br = lifts[k].bracket(&lifts[l])?;
            for c in br.vertical_part(frame) {
                data.push(-c);
            }
        }
    }
    Ok(PiTensor::new(n, vec2(), data))
}

/// Lowers the `Up` slot at `slot` with `g`, leaving a `Down` slot in place.
pub fn lower<S: Scalar>(t: &TensorField<S>, g: &TensorField<S>, slot: usize) -> TensorField<S> {
    transvect(t, g, slot, Slot::Down)
}

/// Raises the `Down` slot at `slot` with `g⁻¹`.
pub fn raise<S: Scalar>(t: &TensorField<S>, g_inv: &TensorField<S>, slot: usize) -> TensorField<S> {
    transvect(t, g_inv, slot, Slot::Up)
}

fn transvect<S: Scalar>(t: &TensorField<S>, m: &TensorField<S>, slot: usize, kind: Slot) -> TensorField<S> {
    let n = t.n();
    let mut slots = t.slots().to_vec();
    slots[slot] = kind;
    let mut scratch = vec![0; t.rank()];
    PiTensor::from_fn(n, slots, |idx| {
        scratch.copy_from_slice(idx);
        sum((0..n)
            .map(|a| {
                scratch[slot] = a;
                t.get(&scratch) * m.get(&[a, idx[slot]])
            })
            .collect())
    })
}

/// Trace over an `Up` and a `Down` slot.
pub fn contract<S: Scalar>(t: &TensorField<S>, up: usize, down: usize) -> TensorField<S> {
    assert!(up != down);
    let n = t.n();
    let slots: Vec<Slot> = t
        .slots()
        .iter()
        .enumerate()
        .filter(|(s, _)| *s != up && *s != down)
        .map(|(_, k)| *k)
        .collect();
    let mut full = vec![0; t.rank()];
    PiTensor::from_fn(n, slots, |idx| {
        let mut it = idx.iter();
        for (s, f) in full.iter_mut().enumerate() {
            if s != up && s != down {
                *f = *it.next().expect("index");
            }
        }
        sum((0..n)
            .map(|a| {
                full[up] = a;
                full[down] = a;
                t.get(&full).clone()
            })
            .collect())
    })
}

/// Contracts the `Down` slot `slot` with the canonical section `η = y^i ē_i`.
pub fn contract_eta<S: Scalar>(t: &TensorField<S>, frame: &FrameJets<S>, slot: usize) -> TensorField<S> {
    let n = t.n();
    let slots: Vec<Slot> = t
        .slots()
        .iter()
        .enumerate()
        .filter(|(s, _)| *s != slot)
        .map(|(_, k)| *k)
        .collect();
    let mut full = vec![0; t.rank()];
    PiTensor::from_fn(n, slots, |idx| {
        let mut it = idx.iter();
        for (s, f) in full.iter_mut().enumerate() {
            if s != slot {
                *f = *it.next().expect("index");
            }
        }
        sum((0..n)
            .map(|a| {
                full[slot] = a;
                frame.y_jet(a) * t.get(&full)
            })
            .collect())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connections::ConnectionKind;
    use crate::geometry::{ChartPoint, Sampler};
    use crate::metric::{builtin_metric, Family};
    use serde_json::Map;

    fn setup(family: Family, n: usize, seed: u64) -> (FrameJets<f64>, [ConnectionData<f64>; 4]) {
        let spec = builtin_metric(family, n, Map::new()).unwrap();
        let p: ChartPoint<f64> = Sampler::for_spec(&spec, seed).next_point();
        let f = FrameJets::new(&spec, &p, 6).unwrap();
        let c = ConnectionData::all(&f).unwrap();
        (f, c)
    }

    #[test]
    fn structural_zeros_are_exact() {
        let (f, conns) = setup(Family::Randers, 3, 4);
        for c in &conns {
            let t = torsions(c, &f).unwrap();
            assert!(t.q.is_exactly_zero(), "{}", c.kind);
            assert!(t.shat.is_exactly_zero(), "{}", c.kind);
            let cu = curvatures(c, &f, &t.rhat).unwrap();
            match c.kind {
                ConnectionKind::Berwald => {
                    assert!(t.t.is_exactly_zero());
                    assert!(t.phat.is_exactly_zero());
                    assert!(cu.s.is_exactly_zero());
                }
                ConnectionKind::Chern => assert!(cu.s.is_exactly_zero()),
                ConnectionKind::Hashiguchi => assert!(t.phat.is_exactly_zero()),
                ConnectionKind::Cartan => {}
            }
        }
    }

    #[test]
    fn contractions_with_eta() {
        let (f, conns) = setup(Family::Randers, 2, 9);
        for c in &conns {
            let t = torsions(c, &f).unwrap();
            let cu = curvatures(c, &f, &t.rhat).unwrap();
            // R(X,Y)η = R̂(X,Y), P(X,Y)η = P̂(X,Y), S(X,Y)η = Ŝ(X,Y)
            let pairs = [(&cu.r, &t.rhat), (&cu.p, &t.phat), (&cu.s, &t.shat)];
            for (curv, tor) in pairs {
                let ce = contract_eta(curv, &f, 2).values();
                assert!(ce.max_abs_diff(&tor.values()) < 1e-11, "{}", c.kind);
            }
        }
    }

    #[test]
    fn barthel_curvature_matches_rhat() {
        let (f, _) = setup(Family::Randers, 3, 12);
        let direct = barthel_curvature(&f).unwrap().values();
        let r = rhat(&f).unwrap().values();
        let neg = r.map(|v| -v);
        assert!(direct.max_abs_diff(&neg) < 1e-12);
        assert!(r.max_abs() > 1e-4);
    }

    #[test]
    fn lower_then_raise_round_trips() {
        let (f, conns) = setup(Family::Randers, 2, 2);
        let t = torsions(&conns[0], &f).unwrap();
        let low = lower(&t.t, &f.g, 2);
        let back = raise(&low, &f.g_inv, 2).values();
        assert!(back.max_abs_diff(&t.t.values()) < 1e-13);
        let tr = contract(&t.t, 2, 1).values();
        for x in 0..2 {
            let e: f64 = (0..2).map(|a| t.t.values().get(&[x, a, a]).to_owned()).sum();
            assert!((tr.get(&[x]) - e).abs() < 1e-15);
        }
    }
}
