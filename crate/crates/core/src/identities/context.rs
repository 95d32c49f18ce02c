//! Everything one point needs to evaluate identities: the four connections with their
//! torsions and curvatures, and memoized covariant derivatives.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::connections::{cov_deriv, ConnectionData, ConnectionKind, Direction, LiftField};
use crate::curvature::{barthel_curvature, curvatures, h_tensor, lower, torsions, CurvatureSet, TorsionSet};
use crate::geometry::{ChartPoint, FrameData, FrameJets, GeometryError};
use crate::jets::JetError;
use crate::metric::{Family, MetricSpec};
use crate::scalar::Scalar;
use crate::tensor::{PiTensor, Slot, TensorField};

/// Coarse properties of the metric used by applicability guards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MetricFlags {
    pub locally_minkowski: bool,
    pub riemannian: bool,
    pub round_sphere: bool,
}

impl MetricFlags {
    pub fn of(spec: &MetricSpec) -> Self {
        MetricFlags {
            locally_minkowski: spec.is_locally_minkowski(),
            riemannian: spec.is_riemannian(),
            round_sphere: spec.family() == Some(Family::RiemannianSphere),
        }
    }
}

/// Values of the torsions of one connection; `*_low` are lowered with `g` in the
/// output slot.
#[derive(Clone)]
pub struct TorsionValues<S> {
    pub q: PiTensor<S>,
    pub t: PiTensor<S>,
    pub rhat: PiTensor<S>,
    pub phat: PiTensor<S>,
    pub shat: PiTensor<S>,
    pub t_low: PiTensor<S>,
    pub phat_low: PiTensor<S>,
}

#[derive(Clone)]
pub struct CurvatureValues<S> {
    pub r: PiTensor<S>,
    pub p: PiTensor<S>,
    pub s: PiTensor<S>,
    pub r_low: PiTensor<S>,
    pub p_low: PiTensor<S>,
    pub s_low: PiTensor<S>,
}

pub struct Bundle<S> {
    pub data: ConnectionData<S>,
    pub tors: TorsionSet<S>,
    pub tv: TorsionValues<S>,
    curv: OnceLock<Result<(CurvatureSet<S>, CurvatureValues<S>), JetError>>,
}

/// `[A, B]` of two adapted basis fields split as `ρ^m δ_m + κ^m ∂̇_m`.
#[derive(Clone, Debug)]
pub struct BracketValue<S> {
    pub rho: Vec<S>,
    pub kappa: Vec<S>,
}

/// Jet tensor fields that can be covariantly differentiated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    G,
    Q(ConnectionKind),
    T(ConnectionKind),
    Rhat,
    Phat(ConnectionKind),
    R(ConnectionKind),
    P(ConnectionKind),
    S(ConnectionKind),
    /// Cartan's `g(T(X,Y),Z)`.
    TLow,
    /// Cartan's `g(P̂(X,Y),Z)`.
    PhatLow,
    /// `H(X) = R̂(η, X)`.
    HTensor,
    /// `D_B g` for a fixed basis field `B` of the given kind; the `B` slot is inert.
    DgFixed(ConnectionKind, Direction),
    /// `D_{e_b} ē_j` as the vector field `[j, b, i]` with `j, b` inert.
    Basis(ConnectionKind, Direction),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Key {
    by: ConnectionKind,
    op: Op,
    dir: Direction,
    inert: bool,
}

fn lower_values<S: Scalar>(t: &PiTensor<S>, g: &PiTensor<S>) -> PiTensor<S> {
    let n = t.n();
    let r = t.rank();
    let mut slots = t.slots().to_vec();
    slots[r - 1] = Slot::Down;
    let mut scratch = vec![0; r];
    PiTensor::from_fn(n, slots, |idx| {
        scratch.copy_from_slice(idx);
        let mut acc = S::zero();
        for m in 0..n {
            scratch[r - 1] = m;
            acc = acc + *t.get(&scratch) * *g.get(&[m, idx[r - 1]]);
        }
        acc
    })
}

pub struct PointContext<S: Scalar> {
    pub n: usize,
    pub flags: MetricFlags,
    pub frame: FrameJets<S>,
    pub fd: FrameData<S>,
    bundles: Vec<Bundle<S>>,
    brackets: OnceLock<Result<Vec<BracketValue<S>>, JetError>>,
    barthel: OnceLock<Result<PiTensor<S>, JetError>>,
    memo: Mutex<HashMap<Key, Arc<PiTensor<S>>>>,
}

impl<S: Scalar> PointContext<S> {
    pub fn new(spec: &MetricSpec, point: &ChartPoint<S>, order: usize) -> Result<Self, GeometryError> {
        let frame = FrameJets::new(spec, point, order)?;
        let fd = frame.values();
        let conns = ConnectionData::all(&frame)?;
        let mut bundles = Vec::with_capacity(4);
        for data in conns {
            let tors = torsions(&data, &frame)?;
            let tv = TorsionValues {
                q: tors.q.values(),
                t: tors.t.values(),
                rhat: tors.rhat.values(),
                phat: tors.phat.values(),
                shat: tors.shat.values(),
                t_low: lower_values(&tors.t.values(), &fd.g),
                phat_low: lower_values(&tors.phat.values(), &fd.g),
            };
            bundles.push(Bundle {
                data,
                tors,
                tv,
                curv: OnceLock::new(),
            });
        }
        Ok(PointContext {
            n: spec.dim,
            flags: MetricFlags::of(spec),
            frame,
            fd,
            bundles,
            brackets: OnceLock::new(),
            barthel: OnceLock::new(),
            memo: Mutex::new(HashMap::new()),
        })
    }

    pub fn bundle(&self, k: ConnectionKind) -> &Bundle<S> {
        &self.bundles[k.index()]
    }

    pub fn tv(&self, k: ConnectionKind) -> &TorsionValues<S> {
        &self.bundle(k).tv
    }

    /// Cartan's torsion values, the reference tensors of the comparison formulas.
    pub fn cartan(&self) -> &TorsionValues<S> {
        self.tv(ConnectionKind::Cartan)
    }

    fn curv_pair(&self, k: ConnectionKind) -> Result<&(CurvatureSet<S>, CurvatureValues<S>), JetError> {
        let b = self.bundle(k);
        b.curv
            .get_or_init(|| {
                let cs = curvatures(&b.data, &self.frame, &b.tors.rhat)?;
                let g = &self.fd.g;
                let (r, p, s) = (cs.r.values(), cs.p.values(), cs.s.values());
                let cv = CurvatureValues {
                    r_low: lower_values(&r, g),
                    p_low: lower_values(&p, g),
                    s_low: lower_values(&s, g),
                    r,
                    p,
                    s,
                };
                Ok((cs, cv))
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn cv(&self, k: ConnectionKind) -> Result<&CurvatureValues<S>, JetError> {
        Ok(&self.curv_pair(k)?.1)
    }

    pub fn curvature_jets(&self, k: ConnectionKind) -> Result<&CurvatureSet<S>, JetError> {
        Ok(&self.curv_pair(k)?.0)
    }

    pub fn g(&self) -> &PiTensor<S> {
        &self.fd.g
    }

    pub fn y(&self) -> &[S] {
        &self.fd.point.y
    }

    /// `g(u, v)`
    pub fn inner(&self, u: &[S], v: &[S]) -> S {
        let mut acc = S::zero();
        for a in 0..self.n {
            for b in 0..self.n {
                acc = acc + u[a] * *self.fd.g.get(&[a, b]) * v[b];
            }
        }
        acc
    }

    /// Barthel curvature from a direct bracket, `[k][l][i]`.
    pub fn barthel_direct(&self) -> Result<&PiTensor<S>, JetError> {
        self.barthel
            .get_or_init(|| Ok(barthel_curvature(&self.frame)?.values()))
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Lie brackets of the `2n` adapted basis fields, indexed `a · 2n + b`; index
    /// `a < n` is `δ_a`, otherwise `∂̇_{a−n}`.
    pub fn brackets(&self) -> Result<&[BracketValue<S>], JetError> {
        self.brackets
            .get_or_init(|| {
                let n = self.n;
                let lifts: Vec<LiftField<S>> = (0..2 * n)
                    .map(|a| {
                        if a < n {
                            LiftField::horizontal(&self.frame, a)
                        } else {
                            LiftField::vertical(&self.frame, a - n)
                        }
                    })
                    .collect();
                let mut out = Vec::with_capacity(4 * n * n);
                for a in &lifts {
                    for b in &lifts {
                        let br = a.bracket(b)?;
                        out.push(BracketValue {
                            rho: br.rho().iter().map(|j| j.value()).collect(),
                            kappa: br.vertical_part(&self.frame).iter().map(|j| j.value()).collect(),
                        });
                    }
                }
                Ok(out)
            })
            .as_ref()
            .map(|v| v.as_slice())
            .map_err(Clone::clone)
    }

    pub fn bracket(&self, a: usize, b: usize) -> Result<&BracketValue<S>, JetError> {
        Ok(&self.brackets()?[a * 2 * self.n + b])
    }

    fn op_jets(&self, op: Op) -> Result<TensorField<S>, JetError> {
        let cartan = self.bundle(ConnectionKind::Cartan);
        Ok(match op {
            Op::G => self.frame.g.clone(),
            Op::Q(k) => self.bundle(k).tors.q.clone(),
            Op::T(k) => self.bundle(k).tors.t.clone(),
            Op::Rhat => cartan.tors.rhat.clone(),
            Op::Phat(k) => self.bundle(k).tors.phat.clone(),
            Op::R(k) => self.curvature_jets(k)?.r.clone(),
            Op::P(k) => self.curvature_jets(k)?.p.clone(),
            Op::S(k) => self.curvature_jets(k)?.s.clone(),
            Op::TLow => lower(&cartan.tors.t, &self.frame.g, 2),
            Op::PhatLow => lower(&cartan.tors.phat, &self.frame.g, 2),
            Op::HTensor => h_tensor(&cartan.tors.rhat, &self.frame),
            Op::DgFixed(k, dir) => {
                let d = cov_deriv(&self.frame.g, &self.bundle(k).data, &self.frame, dir)?;
                d.with_slots(vec![Slot::Down, Slot::Down, Slot::Inert])
            }
            Op::Basis(k, dir) => {
                let c = self.bundle(k).data.coefficients(dir);
                PiTensor::from_fn(self.n, vec![Slot::Inert, Slot::Inert, Slot::Up], |i| {
                    c.get(&[i[2], i[0], i[1]]).clone()
                })
            }
        })
    }

    fn derive(&self, key: Key) -> Result<Arc<PiTensor<S>>, JetError> {
        if let Some(v) = self.memo.lock().expect("memo lock").get(&key) {
            return Ok(v.clone());
        }
        let mut field = self.op_jets(key.op)?;
        if key.inert {
            let slots = field
                .slots()
                .iter()
                .map(|s| if *s == Slot::Down { Slot::Inert } else { *s })
                .collect();
            field = field.with_slots(slots);
        }
        let d = cov_deriv(&field, &self.bundle(key.by).data, &self.frame, key.dir)?;
        let v = Arc::new(d.values());
        self.memo.lock().expect("memo lock").insert(key, v.clone());
        Ok(v)
    }

    /// Values of `D_{e_k} A` for the connection `by`; the direction is the last slot.
    pub fn d(&self, by: ConnectionKind, op: Op, dir: Direction) -> Result<Arc<PiTensor<S>>, JetError> {
        self.derive(Key {
            by,
            op,
            dir,
            inert: false,
        })
    }

    /// Like [`Self::d`], treating every lower slot as a fixed basis label, so the result is
    /// the derivative of the vector field `A(e_a, e_b, ...)`.
    pub fn d_fixed(&self, by: ConnectionKind, op: Op, dir: Direction) -> Result<Arc<PiTensor<S>>, JetError> {
        self.derive(Key {
            by,
            op,
            dir,
            inert: true,
        })
    }
}
