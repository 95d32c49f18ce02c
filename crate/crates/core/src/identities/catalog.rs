//! Identity evaluators. Conventions: `X̄ = e_x`, `Ȳ = e_y`, `Z̄ = e_z`, `W̄ = e_w`;
//! covariant derivatives carry the direction in the last slot; `(D S)(Ȳ,Z̄,W̄)` is the
//! vector `(D S)(Ȳ,Z̄)W̄`; lowered tensors end with the `g`-contracted slot.

use super::context::{Op, PointContext};
use super::{cyclic, interchange, Acc, Evaluator, Guard, IdentityDescriptor, Terms};
use crate::connections::ConnectionKind::{self, Berwald, Cartan, Chern, Hashiguchi};
use crate::connections::Direction::{self, H, V};
use crate::geometry::spray_defect;
use crate::jets::JetError;
use crate::scalar::Scalar;
use crate::tensor::{multi_indices, PiTensor};

type Res = Result<(), JetError>;

macro_rules! ev {
    ($f:ident) => {
        Evaluator {
            f64: $f::<f64>,
            f32: $f::<f32>,
        }
    };
}

fn sm<S: Scalar>(n: usize, f: impl Fn(usize) -> S) -> S {
    (0..n).fold(S::zero(), |acc, m| acc + f(m))
}

fn idx(n: usize, r: usize) -> impl Iterator<Item = Vec<usize>> {
    multi_indices(n, r)
}

/// `Σ_k y^k A[.., k]` over the last slot.
fn eta_last<S: Scalar>(y: &[S], a: &PiTensor<S>, head: &[usize]) -> S {
    let mut i = head.to_vec();
    i.push(0);
    let last = i.len() - 1;
    sm(y.len(), |k| {
        let mut j = i.clone();
        j[last] = k;
        y[k] * a.at(&j)
    })
}

// ---------------------------------------------------------------------------
// Spray and Barthel connection

fn n_spray<S: Scalar>(c: &PointContext<S>, _: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let (d, scale) = spray_defect(&c.frame)?;
    for v in d {
        acc.raw(v, scale);
    }
    Ok(())
}

fn n_homogeneity<S: Scalar>(c: &PointContext<S>, _: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let (n, y, fd) = (c.n, c.y(), &c.fd);
    for i in 0..n {
        acc.add(
            Terms::new()
                .p(sm(n, |j| fd.nl.at(&[i, j]) * y[j]))
                .m(S::lit(2.0) * fd.spray[i]),
        );
        for j in 0..n {
            acc.add(Terms::new().p(sm(n, |k| fd.dn.at(&[i, j, k]) * y[k])).m(fd.nl.at(&[i, j])));
        }
    }
    Ok(())
}

fn n_symmetric<S: Scalar>(c: &PointContext<S>, _: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let n = c.n;
    for i in idx(n, 3) {
        let a = c.frame.nl(i[0], i[1]).dy(i[2])?.value();
        let b = c.frame.nl(i[0], i[2]).dy(i[1])?.value();
        acc.eq(a, b);
    }
    Ok(())
}

fn n_conservative<S: Scalar>(c: &PointContext<S>, _: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let (n, f) = (c.n, &c.frame);
    for k in 0..n {
        let dx = f.l.dx(k)?.value();
        let mut t = Terms::new().p(dx);
        for m in 0..n {
            t = t.m(f.nl(m, k).value() * f.l.dy(m)?.value());
        }
        acc.add(t);
    }
    Ok(())
}

fn n_deflection<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let (n, y) = (c.n, c.y());
    let h = &c.bundle(k).data.h;
    for i in idx(n, 2) {
        let hy = sm(n, |j| h.get(&[i[0], j, i[1]]).value() * y[j]);
        acc.eq(hy, c.fd.nl.at(&[i[0], i[1]]));
    }
    Ok(())
}

fn n_vertical<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let (n, y) = (c.n, c.y());
    let v = &c.bundle(k).data.v;
    for i in idx(n, 2) {
        acc.zero(sm(n, |j| v.get(&[i[0], j, i[1]]).value() * y[j]));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// General regular connections

fn g0_a<S: Scalar>(c: &PointContext<S>, kind: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let n = c.n;
    let b = c.bundle(kind);
    let (h, tv) = (b.data.h.values(), &b.tv);
    for kl in idx(n, 2) {
        let (k, l) = (kl[0], kl[1]);
        let br = c.bracket(k, l)?;
        for i in 0..n {
            acc.add(
                Terms::new()
                    .p(br.rho[i])
                    .m(h.at(&[i, l, k]))
                    .p(h.at(&[i, k, l]))
                    .p(tv.q.at(&[k, l, i])),
            );
            acc.eq(br.kappa[i], tv.rhat.at(&[k, l, i]));
        }
    }
    Ok(())
}

fn g0_b<S: Scalar>(c: &PointContext<S>, kind: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let n = c.n;
    let b = c.bundle(kind);
    let (h, v, tv) = (b.data.h.values(), b.data.v.values(), &b.tv);
    for ab in idx(n, 2) {
        let (a, bb) = (ab[0], ab[1]);
        let br = c.bracket(n + a, bb)?;
        for i in 0..n {
            acc.add(
                Terms::new()
                    .p(br.kappa[i])
                    .p(tv.phat.at(&[bb, a, i]))
                    .p(h.at(&[i, a, bb])),
            );
            acc.add(Terms::new().p(br.rho[i]).m(v.at(&[i, bb, a])).p(tv.t.at(&[a, bb, i])));
        }
    }
    Ok(())
}

fn g0_c<S: Scalar>(c: &PointContext<S>, kind: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let n = c.n;
    let b = c.bundle(kind);
    let (v, tv) = (b.data.v.values(), &b.tv);
    for ab in idx(n, 2) {
        let (a, bb) = (ab[0], ab[1]);
        let br = c.bracket(n + a, n + bb)?;
        for i in 0..n {
            acc.add(
                Terms::new()
                    .p(br.kappa[i])
                    .m(v.at(&[i, bb, a]))
                    .p(v.at(&[i, a, bb]))
                    .m(tv.shat.at(&[a, bb, i])),
            );
            acc.zero(br.rho[i]);
        }
    }
    Ok(())
}

fn g1_a<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let n = c.n;
    let tv = c.tv(k);
    let cv = c.cv(k)?;
    let dvt = c.d(k, Op::T(k), V)?;
    let t = &tv.t;
    for ix in idx(n, 4) {
        let (x, y, z, i) = (ix[0], ix[1], ix[2], ix[3]);
        acc.add(
            Terms::new()
                .p(cv.s.at(&[x, y, z, i]))
                .m(dvt.at(&[x, z, i, y]))
                .p(dvt.at(&[y, z, i, x]))
                .m(sm(n, |m| t.at(&[y, z, m]) * t.at(&[x, m, i])))
                .p(sm(n, |m| t.at(&[x, z, m]) * t.at(&[y, m, i])))
                .m(sm(n, |m| tv.shat.at(&[x, y, m]) * t.at(&[m, z, i]))),
        );
    }
    Ok(())
}

fn g1_b<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let n = c.n;
    let tv = c.tv(k);
    let cv = c.cv(k)?;
    let dht = c.d(k, Op::T(k), H)?;
    let dvq = c.d(k, Op::Q(k), V)?;
    let (t, q, ph) = (&tv.t, &tv.q, &tv.phat);
    for ix in idx(n, 4) {
        let (x, y, z, i) = (ix[0], ix[1], ix[2], ix[3]);
        acc.add(
            Terms::new()
                .p(cv.p.at(&[x, y, z, i]))
                .m(cv.p.at(&[z, y, x, i]))
                .m(dht.at(&[y, x, i, z]))
                .p(dht.at(&[y, z, i, x]))
                .p(dvq.at(&[x, z, i, y]))
                .p(sm(n, |m| q.at(&[x, z, m]) * t.at(&[y, m, i])))
                .p(sm(n, |m| ph.at(&[z, y, m]) * t.at(&[m, x, i])))
                .m(sm(n, |m| ph.at(&[x, y, m]) * t.at(&[m, z, i])))
                .p(sm(n, |m| t.at(&[y, x, m]) * q.at(&[z, m, i])))
                .m(sm(n, |m| t.at(&[y, z, m]) * q.at(&[x, m, i]))),
        );
    }
    Ok(())
}

fn g1_c<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let n = c.n;
    let tv = c.tv(k);
    let cv = c.cv(k)?;
    let dhq = c.d(k, Op::Q(k), H)?;
    let (t, q) = (&tv.t, &tv.q);
    for ix in idx(n, 4) {
        let args = [ix[0], ix[1], ix[2]];
        let i = ix[3];
        let mut terms = Terms::new();
        for [a, b, cc] in cyclic(args) {
            terms = terms
                .p(cv.r.at(&[a, b, cc, i]))
                .m(sm(n, |m| tv.rhat.at(&[a, b, m]) * t.at(&[m, cc, i])))
                .m(sm(n, |m| q.at(&[b, cc, m]) * q.at(&[a, m, i])))
                .p(dhq.at(&[b, cc, i, a]));
        }
        acc.add(terms);
    }
    Ok(())
}

fn g2_a<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let n = c.n;
    let tv = c.tv(k);
    let cv = c.cv(k)?;
    let dvs = c.d(k, Op::S(k), V)?;
    for ix in idx(n, 5) {
        let args = [ix[0], ix[1], ix[2]];
        let (w, i) = (ix[3], ix[4]);
        let mut terms = Terms::new();
        for [x, y, z] in cyclic(args) {
            terms = terms
                .p(dvs.at(&[y, z, w, i, x]))
                .m(sm(n, |m| tv.shat.at(&[x, y, m]) * cv.s.at(&[m, z, w, i])));
        }
        acc.add(terms);
    }
    Ok(())
}

fn g2_b<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let n = c.n;
    let tv = c.tv(k);
    let cv = c.cv(k)?;
    let dhs = c.d(k, Op::S(k), H)?;
    let dvp = c.d(k, Op::P(k), V)?;
    let (t, ph, sh) = (&tv.t, &tv.phat, &tv.shat);
    for ix in idx(n, 5) {
        let (x, y, z, w, i) = (ix[0], ix[1], ix[2], ix[3], ix[4]);
        acc.add(
            Terms::new()
                .p(dhs.at(&[x, y, w, i, z]))
                .m(dvp.at(&[z, y, w, i, x]))
                .p(dvp.at(&[z, x, w, i, y]))
                .m(sm(n, |m| t.at(&[x, z, m]) * cv.p.at(&[m, y, w, i])))
                .p(sm(n, |m| t.at(&[y, z, m]) * cv.p.at(&[m, x, w, i])))
                .p(sm(n, |m| sh.at(&[x, y, m]) * cv.p.at(&[z, m, w, i])))
                .m(sm(n, |m| ph.at(&[z, x, m]) * cv.s.at(&[m, y, w, i])))
                .p(sm(n, |m| ph.at(&[z, y, m]) * cv.s.at(&[m, x, w, i]))),
        );
    }
    Ok(())
}

fn g2_c<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let n = c.n;
    let tv = c.tv(k);
    let cv = c.cv(k)?;
    let dvr = c.d(k, Op::R(k), V)?;
    let dhp = c.d(k, Op::P(k), H)?;
    let (t, q, ph) = (&tv.t, &tv.q, &tv.phat);
    for ix in idx(n, 5) {
        let (x, y, z, w, i) = (ix[0], ix[1], ix[2], ix[3], ix[4]);
        acc.add(
            Terms::new()
                .p(dvr.at(&[y, z, w, i, x]))
                .p(dhp.at(&[z, x, w, i, y]))
                .m(dhp.at(&[y, x, w, i, z]))
                .m(sm(n, |m| ph.at(&[y, x, m]) * cv.p.at(&[z, m, w, i])))
                .p(sm(n, |m| ph.at(&[z, x, m]) * cv.p.at(&[y, m, w, i])))
                .p(sm(n, |m| q.at(&[y, z, m]) * cv.p.at(&[m, x, w, i])))
                .m(sm(n, |m| t.at(&[x, z, m]) * cv.r.at(&[m, y, w, i])))
                .p(sm(n, |m| t.at(&[x, y, m]) * cv.r.at(&[m, z, w, i])))
                .m(sm(n, |m| tv.rhat.at(&[y, z, m]) * cv.s.at(&[m, x, w, i]))),
        );
    }
    Ok(())
}

fn g2_d<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let n = c.n;
    let tv = c.tv(k);
    let cv = c.cv(k)?;
    let dhr = c.d(k, Op::R(k), H)?;
    for ix in idx(n, 5) {
        let args = [ix[0], ix[1], ix[2]];
        let (w, i) = (ix[3], ix[4]);
        let mut terms = Terms::new();
        for [x, y, z] in cyclic(args) {
            terms = terms
                .p(dhr.at(&[y, z, w, i, x]))
                .p(sm(n, |m| tv.rhat.at(&[y, z, m]) * cv.p.at(&[x, m, w, i])))
                .p(sm(n, |m| tv.q.at(&[x, y, m]) * cv.r.at(&[m, z, w, i])));
        }
        acc.add(terms);
    }
    Ok(())
}

/// Adapted basis fields on `TM`: index `a < n` is `δ_a`, otherwise `∂̇_{a−n}`.
struct Lifts<'a, S: Scalar> {
    n: usize,
    c: &'a PointContext<S>,
    k: ConnectionKind,
}

impl<S: Scalar> Lifts<'_, S> {
    fn hor(&self, a: usize) -> bool {
        a < self.n
    }

    fn base(&self, a: usize) -> usize {
        a % self.n
    }

    fn dir(&self, a: usize) -> Direction {
        if self.hor(a) {
            H
        } else {
            V
        }
    }

    /// Classical torsion `T(A, B)^i`.
    fn torsion(&self, a: usize, b: usize, i: usize) -> S {
        let tv = self.c.tv(self.k);
        let (p, q) = (self.base(a), self.base(b));
        match (self.hor(a), self.hor(b)) {
            (true, true) => tv.q.at(&[p, q, i]),
            (false, true) => tv.t.at(&[p, q, i]),
            (true, false) => -tv.t.at(&[q, p, i]),
            (false, false) => S::zero(),
        }
    }

    /// `T(A, [B, C])^i`
    fn torsion_bracket(&self, a: usize, b: usize, cc: usize, i: usize) -> Result<S, JetError> {
        let br = self.c.bracket(b, cc)?;
        let n = self.n;
        Ok(sm(n, |m| br.rho[m] * self.torsion(a, m, i) + br.kappa[m] * self.torsion(a, n + m, i)))
    }

    /// `(K(A, B) e_w)^i`
    fn curv(&self, a: usize, b: usize, w: usize, i: usize) -> Result<S, JetError> {
        let cv = self.c.cv(self.k)?;
        let (p, q) = (self.base(a), self.base(b));
        Ok(match (self.hor(a), self.hor(b)) {
            (true, true) => cv.r.at(&[p, q, w, i]),
            (true, false) => cv.p.at(&[p, q, w, i]),
            (false, true) => -cv.p.at(&[q, p, w, i]),
            (false, false) => cv.s.at(&[p, q, w, i]),
        })
    }
}

fn g3_a<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let n = c.n;
    let l = Lifts { n, c, k };
    let dq = [c.d_fixed(k, Op::Q(k), H)?, c.d_fixed(k, Op::Q(k), V)?];
    let dt = [c.d_fixed(k, Op::T(k), H)?, c.d_fixed(k, Op::T(k), V)?];
    let slot = |d: Direction| usize::from(d == V);
    // D_A (T(B, C))^i
    let d_torsion = |a: usize, b: usize, cc: usize, i: usize| -> S {
        let (p, q, r) = (l.base(a), l.base(b), l.base(cc));
        let s = slot(l.dir(a));
        match (l.hor(b), l.hor(cc)) {
            (true, true) => dq[s].at(&[q, r, i, p]),
            (false, true) => dt[s].at(&[q, r, i, p]),
            (true, false) => -dt[s].at(&[r, q, i, p]),
            (false, false) => S::zero(),
        }
    };
    for ix in idx(2 * n, 3) {
        for i in 0..n {
            let mut terms = Terms::new();
            for [a, b, cc] in cyclic([ix[0], ix[1], ix[2]]) {
                if l.hor(cc) {
                    terms = terms.p(l.curv(a, b, l.base(cc), i)?);
                }
                terms = terms.p(d_torsion(a, b, cc, i)).p(l.torsion_bracket(a, b, cc, i)?);
            }
            acc.add(terms);
        }
    }
    Ok(())
}

fn g3_b<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let n = c.n;
    let l = Lifts { n, c, k };
    let fixed = |op: Op| -> Result<[std::sync::Arc<PiTensor<S>>; 2], JetError> {
        Ok([c.d_fixed(k, op, H)?, c.d_fixed(k, op, V)?])
    };
    let (dr, dp, ds) = (fixed(Op::R(k))?, fixed(Op::P(k))?, fixed(Op::S(k))?);
    let coef = [c.bundle(k).data.h.values(), c.bundle(k).data.v.values()];
    let slot = |d: Direction| usize::from(d == V);
    // D_C (K(A, B) e_w)^i
    let d_curv = |a: usize, b: usize, cc: usize, w: usize, i: usize| -> S {
        let (p, q, r) = (l.base(a), l.base(b), l.base(cc));
        let s = slot(l.dir(cc));
        match (l.hor(a), l.hor(b)) {
            (true, true) => dr[s].at(&[p, q, w, i, r]),
            (true, false) => dp[s].at(&[p, q, w, i, r]),
            (false, true) => -dp[s].at(&[q, p, w, i, r]),
            (false, false) => ds[s].at(&[p, q, w, i, r]),
        }
    };
    for ix in idx(2 * n, 3) {
        for wi in idx(n, 2) {
            let (w, i) = (wi[0], wi[1]);
            let mut terms = Terms::new();
            for [a, b, cc] in cyclic([ix[0], ix[1], ix[2]]) {
                let cf = &coef[slot(l.dir(cc))];
                let r = l.base(cc);
                let mut kd = S::zero();
                for m in 0..n {
                    kd = kd + cf.at(&[m, w, r]) * l.curv(a, b, m, i)?;
                }
                let br = c.bracket(a, b)?;
                let mut kb = S::zero();
                for m in 0..n {
                    kb = kb + br.rho[m] * l.curv(m, cc, w, i)? + br.kappa[m] * l.curv(n + m, cc, w, i)?;
                }
                terms = terms.p(d_curv(a, b, cc, w, i)).m(kd).m(kb);
            }
            acc.add(terms);
        }
    }
    Ok(())
}

fn g3_c<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let n = c.n;
    let l = Lifts { n, c, k };
    let g = c.g();
    let dg = [c.d(k, Op::G, H)?, c.d(k, Op::G, V)?];
    let slot = |d: Direction| usize::from(d == V);
    let mut ddg = Vec::new();
    for db in [H, V] {
        let mut row = Vec::new();
        for da in [H, V] {
            row.push(c.d(k, Op::DgFixed(k, db), da)?);
        }
        ddg.push(row);
    }
    // (D_A (D_B g))(e_w, e_z)
    let dd = |a: usize, b: usize, w: usize, z: usize| -> S {
        ddg[slot(l.dir(b))][slot(l.dir(a))].at(&[w, z, l.base(b), l.base(a)])
    };
    for ab in idx(2 * n, 2) {
        let (a, b) = (ab[0], ab[1]);
        let br = c.bracket(a, b)?;
        for zw in idx(n, 2) {
            let (z, w) = (zw[0], zw[1]);
            let mut lhs1 = S::zero();
            let mut lhs2 = S::zero();
            for i in 0..n {
                lhs1 = lhs1 + l.curv(a, b, z, i)? * g.at(&[i, w]);
                lhs2 = lhs2 + l.curv(a, b, w, i)? * g.at(&[i, z]);
            }
            let bracket_term = sm(n, |m| br.rho[m] * dg[0].at(&[w, z, m]) + br.kappa[m] * dg[1].at(&[w, z, m]));
            acc.add(
                Terms::new()
                    .p(lhs1)
                    .p(lhs2)
                    .m(dd(a, b, w, z))
                    .p(dd(b, a, w, z))
                    .p(bracket_term),
            );
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Cartan connection

fn c0_metric<S: Scalar>(c: &PointContext<S>, _: ConnectionKind, acc: &mut Acc<S>) -> Res {
    for dir in [H, V] {
        for v in c.d(Cartan, Op::G, dir)?.data() {
            acc.zero(*v);
        }
    }
    Ok(())
}

fn q_zero<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, acc: &mut Acc<S>) -> Res {
    for v in c.tv(k).q.data() {
        acc.zero(*v);
    }
    Ok(())
}

fn t_low_symmetric<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let tl = &c.tv(k).t_low;
    for i in idx(c.n, 3) {
        acc.eq(tl.at(&[i[0], i[1], i[2]]), tl.at(&[i[0], i[2], i[1]]));
    }
    Ok(())
}

fn c1_b<S: Scalar>(c: &PointContext<S>, _: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let n = c.n;
    let g = c.g();
    for dir in [H, V] {
        let dtl = c.d(Cartan, Op::TLow, dir)?;
        let dt = c.d(Cartan, Op::T(Cartan), dir)?;
        for ix in idx(n, 4) {
            let (x, y, z, w) = (ix[0], ix[1], ix[2], ix[3]);
            let a = dtl.at(&[x, y, z, w]);
            let b = sm(n, |m| dt.at(&[x, y, m, w]) * g.at(&[m, z]));
            let d = sm(n, |m| dt.at(&[x, z, m, w]) * g.at(&[m, y]));
            acc.eq(a, b);
            acc.eq(b, d);
        }
    }
    Ok(())
}

fn t_eta<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let (n, y, t) = (c.n, c.y(), &c.tv(k).t);
    for i in idx(n, 2) {
        acc.zero(sm(n, |m| y[m] * t.at(&[i[0], m, i[1]])));
    }
    Ok(())
}

fn c1_d<S: Scalar>(c: &PointContext<S>, _: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let dvt = c.d(Cartan, Op::T(Cartan), V)?;
    for ix in idx(c.n, 4) {
        let (x, y, z, i) = (ix[0], ix[1], ix[2], ix[3]);
        acc.eq(dvt.at(&[y, z, i, x]), dvt.at(&[x, z, i, y]));
    }
    Ok(())
}

fn c1_e<S: Scalar>(c: &PointContext<S>, _: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let dvt = c.d(Cartan, Op::T(Cartan), V)?;
    let t = &c.cartan().t;
    for ix in idx(c.n, 3) {
        acc.add(Terms::new().p(eta_last(c.y(), &dvt, &ix)).p(t.at(&ix)));
    }
    Ok(())
}

fn c1_f<S: Scalar>(c: &PointContext<S>, _: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let tl = &c.cartan().t_low;
    for i in idx(c.n, 3) {
        let v = tl.at(&[i[0], i[1], i[2]]);
        acc.eq(v, tl.at(&[i[1], i[0], i[2]]));
        acc.eq(v, tl.at(&[i[0], i[2], i[1]]));
        acc.eq(v, tl.at(&[i[2], i[1], i[0]]));
    }
    Ok(())
}

fn antisym_first<S: Scalar>(t: &PiTensor<S>, acc: &mut Acc<S>) {
    for i in t.indices() {
        acc.add(Terms::new().p(t.at(&i)).p(t.at(&[i[1], i[0], i[2], i[3]])));
    }
}

fn antisym_last<S: Scalar>(t: &PiTensor<S>, acc: &mut Acc<S>) {
    for i in t.indices() {
        acc.add(Terms::new().p(t.at(&i)).p(t.at(&[i[0], i[1], i[3], i[2]])));
    }
}

fn s_antisym_first<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, acc: &mut Acc<S>) -> Res {
    antisym_first(&c.cv(k)?.s_low, acc);
    Ok(())
}

fn s_antisym_last<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, acc: &mut Acc<S>) -> Res {
    antisym_last(&c.cv(k)?.s_low, acc);
    Ok(())
}

fn r_antisym_first<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, acc: &mut Acc<S>) -> Res {
    antisym_first(&c.cv(k)?.r_low, acc);
    Ok(())
}

fn r_antisym_last<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, acc: &mut Acc<S>) -> Res {
    antisym_last(&c.cv(k)?.r_low, acc);
    Ok(())
}

fn p_antisym_last<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, acc: &mut Acc<S>) -> Res {
    antisym_last(&c.cv(k)?.p_low, acc);
    Ok(())
}

fn c2_c<S: Scalar>(c: &PointContext<S>, _: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let n = c.n;
    let s = &c.cv(Cartan)?.s;
    let t = &c.cartan().t;
    for ix in idx(n, 4) {
        let (x, y, z, i) = (ix[0], ix[1], ix[2], ix[3]);
        acc.add(
            Terms::new()
                .p(s.at(&ix))
                .m(sm(n, |m| t.at(&[y, z, m]) * t.at(&[x, m, i])))
                .p(sm(n, |m| t.at(&[x, z, m]) * t.at(&[y, m, i]))),
        );
    }
    Ok(())
}

/// `S(X,Y,Z,W) = g(T(X,W),T(Y,Z)) − g(T(Y,W),T(X,Z))` for the v-curvature of `k`.
fn s_lowered_formula<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let n = c.n;
    let sl = &c.cv(k)?.s_low;
    let t = &c.cartan().t;
    let tv = |a: usize, b: usize| -> Vec<S> { (0..n).map(|i| t.at(&[a, b, i])).collect() };
    for ix in idx(n, 4) {
        let (x, y, z, w) = (ix[0], ix[1], ix[2], ix[3]);
        acc.add(
            Terms::new()
                .p(sl.at(&ix))
                .m(c.inner(&tv(x, w), &tv(y, z)))
                .p(c.inner(&tv(y, w), &tv(x, z))),
        );
    }
    Ok(())
}

fn c2_e<S: Scalar>(c: &PointContext<S>, _: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let sl = &c.cv(Cartan)?.s_low;
    for i in sl.indices() {
        acc.eq(sl.at(&[i[2], i[3], i[0], i[1]]), sl.at(&i));
    }
    Ok(())
}

fn s_eta<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let (n, y) = (c.n, c.y());
    let s = &c.cv(k)?.s;
    for ix in idx(n, 3) {
        let (x, z, i) = (ix[0], ix[1], ix[2]);
        acc.zero(sm(n, |m| y[m] * s.at(&[x, m, z, i])));
        acc.zero(sm(n, |m| y[m] * s.at(&[m, x, z, i])));
    }
    for v in c.tv(k).shat.data() {
        acc.zero(*v);
    }
    Ok(())
}

fn s_cyclic_dv<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let dvs = c.d(k, Op::S(k), V)?;
    for ix in idx(c.n, 5) {
        let args = [ix[0], ix[1], ix[2]];
        let (w, i) = (ix[3], ix[4]);
        let mut terms = Terms::new();
        for [x, y, z] in cyclic(args) {
            terms = terms.p(dvs.at(&[y, z, w, i, x]));
        }
        acc.add(terms);
    }
    Ok(())
}

fn bianchi_first<S: Scalar>(c: &PointContext<S>, t: &PiTensor<S>, acc: &mut Acc<S>) {
    for ix in idx(c.n, 4) {
        let args = [ix[0], ix[1], ix[2]];
        let i = ix[3];
        let mut terms = Terms::new();
        for [a, b, cc] in cyclic(args) {
            terms = terms.p(t.at(&[a, b, cc, i]));
        }
        acc.add(terms);
    }
}

fn c2_h<S: Scalar>(c: &PointContext<S>, _: ConnectionKind, acc: &mut Acc<S>) -> Res {
    bianchi_first(c, &c.cv(Cartan)?.s, acc);
    Ok(())
}

fn s_eta_derivative<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let dvs = c.d(k, Op::S(k), V)?;
    let s = &c.cv(k)?.s;
    for ix in idx(c.n, 4) {
        acc.add(
            Terms::new()
                .p(eta_last(c.y(), &dvs, &ix))
                .p(S::lit(2.0) * s.at(&ix)),
        );
    }
    Ok(())
}

/// `(D_βZ S)(X,Y,W) = (D_γX P)(Z,Y,W) − (D_γY P)(Z,X,W) − S(P̂(Z,Y),X)W + S(P̂(Z,X),Y)W
///  − P(T(Y,Z),X)W + P(T(X,Z),Y)W` with `P̂` the connection's own.
fn ds_mixed<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let n = c.n;
    let tv = c.tv(k);
    let cv = c.cv(k)?;
    let dhs = c.d(k, Op::S(k), H)?;
    let dvp = c.d(k, Op::P(k), V)?;
    let t = &c.cartan().t;
    for ix in idx(n, 5) {
        let (x, y, z, w, i) = (ix[0], ix[1], ix[2], ix[3], ix[4]);
        acc.add(
            Terms::new()
                .p(dhs.at(&[x, y, w, i, z]))
                .m(dvp.at(&[z, y, w, i, x]))
                .p(dvp.at(&[z, x, w, i, y]))
                .p(sm(n, |m| tv.phat.at(&[z, y, m]) * cv.s.at(&[m, x, w, i])))
                .m(sm(n, |m| tv.phat.at(&[z, x, m]) * cv.s.at(&[m, y, w, i])))
                .p(sm(n, |m| t.at(&[y, z, m]) * cv.p.at(&[m, x, w, i])))
                .m(sm(n, |m| t.at(&[x, z, m]) * cv.p.at(&[m, y, w, i]))),
        );
    }
    Ok(())
}

fn c3_b<S: Scalar>(c: &PointContext<S>, _: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let n = c.n;
    let tv = c.cartan();
    let p = &c.cv(Cartan)?.p;
    let dht = c.d(Cartan, Op::T(Cartan), H)?;
    let (t, ph) = (&tv.t, &tv.phat);
    for ix in idx(n, 4) {
        let (x, y, z, i) = (ix[0], ix[1], ix[2], ix[3]);
        acc.add(
            Terms::new()
                .p(p.at(&[x, y, z, i]))
                .m(p.at(&[z, y, x, i]))
                .m(dht.at(&[y, x, i, z]))
                .p(dht.at(&[y, z, i, x]))
                .p(sm(n, |m| ph.at(&[z, y, m]) * t.at(&[m, x, i])))
                .m(sm(n, |m| ph.at(&[x, y, m]) * t.at(&[m, z, i]))),
        );
    }
    Ok(())
}

fn c3_c<S: Scalar>(c: &PointContext<S>, _: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let n = c.n;
    let tv = c.cartan();
    let pl = &c.cv(Cartan)?.p_low;
    let dht = c.d(Cartan, Op::T(Cartan), H)?;
    let g = c.g();
    let vecs = |t: &PiTensor<S>, a: usize, b: usize| -> Vec<S> { (0..n).map(|i| t.at(&[a, b, i])).collect() };
    for ix in idx(n, 4) {
        let (x, y, z, w) = (ix[0], ix[1], ix[2], ix[3]);
        acc.add(
            Terms::new()
                .p(pl.at(&ix))
                .m(sm(n, |m| dht.at(&[x, y, m, z]) * g.at(&[m, w])))
                .p(sm(n, |m| dht.at(&[x, y, m, w]) * g.at(&[m, z])))
                .m(c.inner(&vecs(&tv.t, x, z), &vecs(&tv.phat, w, y)))
                .p(c.inner(&vecs(&tv.t, x, w), &vecs(&tv.phat, z, y))),
        );
    }
    Ok(())
}

fn phat_eta<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let (n, y, ph) = (c.n, c.y(), &c.tv(k).phat);
    for i in idx(n, 2) {
        acc.zero(sm(n, |m| y[m] * ph.at(&[m, i[0], i[1]])));
    }
    Ok(())
}

/// `P̂(X,Y) = (D_βη T)(X,Y)` with Cartan's `T` and the derivative of `k`.
fn phat_is_dt<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let dht = c.d(k, Op::T(Cartan), H)?;
    let ph = &c.tv(k).phat;
    for ix in idx(c.n, 3) {
        acc.eq(ph.at(&ix), eta_last(c.y(), &dht, &ix));
    }
    Ok(())
}

fn phat_symmetric<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let ph = &c.tv(k).phat;
    for i in idx(c.n, 3) {
        acc.eq(ph.at(&i), ph.at(&[i[1], i[0], i[2]]));
    }
    Ok(())
}

fn c3_g<S: Scalar>(c: &PointContext<S>, _: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let (n, y) = (c.n, c.y());
    let p = &c.cv(Cartan)?.p;
    for ix in idx(n, 3) {
        let (x, z, i) = (ix[0], ix[1], ix[2]);
        acc.zero(sm(n, |m| y[m] * p.at(&[m, x, z, i])));
        acc.zero(sm(n, |m| y[m] * p.at(&[x, m, z, i])));
    }
    Ok(())
}

fn p_eta_derivative<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let dvp = c.d(k, Op::P(k), V)?;
    let p = &c.cv(k)?.p;
    for ix in idx(c.n, 4) {
        acc.add(Terms::new().p(eta_last(c.y(), &dvp, &ix)).p(p.at(&ix)));
    }
    Ok(())
}

fn c3_i<S: Scalar>(c: &PointContext<S>, _: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let p = &c.cv(Cartan)?.p;
    let dhs = c.d(Cartan, Op::S(Cartan), H)?;
    for ix in idx(c.n, 4) {
        let (x, y, z, i) = (ix[0], ix[1], ix[2], ix[3]);
        acc.add(
            Terms::new()
                .p(p.at(&ix))
                .m(p.at(&[y, x, z, i]))
                .p(eta_last(c.y(), &dhs, &[x, y, z, i])),
        );
    }
    Ok(())
}

fn rhat_barthel<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let bd = c.barthel_direct()?;
    let rh = &c.tv(k).rhat;
    let cr = &c.cartan().rhat;
    for i in rh.indices() {
        acc.add(Terms::new().p(rh.at(&i)).p(bd.at(&i)));
        acc.eq(rh.at(&i), cr.at(&i));
    }
    Ok(())
}

/// `𝔖{R(X,Y)Z − T(R̂(X,Y),Z)} = 0` with Cartan's `T`.
fn r_bianchi_t<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let n = c.n;
    let r = &c.cv(k)?.r;
    let (rh, t) = (&c.tv(k).rhat, &c.cartan().t);
    for ix in idx(n, 4) {
        let args = [ix[0], ix[1], ix[2]];
        let i = ix[3];
        let mut terms = Terms::new();
        for [a, b, cc] in cyclic(args) {
            terms = terms
                .p(r.at(&[a, b, cc, i]))
                .m(sm(n, |m| rh.at(&[a, b, m]) * t.at(&[m, cc, i])));
        }
        acc.add(terms);
    }
    Ok(())
}

/// `𝔖{(D_βX R)(Y,Z,W) + P(X,R̂(Y,Z))W} = 0`
fn r_bianchi_second<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let n = c.n;
    let cv = c.cv(k)?;
    let rh = &c.tv(k).rhat;
    let dhr = c.d(k, Op::R(k), H)?;
    for ix in idx(n, 5) {
        let args = [ix[0], ix[1], ix[2]];
        let (w, i) = (ix[3], ix[4]);
        let mut terms = Terms::new();
        for [x, y, z] in cyclic(args) {
            terms = terms
                .p(dhr.at(&[y, z, w, i, x]))
                .p(sm(n, |m| rh.at(&[y, z, m]) * cv.p.at(&[x, m, w, i])));
        }
        acc.add(terms);
    }
    Ok(())
}

fn c4_f<S: Scalar>(c: &PointContext<S>, _: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let n = c.n;
    let tv = c.cartan();
    let cv = c.cv(Cartan)?;
    let dvr = c.d(Cartan, Op::R(Cartan), V)?;
    let dhp = c.d(Cartan, Op::P(Cartan), H)?;
    let (t, ph) = (&tv.t, &tv.phat);
    for ix in idx(n, 5) {
        let (x, y, z, w, i) = (ix[0], ix[1], ix[2], ix[3], ix[4]);
        acc.add(
            Terms::new()
                .p(dvr.at(&[y, z, w, i, x]))
                .p(dhp.at(&[z, x, w, i, y]))
                .m(dhp.at(&[y, x, w, i, z]))
                .m(sm(n, |m| ph.at(&[y, x, m]) * cv.p.at(&[z, m, w, i])))
                .p(sm(n, |m| t.at(&[x, y, m]) * cv.r.at(&[m, z, w, i])))
                .m(sm(n, |m| tv.rhat.at(&[y, z, m]) * cv.s.at(&[m, x, w, i])))
                .p(sm(n, |m| ph.at(&[z, x, m]) * cv.p.at(&[y, m, w, i])))
                .m(sm(n, |m| t.at(&[x, z, m]) * cv.r.at(&[m, y, w, i]))),
        );
    }
    Ok(())
}

fn r_eta_derivative<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let dvr = c.d(k, Op::R(k), V)?;
    for ix in idx(c.n, 4) {
        acc.zero(eta_last(c.y(), &dvr, &ix));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Berwald, Chern and Hashiguchi connections

fn zero_all<S: Scalar>(t: &PiTensor<S>, acc: &mut Acc<S>) {
    for v in t.data() {
        acc.zero(*v);
    }
}

fn hl_zero<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, acc: &mut Acc<S>) -> Res {
    // D_{hX} L is the horizontal derivative of the scalar L
    let f = PiTensor::new(c.n, vec![], vec![c.frame.l.clone()]);
    let d = crate::connections::h_cov_deriv(&f, &c.bundle(k).data, &c.frame)?.values();
    let mut scale = S::zero();
    for m in 0..c.n {
        scale = scale.max(c.frame.l.dx(m)?.value().abs());
    }
    for v in d.data() {
        acc.raw(*v, scale);
    }
    Ok(())
}

fn torsion_free<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, acc: &mut Acc<S>) -> Res {
    zero_all(&c.tv(k).q, acc);
    zero_all(&c.tv(k).t, acc);
    Ok(())
}

fn phat_zero<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, acc: &mut Acc<S>) -> Res {
    zero_all(&c.tv(k).phat, acc);
    Ok(())
}

fn s_zero<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, acc: &mut Acc<S>) -> Res {
    zero_all(&c.cv(k)?.s, acc);
    Ok(())
}

/// Vertical coefficients of `k` against Cartan's: `V_k^i_yx = V^i_yx + σ T(X,Y)^i`.
fn v_counterpart<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let sigma = match k {
        Cartan | Hashiguchi => S::zero(),
        Berwald | Chern => -S::one(),
    };
    let vk = c.bundle(k).data.v.values();
    let vc = c.bundle(Cartan).data.v.values();
    let t = &c.cartan().t;
    for ix in idx(c.n, 3) {
        let (x, y, i) = (ix[0], ix[1], ix[2]);
        acc.add(
            Terms::new()
                .p(vk.at(&[i, y, x]))
                .m(vc.at(&[i, y, x]))
                .m(sigma * t.at(&[x, y, i])),
        );
    }
    Ok(())
}

/// Horizontal coefficients of `k` against Cartan's: `H_k^i_yx = H^i_yx + σ P̂(X,Y)^i`.
fn h_counterpart<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let sigma = match k {
        Cartan | Chern => S::zero(),
        Berwald | Hashiguchi => S::one(),
    };
    let hk = c.bundle(k).data.h.values();
    let hc = c.bundle(Cartan).data.h.values();
    let ph = &c.cartan().phat;
    for ix in idx(c.n, 3) {
        let (x, y, i) = (ix[0], ix[1], ix[2]);
        acc.add(
            Terms::new()
                .p(hk.at(&[i, y, x]))
                .m(hc.at(&[i, y, x]))
                .m(sigma * ph.at(&[x, y, i])),
        );
    }
    Ok(())
}

/// Hashiguchi against Berwald: `V* = V° + T`, `H* = H°`.
fn hashiguchi_vs_berwald<S: Scalar>(c: &PointContext<S>, _: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let (hs, hb) = (c.bundle(Hashiguchi).data.h.values(), c.bundle(Berwald).data.h.values());
    let (vs, vb) = (c.bundle(Hashiguchi).data.v.values(), c.bundle(Berwald).data.v.values());
    let t = &c.cartan().t;
    for ix in idx(c.n, 3) {
        let (x, y, i) = (ix[0], ix[1], ix[2]);
        acc.eq(hs.at(&[i, y, x]), hb.at(&[i, y, x]));
        acc.add(Terms::new().p(vs.at(&[i, y, x])).m(vb.at(&[i, y, x])).m(t.at(&[x, y, i])));
    }
    Ok(())
}

/// `(D_γX g)(Y,Z) = σ_v T(X,Y,Z)` and `(D_βX g)(Y,Z) = σ_h P̂(X,Y,Z)` with Cartan's
/// lowered `T`, `P̂`.
fn metricity<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, dirs: &[Direction], acc: &mut Acc<S>) -> Res {
    let (sv, sh) = match k {
        Cartan => (0.0, 0.0),
        Chern => (2.0, 0.0),
        Hashiguchi => (0.0, -2.0),
        Berwald => (2.0, -2.0),
    };
    let tv = c.cartan();
    for &dir in dirs {
        let d = c.d(k, Op::G, dir)?;
        let (sigma, rhs) = match dir {
            V => (S::lit(sv), &tv.t_low),
            H => (S::lit(sh), &tv.phat_low),
        };
        for ix in idx(c.n, 3) {
            let (x, y, z) = (ix[0], ix[1], ix[2]);
            acc.add(Terms::new().p(d.at(&[y, z, x])).m(sigma * rhs.at(&[x, y, z])));
        }
    }
    Ok(())
}

fn metricity_v<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, acc: &mut Acc<S>) -> Res {
    metricity(c, k, &[V], acc)
}

fn metricity_h<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, acc: &mut Acc<S>) -> Res {
    metricity(c, k, &[H], acc)
}

fn metricity_both<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, acc: &mut Acc<S>) -> Res {
    metricity(c, k, &[H, V], acc)
}

fn b3_b<S: Scalar>(c: &PointContext<S>, _: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let pl = &c.cv(Berwald)?.p_low;
    let dtl = c.d(Berwald, Op::TLow, H)?;
    let dpl = c.d(Berwald, Op::PhatLow, V)?;
    let two = S::lit(2.0);
    for ix in idx(c.n, 4) {
        let (x, y, z, w) = (ix[0], ix[1], ix[2], ix[3]);
        acc.add(
            Terms::new()
                .p(pl.at(&ix))
                .p(pl.at(&[x, y, w, z]))
                .m(two * dtl.at(&[y, z, w, x]))
                .m(two * dpl.at(&[x, z, w, y])),
        );
    }
    Ok(())
}

fn p_swap13<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let p = &c.cv(k)?.p;
    for i in p.indices() {
        acc.eq(p.at(&i), p.at(&[i[2], i[1], i[0], i[3]]));
    }
    Ok(())
}

fn b3_d<S: Scalar>(c: &PointContext<S>, _: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let dvp = c.d(Berwald, Op::P(Berwald), V)?;
    for ix in idx(c.n, 5) {
        let (x, y, z, w, i) = (ix[0], ix[1], ix[2], ix[3], ix[4]);
        acc.eq(dvp.at(&[y, z, w, i, x]), dvp.at(&[y, x, w, i, z]));
    }
    Ok(())
}

fn b3_e<S: Scalar>(c: &PointContext<S>, _: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let p = &c.cv(Berwald)?.p;
    for i in p.indices() {
        let v = p.at(&i);
        acc.eq(v, p.at(&[i[1], i[0], i[2], i[3]]));
        acc.eq(v, p.at(&[i[0], i[2], i[1], i[3]]));
        acc.eq(v, p.at(&[i[2], i[1], i[0], i[3]]));
    }
    Ok(())
}

/// The literal form `(D°_γη P°)(X,Y,Z) = −P°(X,Y)Y`.
fn b3_f_literal<S: Scalar>(c: &PointContext<S>, _: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let dvp = c.d(Berwald, Op::P(Berwald), V)?;
    let p = &c.cv(Berwald)?.p;
    for ix in idx(c.n, 4) {
        let (x, y, i) = (ix[0], ix[1], ix[3]);
        acc.add(Terms::new().p(eta_last(c.y(), &dvp, &ix)).p(p.at(&[x, y, y, i])));
    }
    Ok(())
}

/// `R(X,Y,Z,W) + R(X,Y,W,Z) = 2𝔘_{X,Y}{(D_βY P̂)(X,Z,W)} − 2τ T(R̂(X,Y),Z,W)`, `P̂`, `T`
/// Cartan's and lowered.
fn r_sym_part<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, tau: S, with_phat: bool, acc: &mut Acc<S>) -> Res {
    let n = c.n;
    let rl = &c.cv(k)?.r_low;
    let tv = c.cartan();
    let dpl = if with_phat {
        Some(c.d(k, Op::PhatLow, H)?)
    } else {
        None
    };
    let two = S::lit(2.0);
    for ix in idx(n, 4) {
        let (x, y, z, w) = (ix[0], ix[1], ix[2], ix[3]);
        let mut t = Terms::new()
            .p(rl.at(&ix))
            .p(rl.at(&[x, y, w, z]))
            .p(two * tau * sm(n, |m| tv.rhat.at(&[x, y, m]) * tv.t_low.at(&[m, z, w])));
        if let Some(d) = &dpl {
            t = t.m(two * d.at(&[x, z, w, y])).p(two * d.at(&[y, z, w, x]));
        }
        acc.add(t);
    }
    Ok(())
}

fn b4_c<S: Scalar>(c: &PointContext<S>, _: ConnectionKind, acc: &mut Acc<S>) -> Res {
    r_sym_part(c, Berwald, S::one(), true, acc)
}

fn h5_c<S: Scalar>(c: &PointContext<S>, _: ConnectionKind, acc: &mut Acc<S>) -> Res {
    r_sym_part(c, Chern, S::one(), false, acc)
}

fn s4_b<S: Scalar>(c: &PointContext<S>, _: ConnectionKind, acc: &mut Acc<S>) -> Res {
    r_sym_part(c, Hashiguchi, S::zero(), true, acc)
}

fn r_first_bianchi<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, acc: &mut Acc<S>) -> Res {
    bianchi_first(c, &c.cv(k)?.r, acc);
    Ok(())
}

fn b4_f<S: Scalar>(c: &PointContext<S>, _: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let dvr = c.d(Berwald, Op::R(Berwald), V)?;
    let dhp = c.d(Berwald, Op::P(Berwald), H)?;
    for ix in idx(c.n, 5) {
        let (x, y, z, w, i) = (ix[0], ix[1], ix[2], ix[3], ix[4]);
        acc.add(
            Terms::new()
                .p(dvr.at(&[y, z, w, i, x]))
                .m(dhp.at(&[y, x, w, i, z]))
                .p(dhp.at(&[z, x, w, i, y])),
        );
    }
    Ok(())
}

fn b4_h<S: Scalar>(c: &PointContext<S>, _: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let dvh = c.d(Berwald, Op::HTensor, V)?;
    let rh = &c.tv(Berwald).rhat;
    let third = S::one() / S::lit(3.0);
    for ix in idx(c.n, 3) {
        let (x, y, i) = (ix[0], ix[1], ix[2]);
        acc.add(
            Terms::new()
                .p(rh.at(&ix))
                .m(third * dvh.at(&[y, i, x]))
                .p(third * dvh.at(&[x, i, y])),
        );
    }
    Ok(())
}

fn b4_i<S: Scalar>(c: &PointContext<S>, _: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let dvr = c.d(Berwald, Op::Rhat, V)?;
    let r = &c.cv(Berwald)?.r;
    for ix in idx(c.n, 4) {
        let (x, y, z, i) = (ix[0], ix[1], ix[2], ix[3]);
        acc.eq(r.at(&ix), dvr.at(&[x, y, i, z]));
    }
    Ok(())
}

fn flat_quantities<S: Scalar>(c: &PointContext<S>) -> Result<Vec<PiTensor<S>>, JetError> {
    let h = crate::curvature::h_tensor(&c.bundle(Berwald).tors.rhat, &c.frame).values();
    Ok(vec![
        c.barthel_direct()?.clone(),
        c.cv(Berwald)?.r.clone(),
        c.tv(Berwald).rhat.clone(),
        c.cartan().rhat.clone(),
        h,
    ])
}

fn b5_flat<S: Scalar>(c: &PointContext<S>, _: ConnectionKind, acc: &mut Acc<S>) -> Res {
    for t in flat_quantities(c)? {
        zero_all(&t, acc);
    }
    Ok(())
}

fn b5_curved<S: Scalar>(c: &PointContext<S>, _: ConnectionKind, acc: &mut Acc<S>) -> Res {
    for t in flat_quantities(c)? {
        acc.nonvanishing(t.max_abs(), S::lit(1e-3));
    }
    Ok(())
}

fn h3_a<S: Scalar>(c: &PointContext<S>, _: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let n = c.n;
    let pl = &c.cv(Chern)?.p_low;
    let dtl = c.d(Chern, Op::TLow, H)?;
    let ph = &c.tv(Chern).phat;
    let tl = &c.cartan().t_low;
    let two = S::lit(2.0);
    for ix in idx(n, 4) {
        let (x, y, z, w) = (ix[0], ix[1], ix[2], ix[3]);
        acc.add(
            Terms::new()
                .p(pl.at(&ix))
                .p(pl.at(&[x, y, w, z]))
                .m(two * dtl.at(&[y, z, w, x]))
                .p(two * sm(n, |m| ph.at(&[x, y, m]) * tl.at(&[m, z, w]))),
        );
    }
    Ok(())
}

fn h3_c<S: Scalar>(c: &PointContext<S>, _: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let n = c.n;
    let pl = &c.cv(Chern)?.p_low;
    let d = c.d(Chern, Op::TLow, H)?;
    let ph = &c.tv(Chern).phat;
    let tl = &c.cartan().t_low;
    let tph = |a: usize, b: usize, p: usize, q: usize| sm(n, |m| ph.at(&[a, b, m]) * tl.at(&[m, p, q]));
    for ix in idx(n, 4) {
        let (x, y, z, w) = (ix[0], ix[1], ix[2], ix[3]);
        acc.add(
            Terms::new()
                .p(pl.at(&ix))
                .m(d.at(&[y, z, w, x]))
                .m(d.at(&[y, w, x, z]))
                .p(d.at(&[y, x, z, w]))
                .m(tph(w, y, x, z))
                .p(tph(x, y, z, w))
                .p(tph(z, y, w, x)),
        );
    }
    Ok(())
}

fn chern_phat_is_cartan<S: Scalar>(c: &PointContext<S>, _: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let (a, b) = (&c.tv(Chern).phat, &c.cartan().phat);
    for i in a.indices() {
        acc.eq(a.at(&i), b.at(&i));
    }
    phat_is_dt(c, Chern, acc)
}

fn h3_g<S: Scalar>(c: &PointContext<S>, _: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let (n, y) = (c.n, c.y());
    let p = &c.cv(Chern)?.p;
    let dht = c.d(Chern, Op::T(Cartan), H)?;
    for ix in idx(n, 3) {
        let (x, z, i) = (ix[0], ix[1], ix[2]);
        acc.zero(sm(n, |m| y[m] * p.at(&[x, m, z, i])));
        acc.eq(sm(n, |m| y[m] * p.at(&[m, x, z, i])), eta_last(y, &dht, &[x, z, i]));
    }
    Ok(())
}

fn h3_h<S: Scalar>(c: &PointContext<S>, _: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let dvp = c.d(Chern, Op::P(Chern), V)?;
    for ix in idx(c.n, 5) {
        let (x, y, z, w, i) = (ix[0], ix[1], ix[2], ix[3], ix[4]);
        acc.eq(dvp.at(&[z, y, w, i, x]), dvp.at(&[z, x, w, i, y]));
    }
    Ok(())
}

fn h4<S: Scalar>(c: &PointContext<S>, _: ConnectionKind, acc: &mut Acc<S>) -> Res {
    zero_all(&c.cv(Cartan)?.p, acc);
    zero_all(&c.cartan().phat, acc);
    zero_all(&c.tv(Chern).phat, acc);
    Ok(())
}

fn h5_f<S: Scalar>(c: &PointContext<S>, _: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let n = c.n;
    let cv = c.cv(Chern)?;
    let ph = &c.cartan().phat;
    let dvr = c.d(Chern, Op::R(Chern), V)?;
    let dhp = c.d(Chern, Op::P(Chern), H)?;
    for ix in idx(n, 5) {
        let (x, y, z, w, i) = (ix[0], ix[1], ix[2], ix[3], ix[4]);
        acc.add(
            Terms::new()
                .p(dvr.at(&[y, z, w, i, x]))
                .p(dhp.at(&[z, x, w, i, y]))
                .m(dhp.at(&[y, x, w, i, z]))
                .m(sm(n, |m| ph.at(&[y, x, m]) * cv.p.at(&[z, m, w, i])))
                .p(sm(n, |m| ph.at(&[z, x, m]) * cv.p.at(&[y, m, w, i]))),
        );
    }
    Ok(())
}

fn s0_t<S: Scalar>(c: &PointContext<S>, _: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let (a, b) = (&c.tv(Hashiguchi).t, &c.cartan().t);
    for i in a.indices() {
        acc.eq(a.at(&i), b.at(&i));
    }
    Ok(())
}

fn s2_c<S: Scalar>(c: &PointContext<S>, _: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let (a, b) = (&c.cv(Hashiguchi)?.s_low, &c.cv(Cartan)?.s_low);
    for i in a.indices() {
        acc.eq(a.at(&i), b.at(&i));
    }
    s_lowered_formula(c, Hashiguchi, acc)
}

fn s3_a<S: Scalar>(c: &PointContext<S>, _: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let n = c.n;
    let pl = &c.cv(Hashiguchi)?.p_low;
    let dpl = c.d(Hashiguchi, Op::PhatLow, V)?;
    let tv = c.cartan();
    let two = S::lit(2.0);
    for ix in idx(n, 4) {
        let (x, y, z, w) = (ix[0], ix[1], ix[2], ix[3]);
        acc.add(
            Terms::new()
                .p(pl.at(&ix))
                .p(pl.at(&[x, y, w, z]))
                .m(two * dpl.at(&[x, z, w, y]))
                .m(two * sm(n, |m| tv.t.at(&[x, y, m]) * tv.phat_low.at(&[m, z, w]))),
        );
    }
    Ok(())
}

fn s3_c<S: Scalar>(c: &PointContext<S>, _: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let p = &c.cv(Hashiguchi)?.p;
    let dht = c.d(Hashiguchi, Op::T(Hashiguchi), H)?;
    for ix in idx(c.n, 4) {
        let (x, y, z, i) = (ix[0], ix[1], ix[2], ix[3]);
        acc.add(
            Terms::new()
                .p(p.at(&ix))
                .m(p.at(&[z, y, x, i]))
                .m(dht.at(&[y, x, i, z]))
                .p(dht.at(&[y, z, i, x])),
        );
    }
    Ok(())
}

fn s3_d<S: Scalar>(c: &PointContext<S>, _: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let p = &c.cv(Hashiguchi)?.p;
    for i in p.indices() {
        acc.eq(p.at(&i), p.at(&[i[0], i[2], i[1], i[3]]));
    }
    Ok(())
}

fn s3_e<S: Scalar>(c: &PointContext<S>, _: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let (n, y) = (c.n, c.y());
    let p = &c.cv(Hashiguchi)?.p;
    let dht = c.d(Hashiguchi, Op::T(Hashiguchi), H)?;
    for ix in idx(n, 3) {
        let (x, z, i) = (ix[0], ix[1], ix[2]);
        acc.add(
            Terms::new()
                .p(sm(n, |m| y[m] * p.at(&[m, x, z, i])))
                .p(eta_last(y, &dht, &[x, z, i])),
        );
        acc.zero(sm(n, |m| y[m] * p.at(&[x, m, z, i])));
    }
    Ok(())
}

fn s4_f<S: Scalar>(c: &PointContext<S>, _: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let n = c.n;
    let cv = c.cv(Hashiguchi)?;
    let tv = c.cartan();
    let dvr = c.d(Hashiguchi, Op::R(Hashiguchi), V)?;
    let dhp = c.d(Hashiguchi, Op::P(Hashiguchi), H)?;
    for ix in idx(n, 5) {
        let (x, y, z, w, i) = (ix[0], ix[1], ix[2], ix[3], ix[4]);
        acc.add(
            Terms::new()
                .p(dvr.at(&[y, z, w, i, x]))
                .p(dhp.at(&[z, x, w, i, y]))
                .m(dhp.at(&[y, x, w, i, z]))
                .p(sm(n, |m| tv.t.at(&[x, y, m]) * cv.r.at(&[m, z, w, i])))
                .m(sm(n, |m| tv.rhat.at(&[y, z, m]) * cv.s.at(&[m, x, w, i])))
                .m(sm(n, |m| tv.t.at(&[x, z, m]) * cv.r.at(&[m, y, w, i]))),
        );
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Comparison tables

/// Torsion row of the comparison table: `Q = 0`, `Ŝ = 0`, `R̂` common, and the
/// (h)hv- and (v)hv-torsions equal to Cartan's `T`, `P̂` or zero.
fn x1_torsion<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let tv = c.tv(k);
    let ca = c.cartan();
    let (has_t, has_phat) = match k {
        Cartan => (true, true),
        Chern => (false, true),
        Hashiguchi => (true, false),
        Berwald => (false, false),
    };
    zero_all(&tv.q, acc);
    zero_all(&tv.shat, acc);
    for i in tv.t.indices() {
        let et = if has_t { ca.t.at(&i) } else { S::zero() };
        let ep = if has_phat { ca.phat.at(&i) } else { S::zero() };
        acc.eq(tv.t.at(&i), et);
        acc.eq(tv.phat.at(&i), ep);
        acc.eq(tv.rhat.at(&i), ca.rhat.at(&i));
    }
    Ok(())
}

fn x1_vcurv<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let s = &c.cv(k)?.s;
    let cs = &c.cv(Cartan)?.s;
    let same = matches!(k, Cartan | Hashiguchi);
    for i in s.indices() {
        acc.eq(s.at(&i), if same { cs.at(&i) } else { S::zero() });
    }
    Ok(())
}

/// `K(A,B)e_j` from nested covariant derivatives of the basis fields.
fn nested<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, a: usize, b: usize, j: usize, i: usize) -> Result<S, JetError> {
    let n = c.n;
    let (da, db) = (if a < n { H } else { V }, if b < n { H } else { V });
    let (pa, pb) = (a % n, b % n);
    let ab = c.d(k, Op::Basis(k, db), da)?; // D_A (D_B e_j)
    let ba = c.d(k, Op::Basis(k, da), db)?; // D_B (D_A e_j)
    let br = c.bracket(a, b)?;
    let (h, v) = (c.bundle(k).data.h.values(), c.bundle(k).data.v.values());
    let bracket = sm(n, |m| br.rho[m] * h.at(&[i, j, m]) + br.kappa[m] * v.at(&[i, j, m]));
    Ok(-ab.at(&[j, pb, i, pa]) + ba.at(&[j, pa, i, pb]) + bracket)
}

fn x2_cartan<S: Scalar>(c: &PointContext<S>, which: char, acc: &mut Acc<S>) -> Res {
    let n = c.n;
    let cv = c.cv(Cartan)?;
    let (t, shift_a, shift_b) = match which {
        'R' => (&cv.r, 0, 0),
        'P' => (&cv.p, 0, n),
        _ => (&cv.s, n, n),
    };
    for ix in idx(n, 4) {
        let (kk, l, j, i) = (ix[0], ix[1], ix[2], ix[3]);
        acc.eq(t.at(&ix), nested(c, Cartan, kk + shift_a, l + shift_b, j, i)?);
    }
    Ok(())
}

fn x2_cartan_r<S: Scalar>(c: &PointContext<S>, _: ConnectionKind, acc: &mut Acc<S>) -> Res {
    x2_cartan(c, 'R', acc)
}

fn x2_cartan_p<S: Scalar>(c: &PointContext<S>, _: ConnectionKind, acc: &mut Acc<S>) -> Res {
    x2_cartan(c, 'P', acc)
}

fn x2_cartan_s<S: Scalar>(c: &PointContext<S>, _: ConnectionKind, acc: &mut Acc<S>) -> Res {
    x2_cartan(c, 'S', acc)
}

fn x2_s<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, acc: &mut Acc<S>) -> Res {
    x1_vcurv(c, k, acc)
}

/// `𝔘_{X,Y}{(∇_βX P̂)(Y,Z) + P̂(X,P̂(Y,Z))}^i`
fn u_phat<S: Scalar>(c: &PointContext<S>, dhp: &PiTensor<S>, x: usize, y: usize, z: usize, i: usize) -> S {
    let n = c.n;
    let ph = &c.cartan().phat;
    interchange(x, y, |a, b| dhp.at(&[b, z, i, a]) + sm(n, |m| ph.at(&[b, z, m]) * ph.at(&[a, m, i])))
}

fn x2_p<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let n = c.n;
    let pk = &c.cv(k)?.p;
    let p = &c.cv(Cartan)?.p;
    let tv = c.cartan();
    let (t, ph) = (&tv.t, &tv.phat);
    let dht = c.d(Cartan, Op::T(Cartan), H)?;
    let dvp = c.d(Cartan, Op::Phat(Cartan), V)?;
    for ix in idx(n, 4) {
        let (x, y, z, i) = (ix[0], ix[1], ix[2], ix[3]);
        let mut terms = Terms::new().p(pk.at(&ix)).m(p.at(&ix));
        match k {
            Chern => {
                terms = terms
                    .p(sm(n, |m| ph.at(&[x, y, m]) * t.at(&[m, z, i])))
                    .m(dht.at(&[y, z, i, x]));
            }
            Hashiguchi => {
                terms = terms
                    .m(sm(n, |m| t.at(&[x, y, m]) * ph.at(&[m, z, i])))
                    .m(dvp.at(&[x, z, i, y]));
            }
            Berwald => {
                terms = terms
                    .m(dvp.at(&[x, z, i, y]))
                    .m(sm(n, |m| t.at(&[y, x, m]) * ph.at(&[m, z, i])))
                    .m(sm(n, |m| t.at(&[y, z, m]) * ph.at(&[x, m, i])))
                    .m(dht.at(&[y, z, i, x]))
                    .p(sm(n, |m| ph.at(&[x, z, m]) * t.at(&[y, m, i])))
                    .p(sm(n, |m| ph.at(&[x, y, m]) * t.at(&[m, z, i])));
            }
            Cartan => {}
        }
        acc.add(terms);
    }
    Ok(())
}

fn x2_r<S: Scalar>(c: &PointContext<S>, k: ConnectionKind, acc: &mut Acc<S>) -> Res {
    let n = c.n;
    let rk = &c.cv(k)?.r;
    let r = &c.cv(Cartan)?.r;
    let tv = c.cartan();
    let dhp = c.d(Cartan, Op::Phat(Cartan), H)?;
    let (with_t, with_u) = match k {
        Chern => (true, false),
        Hashiguchi => (false, true),
        Berwald => (true, true),
        Cartan => (false, false),
    };
    for ix in idx(n, 4) {
        let (x, y, z, i) = (ix[0], ix[1], ix[2], ix[3]);
        let mut terms = Terms::new().p(rk.at(&ix)).m(r.at(&ix));
        if with_t {
            terms = terms.p(sm(n, |m| tv.rhat.at(&[x, y, m]) * tv.t.at(&[m, z, i])));
        }
        if with_u {
            terms = terms.p(u_phat(c, &dhp, x, y, z, i));
        }
        acc.add(terms);
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Registration

struct Builder {
    out: Vec<IdentityDescriptor>,
}

impl Builder {
    #[allow(clippy::too_many_arguments)]
    fn add(
        &mut self,
        id: &str,
        topic: &str,
        statement: &str,
        connection: Option<ConnectionKind>,
        guard: Guard,
        order: usize,
        eval: Evaluator,
    ) {
        self.out.push(IdentityDescriptor {
            id: id.to_string(),
            topic: topic.to_string(),
            statement: statement.to_string(),
            connection,
            guard,
            order,
            probe: false,
            eval,
        });
    }

    fn one(&mut self, id: &str, k: ConnectionKind, topic: &str, statement: &str, order: usize, eval: Evaluator) {
        self.add(id, topic, statement, Some(k), Guard::Always, order, eval);
    }

    fn each(&mut self, id: &str, topic: &str, statement: &str, order: usize, eval: Evaluator) {
        for k in ConnectionKind::ALL {
            self.add(&format!("{id}.{k}"), topic, statement, Some(k), Guard::Always, order, eval);
        }
    }
}

/// Lowest truncation order for which Berwald-type curvatures carry a derivative.
const O_BASE: usize = 4;
const O_CURV: usize = 5;
const O_DCURV: usize = 6;

pub(super) fn build() -> Vec<IdentityDescriptor> {
    let mut b = Builder { out: Vec::new() };

    // Spray and Barthel connection
    b.add("N.spray", "spray of L", "i_G Ω + dE = 0", None, Guard::Always, O_BASE, ev!(n_spray));
    b.add(
        "N.homogeneity",
        "spray and Barthel connection",
        "N^i_j y^j = 2G^i, (∂N^i_j/∂y^k) y^k = N^i_j",
        None,
        Guard::Always,
        O_BASE,
        ev!(n_homogeneity),
    );
    b.add(
        "N.torsion",
        "Barthel connection is torsion-free",
        "∂N^i_j/∂y^k = ∂N^i_k/∂y^j",
        None,
        Guard::Always,
        O_BASE,
        ev!(n_symmetric),
    );
    b.add(
        "N.conservative",
        "Barthel connection is conservative",
        "d_h E = 0, i.e. δ_k L = 0",
        None,
        Guard::Always,
        O_BASE,
        ev!(n_conservative),
    );
    b.each(
        "N.deflection",
        "regular connection: horizontal deflection is the Barthel connection",
        "D_βX η = 0, i.e. H^i_jk y^j = N^i_k",
        O_BASE,
        ev!(n_deflection),
    );
    b.each(
        "N.vdeflection",
        "regular connection: vertical deflection is the identity",
        "D_γX η = X, i.e. V^i_jk y^j = 0",
        O_BASE,
        ev!(n_vertical),
    );

    // General regular connections
    b.each(
        "G0.a",
        "bracket of horizontal lifts",
        "[βX, βY] = γR̂(X,Y) + β(D_βX Y − D_βY X − Q(X,Y))",
        O_BASE,
        ev!(g0_a),
    );
    b.each(
        "G0.b",
        "bracket of vertical and horizontal lifts",
        "[γX, βY] = −γ(P̂(Y,X) + D_βY X) + β(D_γX Y − T(X,Y))",
        O_BASE,
        ev!(g0_b),
    );
    b.each(
        "G0.c",
        "bracket of vertical lifts",
        "[γX, γY] = γ(D_γX Y − D_γY X + Ŝ(X,Y))",
        O_BASE,
        ev!(g0_c),
    );
    b.each(
        "G1.a",
        "v-curvature from torsions",
        "S(X,Y)Z = (D_γY T)(X,Z) − (D_γX T)(Y,Z) + T(X,T(Y,Z)) − T(Y,T(X,Z)) + T(Ŝ(X,Y),Z)",
        O_CURV,
        ev!(g1_a),
    );
    b.each(
        "G1.b",
        "hv-curvature from torsions",
        "P(X,Y)Z − P(Z,Y)X = (D_βZ T)(Y,X) − (D_βX T)(Y,Z) − (D_γY Q)(X,Z) − T(Y,Q(X,Z)) − T(P̂(Z,Y),X) + T(P̂(X,Y),Z) − Q(Z,T(Y,X)) + Q(X,T(Y,Z))",
        O_CURV,
        ev!(g1_b),
    );
    b.each(
        "G1.c",
        "first Bianchi identity, h-curvature",
        "𝔖_{X,Y,Z}{R(X,Y)Z − T(R̂(X,Y),Z)} = 𝔖_{X,Y,Z}{Q(X,Q(Y,Z)) − (D_βX Q)(Y,Z)}",
        O_CURV,
        ev!(g1_c),
    );
    b.each(
        "G2.a",
        "second Bianchi identity, vv",
        "𝔖_{X,Y,Z}{(D_γX S)(Y,Z,W) − S(Ŝ(X,Y),Z)W} = 0",
        O_DCURV,
        ev!(g2_a),
    );
    b.each(
        "G2.b",
        "second Bianchi identity, hvv",
        "(D_βZ S)(X,Y,W) − (D_γX P)(Z,Y,W) + (D_γY P)(Z,X,W) = P(T(X,Z),Y)W − P(T(Y,Z),X)W − P(Z,Ŝ(X,Y))W + S(P̂(Z,X),Y)W − S(P̂(Z,Y),X)W",
        O_DCURV,
        ev!(g2_b),
    );
    b.each(
        "G2.c",
        "second Bianchi identity, hhv",
        "(D_γX R)(Y,Z,W) + (D_βY P)(Z,X,W) − (D_βZ P)(Y,X,W) = P(Z,P̂(Y,X))W − P(Y,P̂(Z,X))W − P(Q(Y,Z),X)W + R(T(X,Z),Y)W − R(T(X,Y),Z)W + S(R̂(Y,Z),X)W",
        O_DCURV,
        ev!(g2_c),
    );
    b.each(
        "G2.d",
        "second Bianchi identity, hhh",
        "𝔖_{X,Y,Z}{(D_βX R)(Y,Z,W) + P(X,R̂(Y,Z))W + R(Q(X,Y),Z)W} = 0",
        O_DCURV,
        ev!(g2_d),
    );
    b.each(
        "G3.a",
        "first Bianchi identity on TM",
        "𝔖_{X,Y,Z}{K(X,Y)ρZ + D_X T(Y,Z) + T(X,[Y,Z])} = 0",
        O_CURV,
        ev!(g3_a),
    );
    b.each(
        "G3.b",
        "second Bianchi identity on TM",
        "𝔖_{X,Y,Z}{D_Z K(X,Y)W − K(X,Y)D_Z W − K([X,Y],Z)W} = 0",
        O_DCURV,
        ev!(g3_b),
    );
    b.each(
        "G3.c",
        "curvature and metricity",
        "g(K(X,Y)Z,W) + g(K(X,Y)W,Z) = 𝔘_{X,Y}{(D_X(D_Y g))(W,Z)} − (D_[X,Y] g)(W,Z)",
        O_CURV,
        ev!(g3_c),
    );

    // Cartan connection
    let k = Cartan;
    b.one("C0.metric", k, "Cartan connection is metric", "∇g = 0", O_BASE, ev!(c0_metric));
    b.one("C0.hh", k, "Cartan (h)h-torsion vanishes", "Q = 0", O_BASE, ev!(q_zero));
    b.one(
        "C0.hv",
        k,
        "Cartan (h)hv-torsion is symmetric",
        "g(T(X,Y),Z) = g(T(X,Z),Y)",
        O_BASE,
        ev!(t_low_symmetric),
    );
    b.one("C1.a", k, "Cartan tensor", "T(X,Y,Z) = T(X,Z,Y)", O_BASE, ev!(t_low_symmetric));
    b.one(
        "C1.b",
        k,
        "Cartan tensor",
        "(∇_W T)(X,Y,Z) = g((∇_W T)(X,Y),Z) = g((∇_W T)(X,Z),Y)",
        O_CURV,
        ev!(c1_b),
    );
    b.one("C1.c", k, "Cartan tensor", "T(X,η) = 0", O_BASE, ev!(t_eta));
    b.one("C1.d", k, "Cartan tensor", "(∇_γX T)(Y,Z) = (∇_γY T)(X,Z)", O_BASE, ev!(c1_d));
    b.one("C1.e", k, "Cartan tensor", "(∇_γη T)(X,Y) = −T(X,Y)", O_BASE, ev!(c1_e));
    b.one("C1.f", k, "Cartan tensor", "T(X,Y,Z) is totally symmetric", O_BASE, ev!(c1_f));
    b.one("C2.a", k, "Cartan v-curvature", "S(X,Y,Z,W) = −S(Y,X,Z,W)", O_CURV, ev!(s_antisym_first));
    b.one("C2.b", k, "Cartan v-curvature", "S(X,Y,Z,W) = −S(X,Y,W,Z)", O_CURV, ev!(s_antisym_last));
    b.one("C2.c", k, "Cartan v-curvature", "S(X,Y)Z = T(X,T(Y,Z)) − T(Y,T(X,Z))", O_CURV, ev!(c2_c));
    b.one(
        "C2.d",
        k,
        "Cartan v-curvature",
        "S(X,Y,Z,W) = g(T(X,W),T(Y,Z)) − g(T(Y,W),T(X,Z))",
        O_CURV,
        ev!(s_lowered_formula),
    );
    b.one("C2.e", k, "Cartan v-curvature", "S(Z,W,X,Y) = S(X,Y,Z,W)", O_CURV, ev!(c2_e));
    b.one("C2.f", k, "Cartan v-curvature", "S(X,η)Y = S(η,X)Y = Ŝ(X,Y) = 0", O_CURV, ev!(s_eta));
    b.one("C2.g", k, "Cartan v-curvature", "𝔖_{X,Y,Z}(∇_γX S)(Y,Z,W) = 0", O_DCURV, ev!(s_cyclic_dv));
    b.one("C2.h", k, "Cartan v-curvature", "𝔖_{X,Y,Z} S(X,Y)Z = 0", O_CURV, ev!(c2_h));
    b.one("C2.i", k, "Cartan v-curvature", "(∇_γη S)(X,Y,Z) = −2S(X,Y)Z", O_DCURV, ev!(s_eta_derivative));
    b.one(
        "C2.j",
        k,
        "Cartan v-curvature",
        "(∇_βZ S)(X,Y,W) = (∇_γX P)(Z,Y,W) − (∇_γY P)(Z,X,W) − S(P̂(Z,Y),X)W + S(P̂(Z,X),Y)W − P(T(Y,Z),X)W + P(T(X,Z),Y)W",
        O_DCURV,
        ev!(ds_mixed),
    );
    b.one("C3.a", k, "Cartan hv-curvature", "P(X,Y,Z,W) = −P(X,Y,W,Z)", O_CURV, ev!(p_antisym_last));
    b.one(
        "C3.b",
        k,
        "Cartan hv-curvature",
        "P(X,Y)Z − P(Z,Y)X = (∇_βZ T)(Y,X) − (∇_βX T)(Y,Z) − T(P̂(Z,Y),X) + T(P̂(X,Y),Z)",
        O_CURV,
        ev!(c3_b),
    );
    b.one(
        "C3.c",
        k,
        "Cartan hv-curvature",
        "P(X,Y,Z,W) = g((∇_βZ T)(X,Y),W) − g((∇_βW T)(X,Y),Z) + g(T(X,Z),P̂(W,Y)) − g(T(X,W),P̂(Z,Y))",
        O_CURV,
        ev!(c3_c),
    );
    b.one("C3.d", k, "Cartan (v)hv-torsion", "P̂(η,X) = 0", O_BASE, ev!(phat_eta));
    b.one("C3.e", k, "Cartan (v)hv-torsion", "P̂(X,Y) = (∇_βη T)(X,Y)", O_BASE, ev!(phat_is_dt));
    b.one("C3.f", k, "Cartan (v)hv-torsion", "P̂(X,Y) = P̂(Y,X)", O_BASE, ev!(phat_symmetric));
    b.one("C3.g", k, "Cartan hv-curvature", "P(η,X)Y = P(X,η)Y = 0", O_CURV, ev!(c3_g));
    b.one("C3.h", k, "Cartan hv-curvature", "(∇_γη P)(X,Y,Z) = −P(X,Y)Z", O_DCURV, ev!(p_eta_derivative));
    b.one("C3.i", k, "Cartan hv-curvature", "P(X,Y)Z = P(Y,X)Z − (∇_βη S)(X,Y,Z)", O_DCURV, ev!(c3_i));
    b.one("C4.a", k, "Cartan h-curvature", "R(X,Y,Z,W) = −R(Y,X,Z,W)", O_CURV, ev!(r_antisym_first));
    b.one("C4.b", k, "Cartan h-curvature", "R(X,Y,Z,W) = −R(X,Y,W,Z)", O_CURV, ev!(r_antisym_last));
    b.one("C4.c", k, "Cartan (v)h-torsion", "R̂(X,Y) = −K𝕽(βX,βY)", O_BASE, ev!(rhat_barthel));
    b.one(
        "C4.d",
        k,
        "Cartan h-curvature",
        "𝔖_{X,Y,Z}{R(X,Y)Z − T(R̂(X,Y),Z)} = 0",
        O_CURV,
        ev!(r_bianchi_t),
    );
    b.one(
        "C4.e",
        k,
        "Cartan h-curvature",
        "𝔖_{X,Y,Z}{(∇_βX R)(Y,Z,W) + P(X,R̂(Y,Z))W} = 0",
        O_DCURV,
        ev!(r_bianchi_second),
    );
    b.one(
        "C4.f",
        k,
        "Cartan h-curvature",
        "(∇_γX R)(Y,Z,W) + (∇_βY P)(Z,X,W) − (∇_βZ P)(Y,X,W) − P(Z,P̂(Y,X))W + R(T(X,Y),Z)W − S(R̂(Y,Z),X)W + P(Y,P̂(Z,X))W − R(T(X,Z),Y)W = 0",
        O_DCURV,
        ev!(c4_f),
    );
    b.one("C4.g", k, "Cartan h-curvature", "(∇_γη R)(X,Y,Z) = 0", O_DCURV, ev!(r_eta_derivative));

    // Berwald connection
    let k = Berwald;
    b.one("B0.hL", k, "Berwald connection", "D°_hX L = 0", O_BASE, ev!(hl_zero));
    b.one("B0.torsion", k, "Berwald connection", "T° = 0 (Q° = 0 and T°(X,Y) = 0)", O_BASE, ev!(torsion_free));
    b.one("B0.phat", k, "Berwald connection", "P̂° = 0", O_BASE, ev!(phat_zero));
    b.one("B0.v", k, "Berwald connection vs Cartan", "D°_γX Y = ∇_γX Y − T(X,Y)", O_BASE, ev!(v_counterpart));
    b.one("B0.h", k, "Berwald connection vs Cartan", "D°_βX Y = ∇_βX Y + P̂(X,Y)", O_BASE, ev!(h_counterpart));
    b.one("B1.a", k, "Berwald metricity", "(D°_γX g)(Y,Z) = 2T(X,Y,Z)", O_BASE, ev!(metricity_v));
    b.one("B1.b", k, "Berwald metricity", "(D°_βX g)(Y,Z) = −2P̂(X,Y,Z)", O_BASE, ev!(metricity_h));
    b.one("B2", k, "Berwald v-curvature", "S° = 0", O_CURV, ev!(s_zero));
    b.one("B3.a", k, "Berwald hv-curvature", "P̂° = 0", O_BASE, ev!(phat_zero));
    b.one(
        "B3.b",
        k,
        "Berwald hv-curvature",
        "P°(X,Y,Z,W) + P°(X,Y,W,Z) = 2(D°_βX T)(Y,Z,W) + 2(D°_γY P̂)(X,Z,W)",
        O_CURV,
        ev!(b3_b),
    );
    b.one("B3.c", k, "Berwald hv-curvature", "P°(X,Y)Z = P°(Z,Y)X", O_CURV, ev!(p_swap13));
    b.one("B3.d", k, "Berwald hv-curvature", "(D°_γX P°)(Y,Z,W) = (D°_γZ P°)(Y,X,W)", O_DCURV, ev!(b3_d));
    b.one("B3.e", k, "Berwald hv-curvature", "P°(X,Y)Z is totally symmetric", O_CURV, ev!(b3_e));
    b.one("B3.f", k, "Berwald hv-curvature", "(D°_γη P°)(X,Y,Z) = −P°(X,Y)Z", O_DCURV, ev!(p_eta_derivative));
    b.out.push(IdentityDescriptor {
        id: "B3.f.literal".into(),
        topic: "Berwald hv-curvature".into(),
        statement: "(D°_γη P°)(X,Y,Z) = −P°(X,Y)Y".into(),
        connection: Some(Berwald),
        guard: Guard::Always,
        order: O_DCURV,
        probe: true,
        eval: ev!(b3_f_literal),
    });
    b.one("B4.a", k, "Berwald h-curvature", "R°(X,Y,Z,W) = −R°(Y,X,Z,W)", O_CURV, ev!(r_antisym_first));
    b.one("B4.b", k, "Berwald (v)h-torsion", "R̂° = R̂ = −K𝕽(βX,βY)", O_BASE, ev!(rhat_barthel));
    b.one(
        "B4.c",
        k,
        "Berwald h-curvature",
        "R°(X,Y,Z,W) + R°(X,Y,W,Z) = 2𝔘_{X,Y}{(D°_βY P̂)(X,Z,W)} − 2T(R̂(X,Y),Z,W)",
        O_CURV,
        ev!(b4_c),
    );
    b.one("B4.d", k, "Berwald h-curvature", "𝔖_{X,Y,Z} R°(X,Y)Z = 0", O_CURV, ev!(r_first_bianchi));
    b.one(
        "B4.e",
        k,
        "Berwald h-curvature",
        "𝔖_{X,Y,Z}{(D°_βX R°)(Y,Z,W) + P°(X,R̂(Y,Z))W} = 0",
        O_DCURV,
        ev!(r_bianchi_second),
    );
    b.one(
        "B4.f",
        k,
        "Berwald h-curvature",
        "(D°_γX R°)(Y,Z,W) = (D°_βZ P°)(Y,X,W) − (D°_βY P°)(Z,X,W)",
        O_DCURV,
        ev!(b4_f),
    );
    b.one("B4.g", k, "Berwald h-curvature", "(D°_γη R°)(X,Y,Z) = 0", O_DCURV, ev!(r_eta_derivative));
    b.one(
        "B4.h",
        k,
        "Berwald (v)h-torsion",
        "R̂°(X,Y) = ⅓{(D°_γX H)(Y) − (D°_γY H)(X)}, H(X) = R̂°(η,X)",
        O_CURV,
        ev!(b4_h),
    );
    b.one("B4.i", k, "Berwald h-curvature", "R°(X,Y)Z = (D°_γZ R̂°)(X,Y)", O_CURV, ev!(b4_i));
    b.add(
        "B5.flat",
        "vanishing of the Barthel curvature",
        "𝕽 = 0, R° = 0, R̂° = 0, R̂ = 0, H = 0 together",
        Some(Berwald),
        Guard::LocallyMinkowski,
        O_CURV,
        ev!(b5_flat),
    );
    b.add(
        "B5.curved",
        "vanishing of the Barthel curvature",
        "𝕽, R°, R̂°, R̂, H are all nonzero together",
        Some(Berwald),
        Guard::RoundSphere,
        O_CURV,
        ev!(b5_curved),
    );

    // Chern connection
    let k = Chern;
    b.one(
        "H0.metric",
        k,
        "Chern connection",
        "(D◇_X g)(ρY,ρZ) = 2g(T(KX,ρY),ρZ)",
        O_BASE,
        ev!(metricity_both),
    );
    b.one("H0.torsion", k, "Chern connection", "T◇ = 0 (Q◇ = 0 and T◇(X,Y) = 0)", O_BASE, ev!(torsion_free));
    b.one("H0.v", k, "Chern connection vs Cartan", "D◇_γX Y = ∇_γX Y − T(X,Y) = D°_γX Y", O_BASE, ev!(v_counterpart));
    b.one("H0.h", k, "Chern connection vs Cartan", "D◇_βX Y = ∇_βX Y = D°_βX Y − P̂(X,Y)", O_BASE, ev!(h_counterpart));
    b.one("H1.a", k, "Chern metricity", "(D◇_γX g)(Y,Z) = 2T(X,Y,Z)", O_BASE, ev!(metricity_v));
    b.one("H1.b", k, "Chern metricity", "D◇_βX g = 0", O_BASE, ev!(metricity_h));
    b.one("H2", k, "Chern v-curvature", "S◇ = 0", O_CURV, ev!(s_zero));
    b.one(
        "H3.a",
        k,
        "Chern hv-curvature",
        "P◇(X,Y,Z,W) + P◇(X,Y,W,Z) = 2(D◇_βX T)(Y,Z,W) − 2T(P̂◇(X,Y),Z,W)",
        O_CURV,
        ev!(h3_a),
    );
    b.one("H3.b", k, "Chern hv-curvature", "P◇(X,Y)Z = P◇(Z,Y)X", O_CURV, ev!(p_swap13));
    b.one(
        "H3.c",
        k,
        "Chern hv-curvature",
        "P◇(X,Y,Z,W) = (D◇_βX T)(Y,Z,W) + (D◇_βZ T)(Y,W,X) − (D◇_βW T)(Y,X,Z) + T(P̂◇(W,Y),X,Z) − T(P̂◇(X,Y),Z,W) − T(P̂◇(Z,Y),W,X)",
        O_CURV,
        ev!(h3_c),
    );
    b.one("H3.d", k, "Chern (v)hv-torsion", "P̂◇(η,X) = 0", O_BASE, ev!(phat_eta));
    b.one("H3.e", k, "Chern (v)hv-torsion", "P̂◇(X,Y) = P̂(X,Y) = (D◇_βη T)(X,Y)", O_BASE, ev!(chern_phat_is_cartan));
    b.one("H3.f", k, "Chern (v)hv-torsion", "P̂◇(X,Y) = P̂◇(Y,X)", O_BASE, ev!(phat_symmetric));
    b.one(
        "H3.g",
        k,
        "Chern hv-curvature",
        "P◇(X,η)Y = 0, P◇(η,X)Y = (D◇_βη T)(X,Y)",
        O_CURV,
        ev!(h3_g),
    );
    b.one("H3.h", k, "Chern hv-curvature", "(D◇_γX P◇)(Z,Y,W) = (D◇_γY P◇)(Z,X,W)", O_DCURV, ev!(h3_h));
    b.one("H3.i", k, "Chern hv-curvature", "(D◇_γη P◇)(X,Y,Z) = −P◇(X,Y)Z", O_DCURV, ev!(p_eta_derivative));
    b.add(
        "H4",
        "joint vanishing of hv-quantities",
        "P = 0 ⟺ P̂ = 0 ⟺ P̂◇ = 0",
        Some(Chern),
        Guard::BerwaldRegime,
        O_CURV,
        ev!(h4),
    );
    b.one("H5.a", k, "Chern h-curvature", "R◇(X,Y,Z,W) = −R◇(Y,X,Z,W)", O_CURV, ev!(r_antisym_first));
    b.one("H5.b", k, "Chern (v)h-torsion", "R̂◇ = R̂ = −K𝕽(βX,βY)", O_BASE, ev!(rhat_barthel));
    b.one(
        "H5.c",
        k,
        "Chern h-curvature",
        "R◇(X,Y,Z,W) = −R◇(X,Y,W,Z) − 2T(R̂(X,Y),Z,W)",
        O_CURV,
        ev!(h5_c),
    );
    b.one("H5.d", k, "Chern h-curvature", "𝔖_{X,Y,Z} R◇(X,Y)Z = 0", O_CURV, ev!(r_first_bianchi));
    b.one(
        "H5.e",
        k,
        "Chern h-curvature",
        "𝔖_{X,Y,Z}{(D◇_βX R◇)(Y,Z,W) + P◇(X,R̂(Y,Z))W} = 0",
        O_DCURV,
        ev!(r_bianchi_second),
    );
    b.one(
        "H5.f",
        k,
        "Chern h-curvature",
        "(D◇_γX R◇)(Y,Z,W) + (D◇_βY P◇)(Z,X,W) − (D◇_βZ P◇)(Y,X,W) − P◇(Z,P̂(Y,X))W + P◇(Y,P̂(Z,X))W = 0",
        O_DCURV,
        ev!(h5_f),
    );
    b.one("H5.g", k, "Chern h-curvature", "(D◇_γη R◇)(X,Y,Z) = 0", O_DCURV, ev!(r_eta_derivative));

    // Hashiguchi connection
    let k = Hashiguchi;
    b.one("S0.vmetric", k, "Hashiguchi connection", "D*_γX g = 0", O_BASE, ev!(metricity_v));
    b.one("S0.hv", k, "Hashiguchi connection", "g(T*(X,Y),Z) = g(T*(X,Z),Y)", O_BASE, ev!(t_low_symmetric));
    b.one("S0.hh", k, "Hashiguchi connection", "Q* = 0", O_BASE, ev!(q_zero));
    b.one("S0.phat", k, "Hashiguchi connection", "P̂* = 0", O_BASE, ev!(phat_zero));
    b.one("S0.hL", k, "Hashiguchi connection", "D*_hX L = 0", O_BASE, ev!(hl_zero));
    b.one("S0.t", k, "Hashiguchi connection", "T* = T", O_BASE, ev!(s0_t));
    b.one(
        "S0.v",
        k,
        "Hashiguchi connection vs Cartan and Berwald",
        "D*_γX Y = ∇_γX Y = D°_γX Y + T(X,Y)",
        O_BASE,
        ev!(v_counterpart),
    );
    b.one(
        "S0.h",
        k,
        "Hashiguchi connection vs Cartan and Berwald",
        "D*_βX Y = ∇_βX Y + P̂(X,Y) = D°_βX Y",
        O_BASE,
        ev!(h_counterpart),
    );
    b.one(
        "S0.berwald",
        k,
        "Hashiguchi connection vs Berwald",
        "D*_X Y = D°_X Y + T(KX,Y)",
        O_BASE,
        ev!(hashiguchi_vs_berwald),
    );
    b.one("S1.a", k, "Hashiguchi metricity", "D*_γX g = 0", O_BASE, ev!(metricity_v));
    b.one("S1.b", k, "Hashiguchi metricity", "(D*_βX g)(Y,Z) = −2g(P̂(X,Y),Z)", O_BASE, ev!(metricity_h));
    b.one("S2.a", k, "Hashiguchi v-curvature", "S*(X,Y,Z,W) = −S*(Y,X,Z,W)", O_CURV, ev!(s_antisym_first));
    b.one("S2.b", k, "Hashiguchi v-curvature", "S*(X,Y,Z,W) = −S*(X,Y,W,Z)", O_CURV, ev!(s_antisym_last));
    b.one(
        "S2.c",
        k,
        "Hashiguchi v-curvature",
        "S*(X,Y,Z,W) = S(X,Y,Z,W) = g(T(X,W),T(Y,Z)) − g(T(Y,W),T(X,Z))",
        O_CURV,
        ev!(s2_c),
    );
    b.one("S2.d", k, "Hashiguchi v-curvature", "𝔖_{X,Y,Z}(D*_γX S)(Y,Z,W) = 0", O_DCURV, ev!(s_cyclic_dv));
    b.one("S2.e", k, "Hashiguchi v-curvature", "(D*_γη S)(X,Y,Z) = −2S(X,Y)Z", O_DCURV, ev!(s_eta_derivative));
    b.one(
        "S2.f",
        k,
        "Hashiguchi v-curvature",
        "(D*_βZ S)(X,Y,W) = (D*_γX P*)(Z,Y,W) − (D*_γY P*)(Z,X,W) − P*(T(Y,Z),X)W + P*(T(X,Z),Y)W",
        O_DCURV,
        ev!(ds_mixed),
    );
    b.one(
        "S3.a",
        k,
        "Hashiguchi hv-curvature",
        "P*(X,Y,Z,W) + P*(X,Y,W,Z) = 2(D*_γY P̂)(X,Z,W) + 2P̂(T(X,Y),Z,W)",
        O_CURV,
        ev!(s3_a),
    );
    b.one("S3.b", k, "Hashiguchi (v)hv-torsion", "P̂* = 0", O_BASE, ev!(phat_zero));
    b.one(
        "S3.c",
        k,
        "Hashiguchi hv-curvature",
        "P*(X,Y)Z − P*(Z,Y)X = (D*_βZ T)(Y,X) − (D*_βX T)(Y,Z)",
        O_CURV,
        ev!(s3_c),
    );
    b.one("S3.d", k, "Hashiguchi hv-curvature", "P*(X,Y)Z = P*(X,Z)Y", O_CURV, ev!(s3_d));
    b.one(
        "S3.e",
        k,
        "Hashiguchi hv-curvature",
        "P*(η,X)Y = −(D*_βη T)(X,Y), P*(X,η)Y = 0",
        O_CURV,
        ev!(s3_e),
    );
    b.one("S3.f", k, "Hashiguchi hv-curvature", "(D*_γη P*)(X,Y,Z) = −P*(X,Y)Z", O_DCURV, ev!(p_eta_derivative));
    b.one("S4.a", k, "Hashiguchi h-curvature", "R*(X,Y,Z,W) = −R*(Y,X,Z,W)", O_CURV, ev!(r_antisym_first));
    b.one(
        "S4.b",
        k,
        "Hashiguchi h-curvature",
        "R*(X,Y,Z,W) + R*(X,Y,W,Z) = 2𝔘_{X,Y}{(D*_βY P̂)(X,Z,W)}",
        O_CURV,
        ev!(s4_b),
    );
    b.one("S4.c", k, "Hashiguchi (v)h-torsion", "R̂* = R̂ = −K𝕽(βX,βY)", O_BASE, ev!(rhat_barthel));
    b.one(
        "S4.d",
        k,
        "Hashiguchi h-curvature",
        "𝔖_{X,Y,Z}{R*(X,Y)Z − T(R̂(X,Y),Z)} = 0",
        O_CURV,
        ev!(r_bianchi_t),
    );
    b.one(
        "S4.e",
        k,
        "Hashiguchi h-curvature",
        "𝔖_{X,Y,Z}{(D*_βX R*)(Y,Z,W) + P*(X,R̂(Y,Z))W} = 0",
        O_DCURV,
        ev!(r_bianchi_second),
    );
    b.one(
        "S4.f",
        k,
        "Hashiguchi h-curvature",
        "(D*_γX R*)(Y,Z,W) + (D*_βY P*)(Z,X,W) − (D*_βZ P*)(Y,X,W) + R*(T(X,Y),Z)W − S(R̂(Y,Z),X)W − R*(T(X,Z),Y)W = 0",
        O_DCURV,
        ev!(s4_f),
    );
    b.one("S4.g", k, "Hashiguchi h-curvature", "(D*_γη R*)(X,Y,Z) = 0", O_DCURV, ev!(r_eta_derivative));

    // Comparison tables
    b.each(
        "X1.vcoef",
        "comparison table: v-counterpart",
        "D_γX Y − ∇_γX Y ∈ {0, −T(X,Y), 0, −T(X,Y)} (Cartan, Chern, Hashiguchi, Berwald)",
        O_BASE,
        ev!(v_counterpart),
    );
    b.each(
        "X1.hcoef",
        "comparison table: h-counterpart",
        "D_βX Y − ∇_βX Y ∈ {0, 0, P̂(X,Y), P̂(X,Y)} (Cartan, Chern, Hashiguchi, Berwald)",
        O_BASE,
        ev!(h_counterpart),
    );
    b.each(
        "X1.torsion",
        "comparison table: torsions",
        "Q = 0, Ŝ = 0, R̂ = −K𝕽; T ∈ {T, 0, T, 0}; P̂ ∈ {P̂, P̂, 0, 0} (Cartan, Chern, Hashiguchi, Berwald)",
        O_BASE,
        ev!(x1_torsion),
    );
    b.each(
        "X1.vcurv",
        "comparison table: v-curvature",
        "S ∈ {S, 0, S, 0} (Cartan, Chern, Hashiguchi, Berwald)",
        O_CURV,
        ev!(x1_vcurv),
    );
    b.each(
        "X1.metric",
        "comparison table: metricity",
        "(D_γX g)(Y,Z) ∈ {0, 2T, 0, 2T}; (D_βX g)(Y,Z) ∈ {0, 0, −2P̂, −2P̂} (Cartan, Chern, Hashiguchi, Berwald)",
        O_BASE,
        ev!(metricity_both),
    );
    b.one(
        "X2.cartan.R",
        Cartan,
        "curvature table: Cartan h-curvature by nested derivatives",
        "R(X,Y)Z = −∇_βX ∇_βY Z + ∇_βY ∇_βX Z + ∇_[βX,βY] Z",
        O_CURV,
        ev!(x2_cartan_r),
    );
    b.one(
        "X2.cartan.P",
        Cartan,
        "curvature table: Cartan hv-curvature by nested derivatives",
        "P(X,Y)Z = −∇_βX ∇_γY Z + ∇_γY ∇_βX Z + ∇_[βX,γY] Z",
        O_CURV,
        ev!(x2_cartan_p),
    );
    b.one(
        "X2.cartan.S",
        Cartan,
        "curvature table: Cartan v-curvature by nested derivatives",
        "S(X,Y)Z = −∇_γX ∇_γY Z + ∇_γY ∇_γX Z + ∇_[γX,γY] Z",
        O_CURV,
        ev!(x2_cartan_s),
    );
    b.one("X2.chern.S", Chern, "curvature table: Chern", "S◇ = 0", O_CURV, ev!(x2_s));
    b.one(
        "X2.chern.P",
        Chern,
        "curvature table: Chern",
        "P◇(X,Y)Z = P(X,Y)Z − T(P̂(X,Y),Z) + (∇_βX T)(Y,Z)",
        O_CURV,
        ev!(x2_p),
    );
    b.one(
        "X2.chern.R",
        Chern,
        "curvature table: Chern",
        "R◇(X,Y)Z = R(X,Y)Z − T(R̂(X,Y),Z)",
        O_CURV,
        ev!(x2_r),
    );
    b.one("X2.hashiguchi.S", Hashiguchi, "curvature table: Hashiguchi", "S* = S", O_CURV, ev!(x2_s));
    b.one(
        "X2.hashiguchi.P",
        Hashiguchi,
        "curvature table: Hashiguchi",
        "P*(X,Y)Z = P(X,Y)Z + P̂(T(X,Y),Z) + (∇_γY P̂)(X,Z)",
        O_CURV,
        ev!(x2_p),
    );
    b.one(
        "X2.hashiguchi.R",
        Hashiguchi,
        "curvature table: Hashiguchi",
        "R*(X,Y)Z = R(X,Y)Z − 𝔘_{X,Y}{(∇_βX P̂)(Y,Z) + P̂(X,P̂(Y,Z))}",
        O_CURV,
        ev!(x2_r),
    );
    b.one("X2.berwald.S", Berwald, "curvature table: Berwald", "S° = 0", O_CURV, ev!(x2_s));
    b.one(
        "X2.berwald.P",
        Berwald,
        "curvature table: Berwald",
        "P°(X,Y)Z = P(X,Y)Z + (∇_γY P̂)(X,Z) + P̂(T(Y,X),Z) + P̂(X,T(Y,Z)) + (∇_βX T)(Y,Z) − T(Y,P̂(X,Z)) − T(P̂(X,Y),Z)",
        O_CURV,
        ev!(x2_p),
    );
    b.one(
        "X2.berwald.R",
        Berwald,
        "curvature table: Berwald",
        "R°(X,Y)Z = R(X,Y)Z − T(R̂(X,Y),Z) − 𝔘_{X,Y}{(∇_βX P̂)(Y,Z) + P̂(X,P̂(Y,Z))}",
        O_CURV,
        ev!(x2_r),
    );

    b.out
}
