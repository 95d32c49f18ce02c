//! Truncated multivariate Taylor series ("jets").
//!
//! A [`Jet`] stores the scaled partials `f_α = ∂^α f / α!` of a scalar function of
//! `2n` variables `(x¹..xⁿ, y¹..yⁿ)` at an expansion point, for every multi-index of
//! total degree at most the jet order.
//!
//! Coefficients are stored densely in graded-lexicographic order. Because the order is
//! graded, the coefficients of degree `≤ k` always form a prefix of the table, so a jet
//! of order `k` is the truncation of a jet of any higher order by slicing. Every
//! convolution sums its terms in one canonical order that does not depend on the jet
//! order, which gives the truncation guarantee: computing at order `K` and reading a
//! coefficient of degree `≤ K-1` is bit-identical to computing at order `K-1`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

use crate::scalar::Scalar;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JetError {
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },
    #[error("derivative order exceeds truncation: required order {required}, available {available}")]
    OrderShortfall { required: usize, available: usize },
    #[error("jets disagree on variable count ({0} vs {1})")]
    DimMismatch(usize, usize),
    #[error("multi-index has {got} slots, expected {expected}")]
    BadMultiIndex { got: usize, expected: usize },
}

/// Exponent vector over the `2n` jet variables: first `n` slots are the x-slots, last `n`
/// the y-slots.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(pub Vec<u8>);

impl MultiIndex {
    pub fn zero(nvars: usize) -> Self {
        MultiIndex(vec![0; nvars])
    }

    pub fn unit(nvars: usize, var: usize) -> Self {
        let mut e = vec![0; nvars];
        e[var] = 1;
        MultiIndex(e)
    }

    pub fn from_vars(nvars: usize, vars: &[usize]) -> Self {
        let mut e = vec![0u8; nvars];
        for &v in vars {
            e[v] += 1;
        }
        MultiIndex(e)
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    /// `α! = Π α_v!`
    pub fn factorial(&self) -> u64 {
        self.0
            .iter()
            .map(|&e| (1..=e as u64).product::<u64>())
            .product()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Index tables for dense graded-lex storage of jets in a fixed number of variables.
#[derive(Debug)]
pub struct Layout {
    nvars: usize,
    max_order: usize,
    exps: Vec<MultiIndex>,
    degree: Vec<u8>,
    count_upto: Vec<usize>,
    lookup: HashMap<MultiIndex, usize>,
    // CSR over output index γ: unordered pairs (a ≤ b) with exps[a] + exps[b] = exps[γ].
    pair_start: Vec<usize>,
    pairs: Vec<(u32, u32)>,
    // up[v][i] = index of exps[i] + e_v, or NONE beyond max_order.
    up: Vec<Vec<u32>>,
}

fn graded_lex(nvars: usize, degree: usize, out: &mut Vec<MultiIndex>) {
    fn rec(slot: usize, left: usize, cur: &mut Vec<u8>, out: &mut Vec<MultiIndex>) {
        if slot + 1 == cur.len() {
            cur[slot] = left as u8;
            out.push(MultiIndex(cur.clone()));
            return;
        }
        for e in (0..=left).rev() {
            cur[slot] = e as u8;
            rec(slot + 1, left - e, cur, out);
        }
    }
    let mut cur = vec![0u8; nvars];
    rec(0, degree, &mut cur, out);
}

fn binomial(n: usize, k: usize) -> usize {
    let k = k.min(n - k);
    let mut r = 1usize;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

impl Layout {
    fn build(nvars: usize, max_order: usize) -> Self {
        assert!(nvars >= 1, "jets need at least one variable");
        let mut exps = Vec::with_capacity(binomial(nvars + max_order, max_order));
        let mut count_upto = Vec::with_capacity(max_order + 1);
        for d in 0..=max_order {
            graded_lex(nvars, d, &mut exps);
            count_upto.push(exps.len());
        }
        let degree: Vec<u8> = exps.iter().map(|e| e.degree() as u8).collect();
        let lookup: HashMap<MultiIndex, usize> =
            exps.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();

        let mut buckets: Vec<Vec<(u32, u32)>> = vec![Vec::new(); exps.len()];
        for a in 0..exps.len() {
            for b in a..exps.len() {
                if degree[a] as usize + degree[b] as usize > max_order {
                    // b is graded, so later b only grow in degree
                    break;
                }
                let sum = MultiIndex(
                    exps[a].0.iter().zip(&exps[b].0).map(|(x, y)| x + y).collect(),
                );
                buckets[lookup[&sum]].push((a as u32, b as u32));
            }
        }
        let mut pair_start = Vec::with_capacity(exps.len() + 1);
        let mut pairs = Vec::new();
        for bucket in buckets {
            pair_start.push(pairs.len());
            pairs.extend(bucket);
        }
        pair_start.push(pairs.len());

        let up = (0..nvars)
            .map(|v| {
                exps.iter()
                    .map(|e| {
                        let mut f = e.clone();
                        f.0[v] += 1;
                        lookup.get(&f).map_or(NONE, |&i| i as u32)
                    })
                    .collect()
            })
            .collect();

        Layout {
            nvars,
            max_order,
            exps,
            degree,
            count_upto,
            lookup,
            pair_start,
            pairs,
            up,
        }
    }

    /// Shared layout for `nvars` variables up to `max_order`, built once per process.
    pub fn shared(nvars: usize, max_order: usize) -> Arc<Layout> {
        static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<Layout>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("layout cache poisoned");
        guard
            .entry((nvars, max_order))
            .or_insert_with(|| Arc::new(Layout::build(nvars, max_order)))
            .clone()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    /// Number of coefficients of a dense jet of order `k`, i.e. `C(nvars + k, k)`.
    pub fn len(&self, order: usize) -> usize {
        self.count_upto[order]
    }

    pub fn multi_index(&self, idx: usize) -> &MultiIndex {
        &self.exps[idx]
    }

    pub fn position(&self, alpha: &MultiIndex) -> Option<usize> {
        self.lookup.get(alpha).copied()
    }

    fn pairs_of(&self, out: usize) -> &[(u32, u32)] {
        &self.pairs[self.pair_start[out]..self.pair_start[out + 1]]
    }
}

/// Truncated Taylor expansion of a scalar function of `2n` variables.
#[derive(Clone)]
pub struct Jet<S> {
    layout: Arc<Layout>,
    order: usize,
    coeffs: Vec<S>,
}

impl<S: Scalar> fmt::Debug for Jet<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Jet")
            .field("nvars", &self.layout.nvars)
            .field("order", &self.order)
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

impl<S: Scalar> PartialEq for Jet<S> {
    fn eq(&self, other: &Self) -> bool {
        self.layout.nvars == other.layout.nvars
            && self.order == other.order
            && self.coeffs == other.coeffs
    }
}

/// Seeds the coordinate functions `x¹..xⁿ, y¹..yⁿ` at a point as jets of order `order`.
pub fn seed_variables<S: Scalar>(x: &[S], y: &[S], order: usize) -> Vec<Jet<S>> {
    assert_eq!(x.len(), y.len(), "x and y must have the same dimension");
    let nvars = x.len() + y.len();
    let layout = Layout::shared(nvars, order);
    x.iter()
        .chain(y)
        .enumerate()
        .map(|(v, &val)| Jet::variable(&layout, order, v, val))
        .collect()
}

impl<S: Scalar> Jet<S> {
    pub fn constant(layout: &Arc<Layout>, order: usize, value: S) -> Self {
        assert!(order <= layout.max_order);
        let mut coeffs = vec![S::zero(); layout.len(order)];
        coeffs[0] = value;
        Jet {
            layout: layout.clone(),
            order,
            coeffs,
        }
    }

    pub fn variable(layout: &Arc<Layout>, order: usize, var: usize, value: S) -> Self {
        let mut j = Self::constant(layout, order, value);
        if order >= 1 {
            // degree-1 block starts at index 1, in variable order
            j.coeffs[1 + var] = S::one();
        }
        j
    }

    /// Constant jet sharing this jet's layout and order.
    pub fn lift(&self, value: S) -> Self {
        Self::constant(&self.layout, self.order, value)
    }

    pub fn zero_like(&self) -> Self {
        self.lift(S::zero())
    }

    pub fn layout(&self) -> &Arc<Layout> {
        &self.layout
    }

    pub fn nvars(&self) -> usize {
        self.layout.nvars
    }

    /// Manifold dimension `n` (the jet has `2n` variables).
    pub fn dim(&self) -> usize {
        self.layout.nvars / 2
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn value(&self) -> S {
        self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn coefficient(&self, alpha: &MultiIndex) -> Result<S, JetError> {
        self.check_index(alpha)?;
        Ok(self.coeffs[self.layout.position(alpha).expect("index within layout")])
    }

    fn check_index(&self, alpha: &MultiIndex) -> Result<(), JetError> {
        if alpha.0.len() != self.nvars() {
            return Err(JetError::BadMultiIndex {
                got: alpha.0.len(),
                expected: self.nvars(),
            });
        }
        let d = alpha.degree();
        if d > self.order {
            return Err(JetError::OrderShortfall {
                required: d,
                available: self.order,
            });
        }
        Ok(())
    }

    /// Raw partial derivative `∂^α f = α! · f_α` at the expansion point.
    pub fn extract_partial(&self, alpha: &MultiIndex) -> Result<S, JetError> {
        let c = self.coefficient(alpha)?;
        Ok(S::int(alpha.factorial()) * c)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        Jet {
            layout: self.layout.clone(),
            order,
            coeffs: self.coeffs[..self.layout.len(order)].to_vec(),
        }
    }

    fn binary_layout<'a>(&'a self, other: &'a Self) -> (&'a Arc<Layout>, usize) {
        assert_eq!(
            self.layout.nvars, other.layout.nvars,
            "jets disagree on variable count"
        );
        let order = self.order.min(other.order);
        let layout = if self.layout.max_order >= other.layout.max_order {
            &self.layout
        } else {
            &other.layout
        };
        (layout, order)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(S, S) -> S) -> Self {
        let (layout, order) = self.binary_layout(other);
        let len = layout.len(order);
        Jet {
            layout: layout.clone(),
            order,
            coeffs: self.coeffs[..len]
                .iter()
                .zip(&other.coeffs[..len])
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, s: S) -> Self {
        Jet {
            layout: self.layout.clone(),
            order: self.order,
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
        }
    }

    fn mul_jet(&self, other: &Self) -> Self {
        let (layout, order) = self.binary_layout(other);
        let (a, b) = (&self.coeffs, &other.coeffs);
        let coeffs = (0..layout.len(order))
            .map(|out| {
                let mut acc = S::zero();
                for &(i, j) in layout.pairs_of(out) {
                    let (i, j) = (i as usize, j as usize);
                    acc = acc
                        + if i == j {
                            a[i] * b[i]
                        } else {
                            a[i] * b[j] + a[j] * b[i]
                        };
                }
                acc
            })
            .collect();
        Jet {
            layout: layout.clone(),
            order,
            coeffs,
        }
    }

    /// Visits the ordered splittings `α + β = γ` with `α ≠ 0` (so `β` precedes `γ`),
    /// in the canonical pair order.
    fn for_split(layout: &Layout, out: usize, mut visit: impl FnMut(usize, usize)) {
        for &(i, j) in layout.pairs_of(out) {
            let (i, j) = (i as usize, j as usize);
            if i != 0 {
                visit(i, j);
            }
            if i != j && j != 0 {
                visit(j, i);
            }
        }
    }

    fn domain(op: &'static str, detail: impl Into<String>) -> JetError {
        JetError::Domain {
            op,
            detail: detail.into(),
        }
    }

    /// `self / other`, solving `other · q = self` coefficient by coefficient.
    pub fn try_div(&self, other: &Self) -> Result<Self, JetError> {
        let b0 = other.value();
        if b0.is_zero() || !b0.is_finite() {
            return Err(Self::domain("div", "divisor has zero constant term"));
        }
        let (layout, order) = self.binary_layout(other);
        let layout = layout.clone();
        let len = layout.len(order);
        let mut q = vec![S::zero(); len];
        for out in 0..len {
            let mut acc = self.coeffs[out];
            Self::for_split(&layout, out, |alpha, beta| {
                acc = acc - other.coeffs[alpha] * q[beta];
            });
            q[out] = acc / b0;
        }
        Ok(Jet {
            layout,
            order,
            coeffs: q,
        })
    }

    pub fn try_recip(&self) -> Result<Self, JetError> {
        self.lift(S::one()).try_div(self)
    }

    /// Square root via `s² = f`.
    pub fn try_sqrt(&self) -> Result<Self, JetError> {
        let f0 = self.value();
        if !(f0 > S::zero()) {
            return Err(Self::domain("sqrt", format!("non-positive argument {f0}")));
        }
        let len = self.coeffs.len();
        let mut s = vec![S::zero(); len];
        s[0] = f0.sqrt();
        let two_s0 = s[0] + s[0];
        for out in 1..len {
            let mut acc = self.coeffs[out];
            for &(i, j) in self.layout.pairs_of(out) {
                let (i, j) = (i as usize, j as usize);
                if i == 0 {
                    continue;
                }
                acc = acc
                    - if i == j {
                        s[i] * s[i]
                    } else {
                        let p = s[i] * s[j];
                        p + p
                    };
            }
            s[out] = acc / two_s0;
        }
        Ok(self.with_coeffs(s))
    }

    fn with_coeffs(&self, coeffs: Vec<S>) -> Self {
        Jet {
            layout: self.layout.clone(),
            order: self.order,
            coeffs,
        }
    }

    fn degree(&self, idx: usize) -> S {
        S::int(self.layout.degree[idx] as u64)
    }

    /// Real power `f^r` for `f(0) > 0`, from the Euler-operator recurrence
    /// `f · D(f^r) = r · f^r · Df`.
    pub fn try_powf(&self, r: S) -> Result<Self, JetError> {
        let g0 = self.value();
        if !(g0 > S::zero()) {
            return Err(Self::domain(
                "pow",
                format!("real exponent needs a positive base, got {g0}"),
            ));
        }
        let len = self.coeffs.len();
        let mut f = vec![S::zero(); len];
        f[0] = g0.powf(r);
        for out in 1..len {
            let mut acc = S::zero();
            Self::for_split(&self.layout, out, |alpha, beta| {
                let w = r * self.degree(alpha) - self.degree(beta);
                acc = acc + w * self.coeffs[alpha] * f[beta];
            });
            f[out] = acc / (self.degree(out) * g0);
        }
        Ok(self.with_coeffs(f))
    }

    /// Integer power by binary exponentiation; negative exponents go through `recip`.
    pub fn try_powi(&self, e: i32) -> Result<Self, JetError> {
        let base = if e < 0 { self.try_recip()? } else { self.clone() };
        Ok(base.powu(e.unsigned_abs()))
    }

    fn powu(&self, mut e: u32) -> Self {
        let mut result = self.lift(S::one());
        let mut base = self.clone();
        let mut first = true;
        while e > 0 {
            if e & 1 == 1 {
                result = if first { base.clone() } else { &result * &base };
                first = false;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn exp(&self) -> Self {
        let len = self.coeffs.len();
        let mut f = vec![S::zero(); len];
        f[0] = self.value().exp();
        for out in 1..len {
            let mut acc = S::zero();
            Self::for_split(&self.layout, out, |alpha, beta| {
                acc = acc + self.degree(alpha) * self.coeffs[alpha] * f[beta];
            });
            f[out] = acc / self.degree(out);
        }
        self.with_coeffs(f)
    }

    pub fn try_ln(&self) -> Result<Self, JetError> {
        let g0 = self.value();
        if !(g0 > S::zero()) {
            return Err(Self::domain("log", format!("non-positive argument {g0}")));
        }
        let len = self.coeffs.len();
        let mut f = vec![S::zero(); len];
        f[0] = g0.ln();
        for out in 1..len {
            let mut acc = S::zero();
            Self::for_split(&self.layout, out, |alpha, beta| {
                if beta != 0 {
                    acc = acc + self.degree(beta) * self.coeffs[alpha] * f[beta];
                }
            });
            f[out] = (self.coeffs[out] - acc / self.degree(out)) / g0;
        }
        Ok(self.with_coeffs(f))
    }

    pub fn sin_cos(&self) -> (Self, Self) {
        let len = self.coeffs.len();
        let mut s = vec![S::zero(); len];
        let mut c = vec![S::zero(); len];
        s[0] = self.value().sin();
        c[0] = self.value().cos();
        for out in 1..len {
            let mut acc_s = S::zero();
            let mut acc_c = S::zero();
            Self::for_split(&self.layout, out, |alpha, beta| {
                let w = self.degree(alpha) * self.coeffs[alpha];
                acc_s = acc_s + w * c[beta];
                acc_c = acc_c - w * s[beta];
            });
            let d = self.degree(out);
            s[out] = acc_s / d;
            c[out] = acc_c / d;
        }
        (self.with_coeffs(s), self.with_coeffs(c))
    }

    pub fn sin(&self) -> Self {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Self {
        self.sin_cos().1
    }

    fn shortfall(&self, required: usize) -> Result<(), JetError> {
        if self.order < required {
            Err(JetError::OrderShortfall {
                required,
                available: self.order,
            })
        } else {
            Ok(())
        }
    }

    /// Partial derivative of the series with respect to the variables in `vars`
    /// (repeats allowed). The result has order `order - vars.len()`. Each coefficient is
    /// one multiplication by an exact integer factor, so the result does not depend on
    /// the order in which `vars` are listed.
    pub fn partial_multi(&self, vars: &[usize]) -> Result<Self, JetError> {
        let k = vars.len();
        self.shortfall(k)?;
        for &v in vars {
            if v >= self.nvars() {
                return Err(JetError::BadMultiIndex {
                    got: v + 1,
                    expected: self.nvars(),
                });
            }
        }
        let order = self.order - k;
        let layout = &self.layout;
        let mut bump = vec![0u8; self.nvars()];
        for &v in vars {
            bump[v] += 1;
        }
        let coeffs = (0..layout.len(order))
            .map(|i| {
                let mut target = i as u32;
                for &v in vars {
                    target = layout.up[v][target as usize];
                }
                let alpha = &layout.exps[i];
                // factor = Π_v (α_v + bump_v)! / α_v!
                let mut factor: u64 = 1;
                for (v, &b) in bump.iter().enumerate() {
                    for t in 1..=b as u64 {
                        factor *= alpha.0[v] as u64 + t;
                    }
                }
                S::int(factor) * self.coeffs[target as usize]
            })
            .collect();
        Ok(Jet {
            layout: layout.clone(),
            order,
            coeffs,
        })
    }

    pub fn partial(&self, var: usize) -> Result<Self, JetError> {
        self.partial_multi(&[var])
    }

    /// `∂/∂x^k`
    pub fn dx(&self, k: usize) -> Result<Self, JetError> {
        self.partial(k)
    }

    /// `∂/∂y^k`
    pub fn dy(&self, k: usize) -> Result<Self, JetError> {
        self.partial(self.dim() + k)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl<'a, S: Scalar> $tr<&'a Jet<S>> for &'a Jet<S> {
            type Output = Jet<S>;
            fn $method(self, rhs: &'a Jet<S>) -> Jet<S> {
                let f: fn(&Jet<S>, &Jet<S>) -> Jet<S> = $body;
                f(self, rhs)
            }
        }
        impl<S: Scalar> $tr<Jet<S>> for Jet<S> {
            type Output = Jet<S>;
            fn $method(self, rhs: Jet<S>) -> Jet<S> {
                (&self).$method(&rhs)
            }
        }
        impl<'a, S: Scalar> $tr<&'a Jet<S>> for Jet<S> {
            type Output = Jet<S>;
            fn $method(self, rhs: &'a Jet<S>) -> Jet<S> {
                (&self).$method(rhs)
            }
        }
        impl<'a, S: Scalar> $tr<Jet<S>> for &'a Jet<S> {
            type Output = Jet<S>;
            fn $method(self, rhs: Jet<S>) -> Jet<S> {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a.zip_with(b, |x, y| x + y));
forward_binop!(Sub, sub, |a, b| a.zip_with(b, |x, y| x - y));
forward_binop!(Mul, mul, |a, b| a.mul_jet(b));

impl<S: Scalar> Neg for &Jet<S> {
    type Output = Jet<S>;
    fn neg(self) -> Jet<S> {
        self.with_coeffs(self.coeffs.iter().map(|&c| -c).collect())
    }
}

impl<S: Scalar> Neg for Jet<S> {
    type Output = Jet<S>;
    fn neg(self) -> Jet<S> {
        -&self
    }
}

impl<S: Scalar> Mul<S> for &Jet<S> {
    type Output = Jet<S>;
    fn mul(self, rhs: S) -> Jet<S> {
        self.scale(rhs)
    }
}

impl<S: Scalar> Mul<S> for Jet<S> {
    type Output = Jet<S>;
    fn mul(self, rhs: S) -> Jet<S> {
        self.scale(rhs)
    }
}

/// Sum of jets in iteration order; `None` for an empty iterator.
pub fn sum_jets<'a, S: Scalar>(mut it: impl Iterator<Item = Jet<S>> + 'a) -> Option<Jet<S>> {
    let first = it.next()?;
    Some(it.fold(first, |acc, j| &acc + &j))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_var(order: usize, value: f64) -> Jet<f64> {
        let layout = Layout::shared(1, order);
        Jet::variable(&layout, order, 0, value)
    }

    #[test]
    fn seed_n1() {
        let v: Vec<Jet<f64>> = seed_variables(&[2.0], &[3.0], 2);
        assert_eq!(v.len(), 2);
        assert_eq!(v[0].coeffs()[..3], [2.0, 1.0, 0.0]);
        assert_eq!(v[1].coeffs()[..3], [3.0, 0.0, 1.0]);
        assert!(v[0].coeffs()[3..].iter().all(|&c| c == 0.0));
    }

    #[test]
    fn seed_order_zero_is_constant() {
        let v: Vec<Jet<f64>> = seed_variables(&[0.5, -1.0], &[1.0, 2.0], 0);
        for j in &v {
            assert_eq!(j.coeffs().len(), 1);
        }
        assert_eq!(v[3].value(), 2.0);
    }

    #[test]
    fn dense_count_is_binomial() {
        let layout = Layout::shared(4, 6);
        assert_eq!(layout.len(6), 210);
        assert_eq!(Layout::shared(8, 6).len(6), 3003);
    }

    #[test]
    fn sqrt_of_four_plus_u() {
        let u = one_var(2, 0.0);
        let f = &u + &u.lift(4.0);
        let s = f.try_sqrt().unwrap();
        assert_eq!(s.coeffs(), &[2.0, 0.25, -1.0 / 64.0]);
    }

    #[test]
    fn identities_on_mul_and_div() {
        let u = one_var(4, 0.7);
        let f = (&u * &u).exp() + u.sin();
        assert_eq!(&f * &f.lift(1.0), f);
        let q = f.try_div(&f).unwrap();
        assert_eq!(q.value(), 1.0);
        assert!(q.coeffs()[1..].iter().all(|c| c.abs() < 1e-15));
    }

    #[test]
    fn extract_second_derivative() {
        let u = one_var(3, 1.5);
        let f = &u * &u;
        let a = MultiIndex(vec![2]);
        assert_eq!(f.extract_partial(&a).unwrap(), 2.0);
        let c = u.lift(3.0);
        assert_eq!(c.extract_partial(&MultiIndex(vec![1])).unwrap(), 0.0);
        assert!(matches!(
            f.extract_partial(&MultiIndex(vec![4])),
            Err(JetError::OrderShortfall {
                required: 4,
                available: 3
            })
        ));
    }

    #[test]
    fn domain_errors() {
        let u = one_var(2, 0.0);
        assert!(u.try_sqrt().is_err());
        assert!(u.try_ln().is_err());
        assert!(u.lift(1.0).try_div(&u).is_err());
        assert!((-&u.lift(1.0)).try_powf(0.5).is_err());
    }

    #[test]
    fn univariate_series_match_closed_forms() {
        // exp(u) at 0: 1/k!
        let u = one_var(6, 0.0);
        let e = u.exp();
        let mut fact = 1.0;
        for k in 0..=6 {
            if k > 0 {
                fact *= k as f64;
            }
            assert!((e.coeffs()[k] - 1.0 / fact).abs() < 1e-15);
        }
        // log(1+u): (-1)^{k+1}/k
        let l = (&u + &u.lift(1.0)).try_ln().unwrap();
        for k in 1..=6 {
            let expect = if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64;
            assert!((l.coeffs()[k] - expect).abs() < 1e-15);
        }
        // (1+u)^{1/2} binomial series
        let p = (&u + &u.lift(1.0)).try_powf(0.5).unwrap();
        let s = (&u + &u.lift(1.0)).try_sqrt().unwrap();
        for k in 0..=6 {
            assert!((p.coeffs()[k] - s.coeffs()[k]).abs() < 1e-15);
        }
        // sin/cos
        let (si, co) = u.sin_cos();
        assert_eq!(si.coeffs()[1], 1.0);
        assert!((si.coeffs()[3] + 1.0 / 6.0).abs() < 1e-16);
        assert!((co.coeffs()[2] + 0.5).abs() < 1e-16);
    }

    #[test]
    fn powi_matches_repeated_mul() {
        let v: Vec<Jet<f64>> = seed_variables(&[0.3], &[1.2], 5);
        let f = &v[0] + &v[1];
        let cube = &(&f * &f) * &f;
        let p = f.try_powi(3).unwrap();
        for (a, b) in p.coeffs().iter().zip(cube.coeffs()) {
            assert!((a - b).abs() < 1e-13);
        }
        let inv = f.try_powi(-2).unwrap();
        let back = &inv * &(&f * &f);
        assert!((back.value() - 1.0).abs() < 1e-14);
        assert!(back.coeffs()[1..].iter().all(|c| c.abs() < 1e-12));
    }

    #[test]
    fn partial_multi_is_order_independent() {
        let v: Vec<Jet<f64>> = seed_variables(&[0.3, -0.2], &[1.2, 0.7], 5);
        let f = (&(&v[0] * &v[2]) + &(&v[1] * &v[3])).exp() * v[2].sin();
        let a = f.partial_multi(&[0, 2, 3]).unwrap();
        let b = f.partial_multi(&[3, 0, 2]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.order(), 2);
        let chained = f.partial(0).unwrap().partial(2).unwrap().partial(3).unwrap();
        for (x, y) in a.coeffs().iter().zip(chained.coeffs()) {
            assert!((x - y).abs() <= 1e-12 * (1.0 + x.abs()));
        }
    }

    #[test]
    fn truncation_is_bit_identical() {
        let build = |order| {
            let v: Vec<Jet<f64>> = seed_variables(&[0.4, 0.1], &[0.9, -0.6], order);
            let r = (&(&v[2] * &v[2]) + &(&v[3] * &v[3])).try_sqrt().unwrap();
            let t = &r + &(&v[2] * (v[0].cos() * 0.3));
            t.try_div(&(v[1].exp() + v[3].lift(2.0)))
                .unwrap()
                .try_powf(0.75)
                .unwrap()
        };
        let hi = build(6);
        let lo = build(5);
        assert_eq!(hi.truncate(5), lo);
    }

    #[test]
    fn commutativity_is_exact() {
        let v: Vec<Jet<f64>> = seed_variables(&[0.37, -0.11], &[1.3, 0.71], 6);
        let f = v[0].exp() + &v[2];
        let g = v[1].sin() * &v[3];
        assert_eq!(&f * &g, &g * &f);
        assert_eq!(&f + &g, &g + &f);
    }

    #[test]
    fn f32_jets_work() {
        let v = seed_variables(&[0.5f32], &[2.0f32], 3);
        let r = (&v[1] * &v[1]).try_sqrt().unwrap();
        assert!((r.value() - 2.0).abs() < 1e-6);
        assert!((r.dy(0).unwrap().value() - 1.0).abs() < 1e-6);
    }
}
