//! Dense π-tensors: components over the natural frame of the pullback bundle.

use std::fmt;

use crate::jets::{Jet, JetError};
use crate::scalar::Scalar;

/// Kind of a tensor slot. `Inert` slots carry a label (such as the index of a fixed
/// basis field) and receive no connection terms under covariant differentiation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Slot {
    Up,
    Down,
    Inert,
}

/// Row-major dense tensor with `n` values per slot.
#[derive(Clone, PartialEq)]
pub struct PiTensor<T> {
    n: usize,
    slots: Vec<Slot>,
    data: Vec<T>,
}

/// Jet-valued π-tensor field: each component is the Taylor expansion of the field
/// around the base point.
pub type TensorField<S> = PiTensor<Jet<S>>;

/// All multi-indices of the given rank over `0..n`, last index fastest.
pub fn multi_indices(n: usize, rank: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = n.pow(rank as u32);
    (0..total).map(move |mut flat| {
        let mut idx = vec![0; rank];
        for slot in (0..rank).rev() {
            idx[slot] = flat % n;
            flat /= n;
        }
        idx
    })
}

impl<T> PiTensor<T> {
    pub fn new(n: usize, slots: Vec<Slot>, data: Vec<T>) -> Self {
        assert_eq!(data.len(), n.pow(slots.len() as u32), "component count");
        PiTensor { n, slots, data }
    }

    pub fn from_fn(n: usize, slots: Vec<Slot>, mut f: impl FnMut(&[usize]) -> T) -> Self {
        let data = multi_indices(n, slots.len()).map(|i| f(&i)).collect();
        PiTensor { n, slots, data }
    }

    pub fn try_from_fn<E>(
        n: usize,
        slots: Vec<Slot>,
        mut f: impl FnMut(&[usize]) -> Result<T, E>,
    ) -> Result<Self, E> {
        let data = multi_indices(n, slots.len())
            .map(|i| f(&i))
            .collect::<Result<_, _>>()?;
        Ok(PiTensor { n, slots, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.slots.len()
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.slots.len());
        idx.iter().fold(0, |acc, &i| {
            debug_assert!(i < self.n);
            acc * self.n + i
        })
    }

    pub fn get(&self, idx: &[usize]) -> &T {
        &self.data[self.offset(idx)]
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> PiTensor<U> {
        PiTensor {
            n: self.n,
            slots: self.slots.clone(),
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<U, E>(&self, f: impl FnMut(&T) -> Result<U, E>) -> Result<PiTensor<U>, E> {
        Ok(PiTensor {
            n: self.n,
            slots: self.slots.clone(),
            data: self.data.iter().map(f).collect::<Result<_, _>>()?,
        })
    }

    /// Same components with slot kinds replaced.
    pub fn with_slots(mut self, slots: Vec<Slot>) -> Self {
        assert_eq!(slots.len(), self.slots.len());
        self.slots = slots;
        self
    }

    pub fn indices(&self) -> impl Iterator<Item = Vec<usize>> {
        multi_indices(self.n, self.slots.len())
    }
}

impl<S: Scalar> PiTensor<Jet<S>> {
    /// Constant terms of every component.
    pub fn values(&self) -> PiTensor<S> {
        self.map(|j| j.value())
    }

    /// Lowest truncation order among the components.
    pub fn order(&self) -> usize {
        self.data.iter().map(|j| j.order()).min().unwrap_or(0)
    }

    pub fn is_exactly_zero(&self) -> bool {
        self.data.iter().all(|j| j.is_zero())
    }

    pub fn try_each<E: From<JetError>>(
        &self,
        f: impl FnMut(&Jet<S>) -> Result<Jet<S>, JetError>,
    ) -> Result<Self, E> {
        self.try_map(f).map_err(E::from)
    }
}

impl<S: Scalar> PiTensor<S> {
    /// Component by value.
    pub fn at(&self, idx: &[usize]) -> S {
        self.data[self.offset(idx)]
    }

    pub fn zeros(n: usize, slots: Vec<Slot>) -> Self {
        Self::from_fn(n, slots, |_| S::zero())
    }

    pub fn max_abs(&self) -> S {
        self.data.iter().fold(S::zero(), |m, v| m.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> S {
        assert_eq!(self.data.len(), other.data.len());
        self.data
            .iter()
            .zip(&other.data)
            .fold(S::zero(), |m, (a, b)| m.max((*a - *b).abs()))
    }

    /// All components are exactly `0.0`.
    pub fn is_exactly_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn to_f64(&self) -> PiTensor<f64> {
        self.map(|v| v.as_f64())
    }
}

impl<T: fmt::Debug> fmt::Debug for PiTensor<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PiTensor")
            .field("n", &self.n)
            .field("slots", &self.slots)
            .field("data", &self.data)
            .finish()
    }
}
