//! State sets and pair relations over a fixed, dense state space.
//!
//! A [`PairRelation`] over `n` states is an `n * n` bitset indexed row-major,
//! so membership is O(1), set algebra is linear in `n²` bits and memory is
//! `n² / 64` words regardless of how many pairs are present.

use alloc::vec::Vec;
use core::fmt;

use fixedbitset::FixedBitSet;

use crate::fsm::StateId;

/// A subset of the states of one machine.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StateSet {
    bits: FixedBitSet,
}

impl StateSet {
    pub fn empty(n: usize) -> Self {
        StateSet { bits: FixedBitSet::with_capacity(n) }
    }

    pub fn full(n: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(n);
        bits.insert_range(..);
        StateSet { bits }
    }

    pub fn from_ids<I: IntoIterator<Item = StateId>>(n: usize, ids: I) -> Self {
        let mut s = Self::empty(n);
        for id in ids {
            s.insert(id);
        }
        s
    }

    /// Size of the universe, not the number of members.
    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn contains(&self, id: StateId) -> bool {
        self.bits.contains(id.index())
    }

    pub fn insert(&mut self, id: StateId) -> bool {
        !self.bits.put(id.index())
    }

    pub fn remove(&mut self, id: StateId) {
        self.bits.set(id.index(), false);
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = StateId> + '_ {
        self.bits.ones().map(StateId::from_index)
    }

    pub fn complement(&self) -> Self {
        let mut bits = self.bits.clone();
        bits.toggle_range(..);
        StateSet { bits }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        StateSet { bits }
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        StateSet { bits }
    }

    pub fn union_with(&mut self, other: &Self) {
        self.bits.union_with(&other.bits);
    }

    pub fn intersect_with(&mut self, other: &Self) {
        self.bits.intersect_with(&other.bits);
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn intersects(&self, other: &Self) -> bool {
        !self.bits.is_disjoint(&other.bits)
    }

    pub fn clear(&mut self) {
        self.bits.clear();
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.bits.ones()).finish()
    }
}

/// A set of ordered pairs of states.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PairRelation {
    n: usize,
    bits: FixedBitSet,
}

impl PairRelation {
    pub fn empty(n: usize) -> Self {
        PairRelation { n, bits: FixedBitSet::with_capacity(n * n) }
    }

    pub fn full(n: usize) -> Self {
        let mut r = Self::empty(n);
        r.bits.insert_range(..);
        r
    }

    /// The diagonal.
    pub fn identity(n: usize) -> Self {
        let mut r = Self::empty(n);
        for i in 0..n {
            r.bits.insert(i * n + i);
        }
        r
    }

    pub fn from_pairs<I: IntoIterator<Item = (StateId, StateId)>>(n: usize, pairs: I) -> Self {
        let mut r = Self::empty(n);
        for (i, j) in pairs {
            r.insert(i, j);
        }
        r
    }

    /// `a × b`.
    pub fn product(a: &StateSet, b: &StateSet) -> Self {
        let n = a.universe();
        let mut r = Self::empty(n);
        for i in a.iter() {
            for j in b.iter() {
                r.insert(i, j);
            }
        }
        r
    }

    /// Number of states in the underlying universe.
    pub fn universe(&self) -> usize {
        self.n
    }

    #[inline]
    fn idx(&self, i: StateId, j: StateId) -> usize {
        i.index() * self.n + j.index()
    }

    #[inline]
    pub fn contains(&self, i: StateId, j: StateId) -> bool {
        self.bits.contains(self.idx(i, j))
    }

    /// Returns true if the pair was not present before.
    #[inline]
    pub fn insert(&mut self, i: StateId, j: StateId) -> bool {
        let k = self.idx(i, j);
        !self.bits.put(k)
    }

    #[inline]
    pub fn remove(&mut self, i: StateId, j: StateId) {
        let k = self.idx(i, j);
        self.bits.set(k, false);
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    /// Pairs in row-major order, which is lexicographic on `(i, j)`.
    pub fn iter(&self) -> impl Iterator<Item = (StateId, StateId)> + '_ {
        let n = self.n;
        self.bits
            .ones()
            .map(move |k| (StateId::from_index(k / n), StateId::from_index(k % n)))
    }

    /// Lexicographically smallest pair.
    pub fn first(&self) -> Option<(StateId, StateId)> {
        self.iter().next()
    }

    pub fn transpose(&self) -> Self {
        let mut r = Self::empty(self.n);
        for (i, j) in self.iter() {
            r.insert(j, i);
        }
        r
    }

    /// `W⁻ = W ∪ Wᵀ`.
    pub fn symmetric_closure(&self) -> Self {
        let mut r = self.transpose();
        r.bits.union_with(&self.bits);
        r
    }

    pub fn is_symmetric(&self) -> bool {
        self.iter().all(|(i, j)| self.contains(j, i))
    }

    pub fn complement(&self) -> Self {
        let mut bits = self.bits.clone();
        bits.toggle_range(..);
        PairRelation { n: self.n, bits }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        PairRelation { n: self.n, bits }
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        PairRelation { n: self.n, bits }
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut bits = self.bits.clone();
        bits.difference_with(&other.bits);
        PairRelation { n: self.n, bits }
    }

    pub fn intersect_with(&mut self, other: &Self) {
        self.bits.intersect_with(&other.bits);
    }

    pub fn union_with(&mut self, other: &Self) {
        self.bits.union_with(&other.bits);
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn intersects(&self, other: &Self) -> bool {
        !self.bits.is_disjoint(&other.bits)
    }

    /// Pairs with exactly one side in `omega`.
    pub fn mixed(&self, omega: &StateSet) -> Self {
        let mut r = Self::empty(self.n);
        for (i, j) in self.iter() {
            if omega.contains(i) != omega.contains(j) {
                r.insert(i, j);
            }
        }
        r
    }

    /// Whether every pair lies in `(Ω × Ω) ∪ (Ω̄ × Ω̄)`.
    pub fn same_side(&self, omega: &StateSet) -> bool {
        self.iter().all(|(i, j)| omega.contains(i) == omega.contains(j))
    }

    pub fn without_diagonal(&self) -> Self {
        self.difference(&Self::identity(self.n))
    }

    /// Backing storage size in 64-bit words.
    pub fn word_len(&self) -> usize {
        self.bits.len().div_ceil(64)
    }

    pub fn to_vec(&self) -> Vec<(StateId, StateId)> {
        self.iter().collect()
    }
}

impl fmt::Debug for PairRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set()
            .entries(self.iter().map(|(i, j)| (i.index(), j.index())))
            .finish()
    }
}
