use fixedbitset::FixedBitSet;
use serde::{Serialize, Serializer};

/// A set of vertex ids drawn from the universe `0..universe`.
///
/// Serializes as the sorted list of members.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    bits: FixedBitSet,
}

impl VertexSet {
    pub fn empty(universe: usize) -> Self {
        VertexSet { bits: FixedBitSet::with_capacity(universe) }
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        VertexSet { bits }
    }

    /// Panics if a member is out of range; use [`VertexSet::try_from_iter`] for untrusted input.
    pub fn from_iter(universe: usize, members: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(universe);
        for v in members {
            s.insert(v);
        }
        s
    }

    pub fn try_from_iter(
        universe: usize,
        members: impl IntoIterator<Item = usize>,
    ) -> crate::Result<Self> {
        let mut s = Self::empty(universe);
        for v in members {
            if v >= universe {
                return crate::error::param(format!(
                    "vertex {v} out of range for universe {universe}"
                ));
            }
            s.insert(v);
        }
        Ok(s)
    }

    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.bits.contains(v)
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        self.bits.insert(v);
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        self.bits.set(v, false);
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        self.bits.union_with(&other.bits);
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        self.bits.intersect_with(&other.bits);
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        self.bits.difference_with(&other.bits);
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    pub fn complement(&self) -> VertexSet {
        let mut bits = self.bits.clone();
        bits.toggle_range(..);
        VertexSet { bits }
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.bits.is_disjoint(&other.bits)
    }

    /// Smallest member of `self` that is not in `other`.
    pub fn first_not_in(&self, other: &VertexSet) -> Option<usize> {
        self.bits.difference(&other.bits).next()
    }
}

impl std::fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_algebra() {
        let a = VertexSet::from_iter(10, [1, 3, 5]);
        let b = VertexSet::from_iter(10, [3, 4]);
        assert_eq!(a.union(&b).to_vec(), vec![1, 3, 4, 5]);
        assert_eq!(a.intersection(&b).to_vec(), vec![3]);
        assert_eq!(a.difference(&b).to_vec(), vec![1, 5]);
        assert_eq!(a.complement().len(), 7);
        assert!(VertexSet::from_iter(10, [3]).is_subset(&a));
        assert_eq!(a.first_not_in(&b), Some(1));
        assert_eq!(VertexSet::full(5).len(), 5);
    }

    #[test]
    fn duplicate_inserts_are_idempotent() {
        let a = VertexSet::from_iter(4, [2, 2, 2]);
        assert_eq!(a.len(), 1);
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(VertexSet::try_from_iter(3, [0, 3]).is_err());
    }
}
