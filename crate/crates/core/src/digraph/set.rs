use super::VertexId;
use fixedbitset::FixedBitSet;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

/// Subset of `[0, n)` backed by a bitset, with a cached cardinality.
///
/// Iteration is always in increasing vertex order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    bits: FixedBitSet,
    len: usize,
}

impl VertexSet {
    /// Empty set over universe `[0, n)`.
    pub fn new(n: usize) -> Self {
        VertexSet { bits: FixedBitSet::with_capacity(n), len: 0 }
    }

    pub fn full(n: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(n);
        bits.insert_range(..);
        VertexSet { bits, len: n }
    }

    pub fn from_vertices<I: IntoIterator<Item = VertexId>>(n: usize, it: I) -> Self {
        let mut s = Self::new(n);
        for v in it {
            s.insert(v);
        }
        s
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(n: usize, it: I) -> Self {
        Self::from_vertices(n, it.into_iter().map(VertexId::from))
    }

    /// Size of the universe this set lives in.
    #[inline]
    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, v: VertexId) -> bool {
        self.bits.contains(v.index())
    }

    /// Returns true if `v` was newly inserted. Panics if `v` is outside the universe.
    #[inline]
    pub fn insert(&mut self, v: VertexId) -> bool {
        let fresh = !self.bits.put(v.index());
        self.len += fresh as usize;
        fresh
    }

    #[inline]
    pub fn remove(&mut self, v: VertexId) -> bool {
        let had = self.contains(v);
        if had {
            self.bits.set(v.index(), false);
            self.len -= 1;
        }
        had
    }

    pub fn clear(&mut self) {
        self.bits.clear();
        self.len = 0;
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.bits.ones().map(VertexId::from)
    }

    pub fn to_vec(&self) -> Vec<VertexId> {
        self.iter().collect()
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        self.bits.union_with(&other.bits);
        self.len = self.bits.count_ones(..);
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        self.bits.difference_with(&other.bits);
        self.len = self.bits.count_ones(..);
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        self.bits.intersect_with(&other.bits);
        self.len = self.bits.count_ones(..);
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.bits.is_disjoint(&other.bits)
    }

    /// Every member lies below `n`.
    pub fn fits(&self, n: usize) -> bool {
        self.bits.ones().next_back().is_none_or(|m| m < n)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|v| v.0)).finish()
    }
}

#[derive(Serialize, Deserialize)]
struct SetRepr {
    n: usize,
    members: Vec<u32>,
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SetRepr { n: self.universe(), members: self.iter().map(|v| v.0).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = SetRepr::deserialize(d)?;
        if let Some(&bad) = r.members.iter().find(|&&m| m as usize >= r.n) {
            return Err(serde::de::Error::custom(format!("member {bad} outside universe {}", r.n)));
        }
        Ok(VertexSet::from_vertices(r.n, r.members.into_iter().map(VertexId)))
    }
}
