use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

/// A set of vertex indices of some host graph, iterated in increasing order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(BTreeSet<usize>);

impl VertexSet {
    pub fn new() -> VertexSet {
        VertexSet(BTreeSet::new())
    }

    pub fn insert(&mut self, v: usize) -> bool {
        self.0.insert(v)
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.contains(&v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn min(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn max(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        self.0.union(&other.0).copied().collect()
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    /// Members of a single-word bitmask.
    pub fn from_mask(mask: u64) -> VertexSet {
        (0..64).filter(|&v| mask >> v & 1 == 1).collect()
    }

    /// The set as a single-word bitmask, if every member is below 64.
    pub fn to_mask(&self) -> Option<u64> {
        self.iter().try_fold(0u64, |m, v| (v < 64).then(|| m | 1 << v))
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> VertexSet {
        VertexSet(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = usize;
    type IntoIter = std::iter::Copied<std::collections::btree_set::Iter<'a, usize>>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter().copied()
    }
}

impl From<Vec<usize>> for VertexSet {
    fn from(v: Vec<usize>) -> VertexSet {
        v.into_iter().collect()
    }
}
