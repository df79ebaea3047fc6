//! Simple undirected graphs on dense vertex indices.
//!
//! Adjacency is a flat array of fixed-width bitset rows, one row of
//! `ceil(n / 64)` words per vertex. A [`Graph`] is immutable once built;
//! every operation returns a new graph, so graphs can be shared freely
//! between search threads.

mod format;
mod glue;
mod vertex_set;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use format::{GraphFormat, GraphJson, ParseError, ParseErrorKind, ParseWarning, Parsed};
pub use glue::{glue, GlueSpec, Glued};
pub use vertex_set::VertexSet;

/// Part label carried by bipartite-style constructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} is out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("permutation of length {got} does not match {expected} vertices")]
    NotAPermutation { expected: usize, got: usize },
    #[error("shared set of g{side} is not a clique: {u} and {v} are not adjacent")]
    SharedNotClique { side: u8, u: usize, v: usize },
    #[error("shared correspondence is not injective (g{side} vertex {vertex} used twice)")]
    SharedNotInjective { side: u8, vertex: usize },
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
    labels: Vec<Option<Side>>,
}

/// An induced subgraph together with the map from new to old indices.
#[derive(Clone, Debug)]
pub struct Induced {
    pub graph: Graph,
    /// `origin[i]` is the host vertex that became vertex `i`.
    pub origin: Vec<usize>,
}

fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

impl Graph {
    pub fn empty(n: usize) -> Graph {
        let words = words_for(n);
        Graph {
            n,
            words,
            rows: vec![0; n * words],
            labels: vec![None; n],
        }
    }

    pub fn complete(n: usize) -> Graph {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.insert_edge(u, v);
            }
        }
        g
    }

    /// `K_{s,t}` with the first `s` vertices labelled `A` and the rest `B`.
    pub fn complete_bipartite(s: usize, t: usize) -> Graph {
        let mut g = Graph::empty(s + t);
        for u in 0..s {
            for v in s..s + t {
                g.insert_edge(u, v);
            }
        }
        for v in 0..s + t {
            g.labels[v] = Some(if v < s { Side::A } else { Side::B });
        }
        g
    }

    /// The cycle `0-1-...-(n-1)-0`. For `n < 3` the closing edge would be a
    /// loop or a parallel edge, so the result is the path on `n` vertices.
    pub fn cycle(n: usize) -> Graph {
        let mut g = Graph::path(n);
        if n >= 3 {
            g.insert_edge(n - 1, 0);
        }
        g
    }

    pub fn path(n: usize) -> Graph {
        let mut g = Graph::empty(n);
        for v in 1..n {
            g.insert_edge(v - 1, v);
        }
        g
    }

    /// Builds a graph from an edge list. Repeated edges collapse.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            g.insert_edge(u, v);
        }
        Ok(g)
    }

    /// Returns a copy of this graph carrying the given labels.
    pub fn with_labels(&self, labels: Vec<Option<Side>>) -> Result<Graph, GraphError> {
        if labels.len() != self.n {
            return Err(GraphError::LabelCount {
                expected: self.n,
                got: labels.len(),
            });
        }
        let mut g = self.clone();
        g.labels = labels;
        Ok(g)
    }

    /// Labels `part_a` as `A` and every other vertex as `B`.
    pub fn with_bipartition(&self, part_a: &VertexSet) -> Result<Graph, GraphError> {
        self.check_set(part_a)?;
        let labels = (0..self.n)
            .map(|v| Some(if part_a.contains(v) { Side::A } else { Side::B }))
            .collect();
        self.with_labels(labels)
    }

    // Only used while a graph is being built; never after it is handed out.
    pub(crate) fn insert_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.n && v < self.n);
        self.rows[u * self.words + v / 64] |= 1 << (v % 64);
        self.rows[v * self.words + u / 64] |= 1 << (u % 64);
    }

    pub(crate) fn set_label(&mut self, v: usize, label: Option<Side>) {
        self.labels[v] = label;
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        let twice: usize = self.rows.iter().map(|w| w.count_ones() as usize).sum();
        twice / 2
    }

    pub fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.n {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    pub fn check_set(&self, s: &VertexSet) -> Result<(), GraphError> {
        match s.max() {
            Some(v) => self.check_vertex(v),
            None => Ok(()),
        }
    }

    /// The bitset row of `v`: bit `u` is set iff `uv` is an edge.
    pub fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    /// Adjacency rows as single words, available when `n <= 64`.
    pub fn masks(&self) -> Option<Vec<u64>> {
        if self.n > 64 {
            return None;
        }
        Some((0..self.n).map(|v| self.row(v).first().copied().unwrap_or(0)).collect())
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(v).iter().enumerate().flat_map(|(w, &bits)| {
            let mut bits = bits;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + b)
            })
        })
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Number of vertices other than `v` that are not adjacent to `v`.
    pub fn non_neighbor_count(&self, v: usize) -> usize {
        self.n - 1 - self.degree(v)
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn label(&self, v: usize) -> Option<Side> {
        self.labels[v]
    }

    pub fn labels(&self) -> &[Option<Side>] {
        &self.labels
    }

    pub fn is_labelled(&self) -> bool {
        self.labels.iter().any(Option::is_some)
    }

    /// Vertices carrying the given label.
    pub fn part(&self, side: Side) -> VertexSet {
        (0..self.n).filter(|&v| self.labels[v] == Some(side)).collect()
    }

    /// True iff every pair of members is adjacent.
    ///
    /// # Panics
    /// If `s` names a vertex outside the graph.
    pub fn is_clique(&self, s: &VertexSet) -> bool {
        self.first_non_adjacent_pair(s).is_none()
    }

    pub(crate) fn first_non_adjacent_pair(&self, s: &VertexSet) -> Option<(usize, usize)> {
        let members: Vec<usize> = s.iter().collect();
        for (i, &u) in members.iter().enumerate() {
            for &v in &members[i + 1..] {
                if !self.has_edge(u, v) {
                    return Some((u, v));
                }
            }
        }
        None
    }

    /// Same vertex set and labels; `uv` is an edge iff it is not one here.
    pub fn complement(&self) -> Graph {
        let mut g = self.clone();
        for v in 0..self.n {
            let row = &mut g.rows[v * self.words..(v + 1) * self.words];
            for (w, word) in row.iter_mut().enumerate() {
                *word = !*word & valid_bits(self.n, w);
            }
            row[v / 64] &= !(1 << (v % 64));
        }
        g
    }

    /// The subgraph induced by `s`, re-indexed densely in increasing order.
    pub fn induced_subgraph(&self, s: &VertexSet) -> Result<Induced, GraphError> {
        self.check_set(s)?;
        let origin: Vec<usize> = s.iter().collect();
        let mut g = Graph::empty(origin.len());
        for (i, &u) in origin.iter().enumerate() {
            g.labels[i] = self.labels[u];
            for (j, &v) in origin.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.insert_edge(i, j);
                }
            }
        }
        Ok(Induced { graph: g, origin })
    }

    /// Relabels vertices: old vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Graph, GraphError> {
        let bad = GraphError::NotAPermutation {
            expected: self.n,
            got: perm.len(),
        };
        if perm.len() != self.n {
            return Err(bad);
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut seen[p], true) {
                return Err(bad);
            }
        }
        let mut g = Graph::empty(self.n);
        for (u, v) in self.edges() {
            g.insert_edge(perm[u], perm[v]);
        }
        for (&p, &label) in perm.iter().zip(&self.labels) {
            g.labels[p] = label;
        }
        Ok(g)
    }

    /// Sorted edge list; two graphs on the same index set are equal iff
    /// these agree.
    pub fn canonical_edges(&self) -> Vec<(usize, usize)> {
        self.edges().collect()
    }

    /// Whether the listed vertices induce a connected subgraph. The empty set
    /// counts as connected.
    pub fn is_connected_set(&self, s: &VertexSet) -> bool {
        let members: Vec<usize> = s.iter().collect();
        let Some(&start) = members.first() else {
            return true;
        };
        let mut seen = VertexSet::new();
        seen.insert(start);
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &v in &members {
                if !seen.contains(v) && self.has_edge(u, v) {
                    seen.insert(v);
                    stack.push(v);
                }
            }
        }
        seen.len() == members.len()
    }
}

fn valid_bits(n: usize, word: usize) -> u64 {
    let lo = word * 64;
    if n >= lo + 64 {
        u64::MAX
    } else {
        (1u64 << (n - lo)) - 1
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.canonical_edges())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    #[test]
    fn complement_of_edgeless_is_complete() {
        assert_eq!(Graph::empty(4).complement(), Graph::complete(4));
    }

    #[test]
    fn complement_of_k22_is_two_disjoint_edges() {
        let c = Graph::complete_bipartite(2, 2).complement();
        assert_eq!(c.canonical_edges(), vec![(0, 1), (2, 3)]);
        assert_eq!(c.label(0), Some(Side::A));
        assert_eq!(c.label(3), Some(Side::B));
    }

    #[test]
    fn complement_is_involution_exhaustively_up_to_six_vertices() {
        for n in 0..=6usize {
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            for mask in 0u32..(1 << pairs.len()) {
                let g = Graph::from_edges(n, pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e)).unwrap();
                let c = g.complement();
                assert_eq!(c.edge_count() + g.edge_count(), pairs.len());
                assert_eq!(c.complement(), g);
            }
        }
    }

    #[test]
    fn complement_handles_multi_word_rows() {
        let g = Graph::cycle(130);
        let c = g.complement();
        assert_eq!(c.edge_count(), 130 * 129 / 2 - 130);
        assert!(!c.has_edge(5, 5));
        assert!(!c.has_edge(129, 0));
        assert!(c.has_edge(0, 2));
        assert_eq!(c.complement(), g);
    }

    #[test]
    fn induced_subgraph_examples() {
        let k3 = Graph::complete(5).induced_subgraph(&set(&[0, 2, 4])).unwrap();
        assert_eq!(k3.graph, Graph::complete(3));
        assert_eq!(k3.origin, vec![0, 2, 4]);

        let none = Graph::cycle(5).induced_subgraph(&VertexSet::new()).unwrap();
        assert_eq!(none.graph.vertex_count(), 0);

        let p3 = Graph::cycle(5).induced_subgraph(&set(&[1, 2, 3])).unwrap();
        assert_eq!(p3.graph, Graph::path(3));

        let err = Graph::cycle(5).induced_subgraph(&set(&[1, 7])).unwrap_err();
        assert_eq!(err, GraphError::VertexOutOfRange { vertex: 7, n: 5 });
    }

    #[test]
    fn induced_on_everything_is_identity() {
        let g = Graph::complete_bipartite(3, 2);
        let all: VertexSet = (0..5).collect();
        let ind = g.induced_subgraph(&all).unwrap();
        assert_eq!(ind.graph, g);
        assert_eq!(ind.origin, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn clique_and_non_neighbors() {
        let g = Graph::path(3);
        assert!(g.is_clique(&set(&[1])));
        assert!(g.is_clique(&VertexSet::new()));
        assert!(!g.is_clique(&set(&[0, 2])));
        assert!(Graph::complete(4).is_clique(&set(&[0, 1, 2, 3])));

        let k = Graph::complete(6);
        assert!((0..6).all(|v| k.non_neighbor_count(v) == 0));
        let lone = Graph::from_edges(5, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(lone.non_neighbor_count(4), 4);
    }

    #[test]
    fn constructors() {
        let k22 = Graph::complete_bipartite(2, 2);
        // 0,1 | 2,3 ; relabel onto the 4-cycle 0-2-1-3
        let c4 = Graph::cycle(4).permuted(&[0, 2, 1, 3]).unwrap();
        assert_eq!(k22.canonical_edges(), c4.canonical_edges());
        assert_eq!(Graph::complete(1).vertex_count(), 1);
        assert_eq!(Graph::complete(1).edge_count(), 0);
        assert_eq!(Graph::cycle(3), Graph::complete(3));
        assert_eq!(Graph::cycle(2).edge_count(), 1);
        assert_eq!(Graph::path(4).canonical_edges(), vec![(0, 1), (1, 2), (2, 3)]);
    }

    #[test]
    fn from_edges_validates() {
        assert_eq!(Graph::from_edges(3, [(0, 0)]).unwrap_err(), GraphError::SelfLoop(0));
        assert!(matches!(
            Graph::from_edges(3, [(0, 3)]),
            Err(GraphError::VertexOutOfRange { vertex: 3, n: 3 })
        ));
        let g = Graph::from_edges(3, [(0, 1), (1, 0), (0, 1)]).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn adjacency_is_symmetric_and_loopless() {
        let g = Graph::from_edges(70, [(0, 69), (3, 64), (64, 65)]).unwrap();
        for u in 0..70 {
            assert!(!g.has_edge(u, u));
            for v in 0..70 {
                assert_eq!(g.has_edge(u, v), g.has_edge(v, u));
            }
        }
        assert_eq!(g.neighbors(64).collect::<Vec<_>>(), vec![3, 65]);
    }

    #[test]
    fn permuted_rejects_non_permutations() {
        let g = Graph::path(3);
        assert!(g.permuted(&[0, 0, 1]).is_err());
        assert!(g.permuted(&[0, 1]).is_err());
        assert_eq!(g.permuted(&[2, 1, 0]).unwrap().canonical_edges(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn connected_sets() {
        let g = Graph::path(4);
        assert!(g.is_connected_set(&set(&[1, 2, 3])));
        assert!(!g.is_connected_set(&set(&[0, 2])));
        assert!(g.is_connected_set(&set(&[2])));
    }
}
