//! List colouring: verification, an exact L-colouring search and an exact
//! k-choosability decision for small graphs.

mod choosability;
mod solver;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

pub use choosability::{
    is_k_choosable, is_k_choosable_with, ChoosabilityCap, ChoosabilityOptions, ChoosabilityOutcome,
    ChoosabilityVerdict,
};
pub use solver::{find_l_coloring, find_l_coloring_counted, SolveStats};

/// Colours are opaque identifiers.
pub type Color = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ListColorError {
    #[error("list assignment covers {lists} vertices but the graph has {vertices}")]
    ShapeMismatch { vertices: usize, lists: usize },
    #[error("k must be at least 1")]
    InvalidK,
    #[error("instance with {vertices} vertices and k = {k} exceeds the cap (at most {max_vertices} vertices, k <= {max_k})")]
    CapExceeded {
        vertices: usize,
        k: usize,
        max_vertices: usize,
        max_k: usize,
    },
}

/// One finite list of colours per vertex, each sorted and duplicate-free.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ListAssignment {
    lists: Vec<Vec<Color>>,
}

impl ListAssignment {
    pub fn new(lists: Vec<Vec<Color>>) -> ListAssignment {
        let lists = lists
            .into_iter()
            .map(|l| l.into_iter().collect::<BTreeSet<_>>().into_iter().collect())
            .collect();
        ListAssignment { lists }
    }

    /// The same list on every one of `n` vertices.
    pub fn uniform(n: usize, list: &[Color]) -> ListAssignment {
        ListAssignment::new(vec![list.to_vec(); n])
    }

    pub fn len(&self) -> usize {
        self.lists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lists.is_empty()
    }

    pub fn list(&self, v: usize) -> &[Color] {
        &self.lists[v]
    }

    pub fn lists(&self) -> &[Vec<Color>] {
        &self.lists
    }

    pub fn min_list_len(&self) -> usize {
        self.lists.iter().map(Vec::len).min().unwrap_or(0)
    }

    fn check_shape(&self, g: &Graph) -> Result<(), ListColorError> {
        if self.lists.len() == g.vertex_count() {
            Ok(())
        } else {
            Err(ListColorError::ShapeMismatch {
                vertices: g.vertex_count(),
                lists: self.lists.len(),
            })
        }
    }
}

/// A colour per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Coloring {
    pub colors: Vec<Color>,
}

/// True iff `c` is proper on `g` and picks every colour from its list.
pub fn verify_coloring(g: &Graph, l: &ListAssignment, c: &Coloring) -> bool {
    let n = g.vertex_count();
    if l.len() != n || c.colors.len() != n {
        return false;
    }
    let in_lists = (0..n).all(|v| l.list(v).binary_search(&c.colors[v]).is_ok());
    in_lists && g.edges().all(|(u, v)| c.colors[u] != c.colors[v])
}

/// The degeneracy `d` of `g`: the largest minimum degree over all subgraphs.
/// Greedy colouring along a smallest-last order shows `g` is
/// `(d + 1)`-choosable.
pub fn greedy_degeneracy_bound(g: &Graph) -> usize {
    let n = g.vertex_count();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut best = 0;
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !removed[v])
            .min_by_key(|&v| deg[v])
            .expect("a vertex remains");
        best = best.max(deg[v]);
        removed[v] = true;
        for u in g.neighbors(v) {
            if !removed[u] {
                deg[u] -= 1;
            }
        }
    }
    best
}
