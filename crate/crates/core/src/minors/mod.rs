//! `K_{s,t}` minors: branch-set models, their verification, an exact
//! backtracking search and a brute-force oracle for small hosts.
//!
//! A model of `K_{s,t}` in `G` is a family of pairwise disjoint, non-empty
//! vertex sets, `s` on one side and `t` on the other, each inducing a
//! connected subgraph, such that every set of one side has an edge to every
//! set of the other side.

mod oracle;
mod search;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, VertexSet};

pub use oracle::{oracle_find_minor, oracle_has_minor, ORACLE_MAX_VERTICES};
pub use search::{find_kst_minor, find_kst_minor_with, SearchOptions, SearchReport, MAX_HOST_VERTICES};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MinorError {
    #[error("invalid query K_{{{s},{t}}}: need 1 <= s <= t")]
    InvalidQuery { s: usize, t: usize },
    #[error("host has {n} vertices; the search handles at most {max}")]
    HostTooLarge { n: usize, max: usize },
}

/// A request for a `K_{s,t}` minor, `1 <= s <= t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MinorQuery {
    s: usize,
    t: usize,
}

impl MinorQuery {
    pub fn new(s: usize, t: usize) -> Result<MinorQuery, MinorError> {
        if s >= 1 && s <= t {
            Ok(MinorQuery { s, t })
        } else {
            Err(MinorError::InvalidQuery { s, t })
        }
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn target(&self) -> Graph {
        Graph::complete_bipartite(self.s, self.t)
    }
}

/// Branch sets of a `K_{s,t}` model; every set is sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BranchModel {
    pub side1: Vec<Vec<usize>>,
    pub side2: Vec<Vec<usize>>,
}

impl BranchModel {
    /// Builds a model from arbitrary sets, sorting and deduplicating each.
    pub fn new<I, J>(side1: I, side2: I) -> BranchModel
    where
        I: IntoIterator<Item = J>,
        J: IntoIterator<Item = usize>,
    {
        let norm = |sets: I| -> Vec<Vec<usize>> {
            sets.into_iter()
                .map(|s| s.into_iter().collect::<VertexSet>().iter().collect())
                .collect()
        };
        BranchModel {
            side1: norm(side1),
            side2: norm(side2),
        }
    }

    pub(crate) fn from_masks(side1: &[u64], side2: &[u64]) -> BranchModel {
        let expand = |m: &u64| VertexSet::from_mask(*m).iter().collect();
        BranchModel {
            side1: side1.iter().map(expand).collect(),
            side2: side2.iter().map(expand).collect(),
        }
    }

    fn all_sets(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.side1.iter().chain(&self.side2)
    }
}

/// The first clause of the model definition that a candidate violates.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelViolation {
    #[error("expected {expected} sets on side {side}, found {found}")]
    SideSize { side: u8, expected: usize, found: usize },
    #[error("a branch set on side {side} is empty")]
    EmptySet { side: u8 },
    #[error("vertex {0} is not in the host")]
    OutOfRange(usize),
    #[error("vertex {0} lies in two branch sets")]
    Overlap(usize),
    #[error("branch set {set:?} does not induce a connected subgraph")]
    Disconnected { set: Vec<usize> },
    #[error("no edge between side-1 set {i} and side-2 set {j}")]
    MissingEdge { i: usize, j: usize },
}

/// Checks every clause of the model definition against `g` and `q`.
pub fn check_model(g: &Graph, m: &BranchModel, q: MinorQuery) -> Result<(), ModelViolation> {
    for (side, sets, expected) in [(1u8, &m.side1, q.s), (2, &m.side2, q.t)] {
        if sets.len() != expected {
            return Err(ModelViolation::SideSize {
                side,
                expected,
                found: sets.len(),
            });
        }
        if sets.iter().any(Vec::is_empty) {
            return Err(ModelViolation::EmptySet { side });
        }
    }
    let mut owner = vec![false; g.vertex_count()];
    for set in m.all_sets() {
        for &v in set {
            if v >= g.vertex_count() {
                return Err(ModelViolation::OutOfRange(v));
            }
            if std::mem::replace(&mut owner[v], true) {
                return Err(ModelViolation::Overlap(v));
            }
        }
    }
    for set in m.all_sets() {
        let vs: VertexSet = set.iter().copied().collect();
        if !g.is_connected_set(&vs) {
            return Err(ModelViolation::Disconnected { set: set.clone() });
        }
    }
    for (i, a) in m.side1.iter().enumerate() {
        for (j, b) in m.side2.iter().enumerate() {
            let touching = a.iter().any(|&u| b.iter().any(|&v| g.has_edge(u, v)));
            if !touching {
                return Err(ModelViolation::MissingEdge { i, j });
            }
        }
    }
    Ok(())
}

pub fn verify_model(g: &Graph, m: &BranchModel, q: MinorQuery) -> bool {
    check_model(g, m, q).is_ok()
}

/// Outcome of a budgeted search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "model", rename_all = "snake_case")]
pub enum MinorOutcome {
    Found(BranchModel),
    NotFound,
    BudgetExhausted,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c4_model() -> BranchModel {
        BranchModel::new(vec![vec![0], vec![2]], vec![vec![1], vec![3]])
    }

    #[test]
    fn query_validation() {
        assert!(MinorQuery::new(2, 3).is_ok());
        assert_eq!(MinorQuery::new(3, 2), Err(MinorError::InvalidQuery { s: 3, t: 2 }));
        assert!(MinorQuery::new(0, 1).is_err());
    }

    #[test]
    fn c4_is_k22() {
        let q = MinorQuery::new(2, 2).unwrap();
        assert!(verify_model(&Graph::cycle(4), &c4_model(), q));
    }

    #[test]
    fn emptied_set_is_rejected() {
        let q = MinorQuery::new(2, 2).unwrap();
        let mut m = c4_model();
        m.side2[1].clear();
        assert_eq!(check_model(&Graph::cycle(4), &m, q), Err(ModelViolation::EmptySet { side: 2 }));
    }

    #[test]
    fn disconnected_set_is_rejected() {
        let q = MinorQuery::new(1, 1).unwrap();
        let m = BranchModel::new(vec![vec![0, 2]], vec![vec![1]]);
        assert_eq!(
            check_model(&Graph::path(4), &m, q),
            Err(ModelViolation::Disconnected { set: vec![0, 2] })
        );
    }

    #[test]
    fn other_violations() {
        let g = Graph::path(4);
        let q = MinorQuery::new(1, 2).unwrap();
        let overlap = BranchModel::new(vec![vec![1]], vec![vec![0, 1], vec![2]]);
        assert_eq!(check_model(&g, &overlap, q), Err(ModelViolation::Overlap(1)));
        let far = BranchModel::new(vec![vec![0]], vec![vec![1], vec![3]]);
        assert_eq!(check_model(&g, &far, q), Err(ModelViolation::MissingEdge { i: 0, j: 1 }));
        let out = BranchModel::new(vec![vec![9]], vec![vec![1], vec![3]]);
        assert_eq!(check_model(&g, &out, q), Err(ModelViolation::OutOfRange(9)));
        let short = BranchModel::new(vec![vec![1]], vec![vec![0]]);
        assert!(matches!(check_model(&g, &short, q), Err(ModelViolation::SideSize { side: 2, .. })));
    }

    #[test]
    fn model_json_shape() {
        let m = BranchModel::new(vec![vec![2, 0]], vec![vec![1], vec![3]]);
        assert_eq!(serde_json::to_string(&m).unwrap(), r#"{"side1":[[0,2]],"side2":[[1],[3]]}"#);
    }
}
