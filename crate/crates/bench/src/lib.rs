//! Shared inputs for the benchmarks.

use kstlist_core::graph::Graph;

pub fn petersen() -> Graph {
    let edges: Vec<(usize, usize)> =
        (0..5).flat_map(|i| [(i, (i + 1) % 5), (i, i + 5), (5 + i, 5 + (i + 2) % 5)]).collect();
    Graph::from_edges(10, edges).unwrap()
}

/// The 4-vertex gadget: cliques {0, 1} and {2, 3}, all cross edges but 0-2.
pub fn fixture() -> Graph {
    Graph::from_edges(4, [(0, 1), (2, 3), (0, 3), (1, 2), (1, 3)])
        .unwrap()
        .with_bipartition(&[0, 1].into_iter().collect())
        .unwrap()
}
