//! Exact searches checked against brute-force enumeration on tiny inputs.

use kstlist_core::construction::{check_block_property, BlockMode, BlockStatus, Rational};
use kstlist_core::graph::{Graph, Side};
use kstlist_core::listcolor::{find_l_coloring, is_k_choosable, Color, ListAssignment};
use kstlist_core::minors::{find_kst_minor, oracle_has_minor, MinorOutcome, MinorQuery};

/// True iff some choice from the lists is proper.
fn brute_colourable(g: &Graph, lists: &[Vec<Color>]) -> bool {
    let n = g.vertex_count();
    let mut pick = vec![0usize; n];
    loop {
        if g.edges().all(|(u, v)| lists[u][pick[u]] != lists[v][pick[v]]) {
            return true;
        }
        let mut i = 0;
        while i < n && pick[i] + 1 == lists[i].len() {
            pick[i] = 0;
            i += 1;
        }
        if i == n {
            return false;
        }
        pick[i] += 1;
    }
}

fn k_subsets(universe: usize, k: usize) -> Vec<Vec<Color>> {
    (0u32..1 << universe)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..universe as Color).filter(|&c| m >> c & 1 == 1).map(|c| c + 1).collect())
        .collect()
}

/// Every assignment of k-subsets of a palette of size k·n. Any list
/// assignment is a relabelling of one of these.
fn brute_choosable(g: &Graph, k: usize) -> bool {
    let n = g.vertex_count();
    let subsets = k_subsets(k * n, k);
    let mut pick = vec![0usize; n];
    loop {
        let lists: Vec<Vec<Color>> = pick.iter().map(|&i| subsets[i].clone()).collect();
        if !brute_colourable(g, &lists) {
            return false;
        }
        let mut i = 0;
        while i < n && pick[i] + 1 == subsets.len() {
            pick[i] = 0;
            i += 1;
        }
        if i == n {
            return true;
        }
        pick[i] += 1;
    }
}

fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    (0u32..1 << pairs.len())
        .map(move |m| Graph::from_edges(n, (0..pairs.len()).filter(|&e| m >> e & 1 == 1).map(|e| pairs[e])).unwrap())
}

#[test]
fn choosability_matches_enumeration_on_three_vertices() {
    for g in all_graphs(3) {
        for k in 1..=3 {
            assert_eq!(is_k_choosable(&g, k).unwrap().is_choosable(), brute_choosable(&g, k), "{:?} k={k}", g.canonical_edges());
        }
    }
}

#[test]
fn two_choosability_matches_enumeration_on_four_vertices() {
    // One representative per edge set up to the symmetric cases that matter:
    // the enumeration is too slow to run on all 64 labelled graphs.
    let graphs = [
        Graph::empty(4),
        Graph::path(4),
        Graph::cycle(4),
        Graph::complete(4),
        Graph::from_edges(4, [(0, 1), (1, 2), (2, 0), (2, 3)]).unwrap(),
        Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap(),
        Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap(),
    ];
    for g in graphs {
        let verdict = is_k_choosable(&g, 2).unwrap();
        assert_eq!(verdict.is_choosable(), brute_choosable(&g, 2), "{:?}", g.canonical_edges());
    }
}

#[test]
fn solver_matches_enumeration_on_small_lists() {
    let palette = [1, 2, 3];
    for g in all_graphs(4) {
        // Lists cycle through the non-empty subsets of {1, 2, 3}.
        for shift in 0..7 {
            let lists: Vec<Vec<Color>> = (0..4)
                .map(|v| {
                    let m = (v * 3 + shift) % 7 + 1;
                    palette.iter().copied().filter(|&c| m >> (c - 1) & 1 == 1).collect()
                })
                .collect();
            let found = find_l_coloring(&g, &ListAssignment::new(lists.clone())).unwrap();
            assert_eq!(found.is_some(), brute_colourable(&g, &lists));
        }
    }
}

#[test]
fn minor_search_matches_oracle_on_petersen_contraction() {
    // Petersen graph with the edge 0-1 contracted: 9 vertices.
    let petersen: Vec<(usize, usize)> =
        (0..5).flat_map(|i| [(i, (i + 1) % 5), (i, i + 5), (5 + i, 5 + (i + 2) % 5)]).collect();
    let contracted: Vec<(usize, usize)> = petersen
        .iter()
        .filter(|&&e| e != (0, 1))
        .map(|&(u, v)| {
            let f = |x: usize| if x == 1 { 0 } else if x > 1 { x - 1 } else { x };
            (f(u).min(f(v)), f(u).max(f(v)))
        })
        .collect();
    let g = Graph::from_edges(9, contracted).unwrap();
    for (s, t) in [(2, 2), (2, 3), (3, 3), (2, 4)] {
        let q = MinorQuery::new(s, t).unwrap();
        let found = matches!(find_kst_minor(&g, q, None).unwrap(), MinorOutcome::Found(_));
        assert_eq!(found, oracle_has_minor(&g, &q.target()).unwrap(), "K_{{{s},{t}}}");
    }
}

/// Every pair of k disjoint non-empty sets of size at most f on each side,
/// by assigning each vertex to one of the k sets or to none.
fn brute_block_property(g: &Graph, f: usize, k: usize) -> bool {
    let a: Vec<usize> = g.part(Side::A).iter().collect();
    let b: Vec<usize> = g.part(Side::B).iter().collect();
    let collections = |side: &[usize]| -> Vec<Vec<Vec<usize>>> {
        let mut out = Vec::new();
        let total = (k + 1).pow(side.len() as u32);
        for code in 0..total {
            let mut sets = vec![Vec::new(); k];
            let mut c = code;
            for &v in side {
                if c % (k + 1) > 0 {
                    sets[c % (k + 1) - 1].push(v);
                }
                c /= k + 1;
            }
            if sets.iter().all(|s| !s.is_empty() && s.len() <= f) {
                out.push(sets);
            }
        }
        out
    };
    let joined = |x: &[usize], y: &[usize]| x.iter().all(|&u| y.iter().all(|&v| g.has_edge(u, v)));
    collections(&a)
        .iter()
        .all(|xs| collections(&b).iter().all(|ys| xs.iter().any(|x| ys.iter().any(|y| joined(x, y)))))
}

#[test]
fn exhaustive_block_check_matches_enumeration() {
    // n = 4, ε = 1/2: k = 2; f = 1 and f = 2 on all bipartite graphs with
    // |A| = |B| = 4 whose cross edges come from a fixed family of masks.
    let eps = Rational::new(1, 2);
    let mut seen = [0usize; 2];
    for seed in 0u32..256 {
        let mut edges = Vec::new();
        for i in 0..4 {
            for j in 0..4 {
                let bit = (seed.wrapping_mul(2_654_435_761) >> ((i * 4 + j) % 29)) & 1;
                if bit == 1 || (i + j + seed as usize) % 3 == 0 {
                    edges.push((i, 4 + j));
                }
            }
        }
        let g = Graph::from_edges(8, edges).unwrap().with_bipartition(&(0..4).collect()).unwrap();
        for f in [1u64, 2] {
            let report = check_block_property(&g, f, &eps, 4, BlockMode::Exhaustive { node_cap: 1_000_000 }, 0).unwrap();
            let holds = matches!(report.status, BlockStatus::Verified);
            assert_eq!(holds, brute_block_property(&g, f as usize, 2), "seed {seed} f {f}");
            seen[usize::from(holds)] += 1;
        }
    }
    assert!(seen[0] > 0 && seen[1] > 0, "{seen:?}");
}
