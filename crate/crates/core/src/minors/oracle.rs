//! Brute-force minor oracle, kept independent of the search.
//!
//! Every map from the host's vertices to `|V(F)| + 1` classes (class 0 means
//! "unused") is enumerated and checked against the definition directly.

use super::MinorError;
use crate::graph::Graph;

pub const ORACLE_MAX_VERTICES: usize = 9;

/// Exact `g ⪰ f` by exhaustive class assignment. Refuses hosts with more
/// than [`ORACLE_MAX_VERTICES`] vertices.
pub fn oracle_has_minor(g: &Graph, f: &Graph) -> Result<bool, MinorError> {
    Ok(oracle_find_minor(g, f)?.is_some())
}

/// Like [`oracle_has_minor`], returning the branch sets (as vertex lists
/// indexed by `f`'s vertices) of the first model in enumeration order.
pub fn oracle_find_minor(g: &Graph, f: &Graph) -> Result<Option<Vec<Vec<usize>>>, MinorError> {
    let n = g.vertex_count();
    if n > ORACLE_MAX_VERTICES {
        return Err(MinorError::HostTooLarge {
            n,
            max: ORACLE_MAX_VERTICES,
        });
    }
    let k = f.vertex_count();
    if k > n {
        return Ok(None);
    }
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).fold(0u32, |m, u| m | 1 << u))
        .collect();
    let f_edges: Vec<(usize, usize)> = f.edges().collect();

    let mut digits = vec![0usize; n];
    let mut classes = vec![0u32; k + 1];
    loop {
        classes.iter_mut().for_each(|c| *c = 0);
        for (v, &d) in digits.iter().enumerate() {
            classes[d] |= 1 << v;
        }
        let sets = &classes[1..];
        let ok = sets.iter().all(|&z| z != 0 && connected(&adj, z))
            && f_edges
                .iter()
                .all(|&(a, b)| sets[a] != 0 && touches(&adj, sets[a], sets[b]));
        if ok {
            let expand = |z: u32| (0..n).filter(|&v| z >> v & 1 == 1).collect();
            return Ok(Some(sets.iter().map(|&z| expand(z)).collect()));
        }
        // Odometer increment in base k + 1.
        let mut pos = 0;
        loop {
            if pos == n {
                return Ok(None);
            }
            digits[pos] += 1;
            if digits[pos] <= k {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}

fn connected(adj: &[u32], z: u32) -> bool {
    let mut seen = z & z.wrapping_neg();
    loop {
        let mut grown = seen;
        for (v, &row) in adj.iter().enumerate() {
            if seen >> v & 1 == 1 {
                grown |= row & z;
            }
        }
        if grown == seen {
            return seen == z;
        }
        seen = grown;
    }
}

fn touches(adj: &[u32], a: u32, b: u32) -> bool {
    (0..adj.len()).any(|v| a >> v & 1 == 1 && adj[v] & b != 0)
}
