//! The random bipartite graph and its two properties.
//!
//! Only collections of exactly `k = ⌈εn⌉` sets are examined. A collection
//! with more sets contains one with `k` sets, and a fully joined pair of the
//! smaller collection is one of the larger, so this is no loss.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::params::Lemma3Params;
use super::rational::{ceil_int, to_f64, Rational};
use super::{derive_seed, ConstructionError};
use crate::graph::{Graph, Side};

/// `n^(−δ)`.
pub fn edge_probability(n: usize, delta: &Rational) -> f64 {
    (n as f64).powf(-to_f64(delta))
}

/// `G(⌊Cn⌋, n, n^(−δ))` with side `A` on vertices `0..⌊Cn⌋` and side `B` on
/// the next `n`. Pairs are drawn in row-major order from a ChaCha stream
/// seeded by `seed`.
pub fn sample_bipartite(n: usize, params: &Lemma3Params, seed: u64) -> Result<Graph, ConstructionError> {
    if n < 2 {
        return Err(ConstructionError::InvalidSizes(format!("n must be at least 2, got {n}")));
    }
    let m = params.m_for(n);
    let p = edge_probability(n, &params.delta);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::empty(m + n);
    for a in 0..m {
        g.set_label(a, Some(Side::A));
        for b in m..m + n {
            if rng.random_bool(p) {
                g.insert_edge(a, b);
            }
        }
    }
    for b in m..m + n {
        g.set_label(b, Some(Side::B));
    }
    Ok(g)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum DegreeCheck {
    Pass,
    /// The first vertex of largest cross-degree.
    Fail { vertex: usize, degree: usize },
}

impl DegreeCheck {
    pub fn passed(&self) -> bool {
        matches!(self, DegreeCheck::Pass)
    }
}

/// Neighbours of `v` carrying the other side's label.
pub fn cross_degree(g: &Graph, v: usize) -> usize {
    match g.label(v) {
        None => 0,
        Some(side) => g.neighbors(v).filter(|&u| g.label(u).is_some_and(|l| l != side)).count(),
    }
}

fn require_bipartition(g: &Graph) -> Result<(Vec<usize>, Vec<usize>), ConstructionError> {
    if !g.is_labelled() {
        return Err(ConstructionError::NotLabelled);
    }
    let a = g.part(Side::A).iter().collect();
    let b = g.part(Side::B).iter().collect();
    Ok((a, b))
}

/// Pass iff every cross-degree is at most `ε·n` (compared exactly).
pub fn check_degree_property(g: &Graph, epsilon: &Rational, n: usize) -> Result<DegreeCheck, ConstructionError> {
    require_bipartition(g)?;
    let limit = *epsilon * Rational::from_integer(n as i128);
    let worst = (0..g.vertex_count())
        .map(|v| (cross_degree(g, v), v))
        .max_by_key(|&(d, v)| (d, std::cmp::Reverse(v)));
    Ok(match worst {
        Some((degree, vertex)) if Rational::from_integer(degree as i128) > limit => DegreeCheck::Fail { vertex, degree },
        _ => DegreeCheck::Pass,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum BlockMode {
    /// Every collection, refused once the search would exceed `node_cap`
    /// set choices.
    Exhaustive { node_cap: u64 },
    /// `trials` random collections, each from its own stream.
    Sampled { trials: u64 },
}

/// Disjoint sets `X_1..X_k` on side `A` and `Y_1..Y_k` on side `B`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockWitness {
    pub xs: Vec<Vec<usize>>,
    pub ys: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum BlockStatus {
    Verified,
    /// A collection with no fully joined pair.
    Falsified { witness: BlockWitness },
    UnknownSampled { trials: u64, failures: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockReport {
    pub status: BlockStatus,
    pub mode: BlockMode,
    pub k: usize,
    pub f: u64,
    /// Collections drawn (sampled mode).
    pub trials: u64,
    /// Drawn collections without a fully joined pair (sampled mode).
    pub failures: u64,
    /// Set choices made (exhaustive mode).
    pub nodes: u64,
}

/// `⌈εn⌉`.
pub fn block_count(epsilon: &Rational, n: usize) -> usize {
    ceil_int(&(*epsilon * Rational::from_integer(n as i128))) as usize
}

/// Whether `w` is a valid collection of `k` sets of size at most `f` with no
/// fully joined pair. Checked directly against the definition.
pub fn is_block_witness(g: &Graph, f: u64, k: usize, w: &BlockWitness) -> bool {
    if w.xs.len() != k || w.ys.len() != k {
        return false;
    }
    let mut seen = vec![false; g.vertex_count()];
    for (sets, side) in [(&w.xs, Side::A), (&w.ys, Side::B)] {
        for set in sets {
            if set.is_empty() || set.len() as u64 > f {
                return false;
            }
            for &v in set {
                if v >= g.vertex_count() || g.label(v) != Some(side) || seen[v] {
                    return false;
                }
                seen[v] = true;
            }
        }
    }
    !w.xs.iter().any(|x| w.ys.iter().any(|y| x.iter().all(|&a| y.iter().all(|&b| g.has_edge(a, b)))))
}

/// Checks that every collection of `⌈εn⌉` disjoint non-empty sets of size at
/// most `f` per side has a fully joined pair. `seed` drives sampled mode.
pub fn check_block_property(
    g: &Graph,
    f: u64,
    epsilon: &Rational,
    n: usize,
    mode: BlockMode,
    seed: u64,
) -> Result<BlockReport, ConstructionError> {
    let (a, b) = require_bipartition(g)?;
    let k = block_count(epsilon, n);
    let mut report = BlockReport {
        status: BlockStatus::Verified,
        mode,
        k,
        f,
        trials: 0,
        failures: 0,
        nodes: 0,
    };
    if f == 0 || k > a.len() || k > b.len() {
        // No collection exists.
        return Ok(report);
    }
    match mode {
        BlockMode::Sampled { trials } => {
            let (failures, first) = (0..trials)
                .into_par_iter()
                .map(|i| match sample_collection(g, &a, &b, f, k, derive_seed(seed, i)) {
                    Some(_) => (1u64, i),
                    None => (0, u64::MAX),
                })
                .reduce(|| (0, u64::MAX), |x, y| (x.0 + y.0, x.1.min(y.1)));
            report.trials = trials;
            report.failures = failures;
            report.status = if failures == 0 {
                BlockStatus::UnknownSampled { trials, failures }
            } else {
                let witness = sample_collection(g, &a, &b, f, k, derive_seed(seed, first)).expect("replayed failure");
                BlockStatus::Falsified { witness }
            };
        }
        BlockMode::Exhaustive { node_cap } => {
            if g.vertex_count() > 64 {
                return Err(ConstructionError::ExhaustiveCapExceeded {
                    reason: format!("{} vertices (at most 64 supported)", g.vertex_count()),
                });
            }
            let masks = g.masks().expect("at most 64 vertices");
            let mut search = Exhaustive {
                masks: &masks,
                a: &a,
                b: &b,
                f: f as usize,
                k,
                nodes: 0,
                cap: node_cap,
                xs: Vec::new(),
                ys: Vec::new(),
            };
            let found = search.choose_x(0)?;
            report.nodes = search.nodes;
            if found {
                let expand = |sets: &[u64]| sets.iter().map(|&s| bits(s).collect()).collect();
                report.status = BlockStatus::Falsified {
                    witness: BlockWitness {
                        xs: expand(&search.xs),
                        ys: expand(&search.ys),
                    },
                };
            }
        }
    }
    Ok(report)
}

/// Draws one collection and returns it if it has no fully joined pair.
fn sample_collection(g: &Graph, a: &[usize], b: &[usize], f: u64, k: usize, seed: u64) -> Option<BlockWitness> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xs = random_disjoint_sets(&mut rng, a, f as usize, k);
    let ys = random_disjoint_sets(&mut rng, b, f as usize, k);
    let joined = |x: &Vec<usize>, y: &Vec<usize>| x.iter().all(|&u| y.iter().all(|&v| g.has_edge(u, v)));
    let any_joined = xs.iter().any(|x| ys.iter().any(|y| joined(x, y)));
    (!any_joined).then_some(BlockWitness { xs, ys })
}

/// `k` disjoint non-empty sets of size at most `f` drawn from a shuffle of
/// `pool`; needs `k <= pool.len()`.
fn random_disjoint_sets(rng: &mut ChaCha8Rng, pool: &[usize], f: usize, k: usize) -> Vec<Vec<usize>> {
    let mut order = pool.to_vec();
    order.shuffle(rng);
    let mut sets = Vec::with_capacity(k);
    let mut next = 0;
    for i in 0..k {
        let room = order.len() - next - (k - i - 1);
        let size = rng.random_range(1..=f.min(room));
        let mut set = order[next..next + size].to_vec();
        set.sort_unstable();
        sets.push(set);
        next += size;
    }
    sets
}

struct Exhaustive<'a> {
    masks: &'a [u64],
    a: &'a [usize],
    b: &'a [usize],
    f: usize,
    k: usize,
    nodes: u64,
    cap: u64,
    xs: Vec<u64>,
    ys: Vec<u64>,
}

impl Exhaustive<'_> {
    fn tick(&mut self) -> Result<(), ConstructionError> {
        self.nodes += 1;
        if self.nodes > self.cap {
            return Err(ConstructionError::ExhaustiveCapExceeded {
                reason: format!("more than {} set choices", self.cap),
            });
        }
        Ok(())
    }

    fn used(&self) -> u64 {
        self.xs.iter().chain(&self.ys).fold(0, |m, s| m | s)
    }

    /// Sets are listed in increasing order of their least vertex; `from`
    /// indexes the pool entry after the previous set's least vertex.
    fn choose_x(&mut self, from: usize) -> Result<bool, ConstructionError> {
        if self.xs.len() == self.k {
            return self.choose_y(0);
        }
        let pool = self.a;
        self.choose_set(pool, from, true)
    }

    fn choose_y(&mut self, from: usize) -> Result<bool, ConstructionError> {
        if self.ys.len() == self.k {
            return Ok(true);
        }
        let pool = self.b;
        self.choose_set(pool, from, false)
    }

    fn choose_set(&mut self, pool: &[usize], from: usize, on_a: bool) -> Result<bool, ConstructionError> {
        let placed = if on_a { self.xs.len() } else { self.ys.len() };
        let used = self.used();
        let free: Vec<usize> = (from..pool.len()).filter(|&i| used >> pool[i] & 1 == 0).collect();
        if free.len() < self.k - placed {
            return Ok(false);
        }
        for (pos, &lead) in free.iter().enumerate() {
            let rest = &free[pos + 1..];
            let mut extra: Vec<usize> = Vec::new();
            if self.extend(pool, lead, rest, 0, &mut extra, on_a)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Enumerates the set `{lead} ∪ extra ∪ …` with further elements drawn
    /// from `rest[start..]`.
    fn extend(
        &mut self,
        pool: &[usize],
        lead: usize,
        rest: &[usize],
        start: usize,
        extra: &mut Vec<usize>,
        on_a: bool,
    ) -> Result<bool, ConstructionError> {
        let set = extra.iter().fold(1u64 << pool[lead], |m, &i| m | 1 << pool[i]);
        if self.try_set(set, lead, on_a)? {
            return Ok(true);
        }
        if extra.len() + 1 < self.f {
            for i in start..rest.len() {
                extra.push(rest[i]);
                let found = self.extend(pool, lead, rest, i + 1, extra, on_a)?;
                extra.pop();
                if found {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    fn try_set(&mut self, set: u64, lead: usize, on_a: bool) -> Result<bool, ConstructionError> {
        self.tick()?;
        if on_a {
            self.xs.push(set);
            let found = self.choose_x(lead + 1)?;
            if !found {
                self.xs.pop();
            }
            return Ok(found);
        }
        // A new Y must not be fully joined to any X.
        let joined = self.xs.iter().any(|&x| {
            let common = bits(x).fold(u64::MAX, |m, v| m & self.masks[v]);
            set & !common == 0
        });
        if joined {
            return Ok(false);
        }
        self.ys.push(set);
        let found = self.choose_y(lead + 1)?;
        if !found {
            self.ys.pop();
        }
        Ok(found)
    }
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            i
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::derive_lemma3_params;

    fn r(p: i128, q: i128) -> Rational {
        Rational::new(p, q)
    }

    fn bipartite(m: usize, n: usize, edges: &[(usize, usize)]) -> Graph {
        let g = Graph::from_edges(m + n, edges.iter().map(|&(a, b)| (a, m + b))).unwrap();
        g.with_bipartition(&(0..m).collect()).unwrap()
    }

    #[test]
    fn probability_formula() {
        assert!((edge_probability(256, &r(1, 16)) - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn sampler_shape_and_determinism() {
        let p = derive_lemma3_params(r(1, 2), r(1, 1)).unwrap();
        let g = sample_bipartite(100, &p, 3).unwrap();
        assert_eq!(g.part(Side::A).len(), 100);
        assert_eq!(g.part(Side::B).len(), 100);
        assert_eq!(g, sample_bipartite(100, &p, 3).unwrap());
        assert_ne!(g, sample_bipartite(100, &p, 4).unwrap());
        assert!(g.edges().all(|(u, v)| g.label(u) != g.label(v)));
        let c = derive_lemma3_params(r(1, 2), r(3, 2)).unwrap();
        assert_eq!(sample_bipartite(5, &c, 0).unwrap().part(Side::A).len(), 7);
        assert!(sample_bipartite(1, &p, 0).is_err());
    }

    #[test]
    fn degree_property() {
        let empty = bipartite(3, 3, &[]);
        assert_eq!(check_degree_property(&empty, &r(1, 100), 3).unwrap(), DegreeCheck::Pass);
        let full = Graph::complete_bipartite(4, 4);
        assert_eq!(
            check_degree_property(&full, &r(9, 10), 4).unwrap(),
            DegreeCheck::Fail { vertex: 0, degree: 4 }
        );
        assert!(check_degree_property(&Graph::cycle(4), &r(1, 2), 4).is_err());
        // Exactly at the limit passes.
        assert!(check_degree_property(&full, &r(1, 1), 4).unwrap().passed());
    }

    #[test]
    fn complete_bipartite_verifies() {
        let full = Graph::complete_bipartite(4, 4);
        let rep = check_block_property(&full, 2, &r(1, 2), 4, BlockMode::Exhaustive { node_cap: 1 << 20 }, 0).unwrap();
        assert_eq!(rep.status, BlockStatus::Verified);
        assert_eq!(rep.k, 2);
        let rep = check_block_property(&full, 2, &r(1, 2), 4, BlockMode::Sampled { trials: 50 }, 9).unwrap();
        assert_eq!(rep.status, BlockStatus::UnknownSampled { trials: 50, failures: 0 });
    }

    #[test]
    fn edgeless_falsifies_in_both_modes() {
        let g = bipartite(4, 4, &[]);
        for mode in [BlockMode::Exhaustive { node_cap: 1000 }, BlockMode::Sampled { trials: 10 }] {
            let rep = check_block_property(&g, 1, &r(1, 2), 4, mode, 1).unwrap();
            let BlockStatus::Falsified { witness } = &rep.status else {
                panic!("{rep:?}");
            };
            assert!(is_block_witness(&g, 1, 2, witness));
        }
    }

    #[test]
    fn exhaustive_refuses_over_cap() {
        let g = bipartite(6, 6, &[]);
        let full = Graph::complete_bipartite(6, 6);
        assert!(check_block_property(&full, 3, &r(1, 2), 6, BlockMode::Exhaustive { node_cap: 10 }, 0).is_err());
        assert!(check_block_property(&g, 3, &r(1, 2), 6, BlockMode::Exhaustive { node_cap: 10 }, 0).is_ok());
    }

    #[test]
    fn witness_checker_rejects_malformed() {
        let g = bipartite(2, 2, &[]);
        let ok = BlockWitness { xs: vec![vec![0], vec![1]], ys: vec![vec![2], vec![3]] };
        assert!(is_block_witness(&g, 1, 2, &ok));
        let overlap = BlockWitness { xs: vec![vec![0], vec![0]], ys: vec![vec![2], vec![3]] };
        assert!(!is_block_witness(&g, 1, 2, &overlap));
        let wrong_side = BlockWitness { xs: vec![vec![0], vec![2]], ys: vec![vec![1], vec![3]] };
        assert!(!is_block_witness(&g, 1, 2, &wrong_side));
        let joined = bipartite(2, 2, &[(0, 0)]);
        assert!(!is_block_witness(&joined, 1, 2, &ok));
    }

    #[test]
    fn random_sets_respect_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let pool: Vec<usize> = (10..20).collect();
        for k in 1..=10 {
            let sets = random_disjoint_sets(&mut rng, &pool, 3, k);
            assert_eq!(sets.len(), k);
            let total: usize = sets.iter().map(Vec::len).sum();
            assert!(total <= 10 && sets.iter().all(|s| (1..=3).contains(&s.len())));
        }
    }
}
