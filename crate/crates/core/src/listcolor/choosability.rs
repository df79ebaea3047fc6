//! Exact k-choosability by enumerating adversarial list assignments.
//!
//! Completeness: lists larger than `k` only help the colourer, so it is
//! enough to consider lists of size exactly `k`. Such an assignment uses at
//! most `k * |V|` colours, and colours are interchangeable, so every
//! assignment is equivalent to one in which colours are numbered by first
//! appearance along a fixed vertex order. The enumeration generates exactly
//! those canonical assignments: the list of the next vertex is any `j` of the
//! colours used so far together with the next `k - j` unused colours. The
//! universe therefore never exceeds `k * |V|`.
//!
//! The search keeps every proper colouring of the listed prefix, which
//! gives three exact cut-offs:
//! * no colouring of the prefix: any completion is a witness;
//! * some colouring of the prefix leaves every unlisted vertex able to be
//!   coloured greedily in some order, whatever its list: no witness below;
//! * one vertex left: lists that defeat every prefix colouring are exactly
//!   the k-subsets of the colours every such colouring puts on its
//!   neighbourhood, so the last level is decided without enumeration.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Color, ListAssignment, ListColorError};
use crate::graph::Graph;

const SPLIT_DEPTH: usize = 2;

/// Largest instance the exact check accepts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChoosabilityCap {
    pub max_vertices: usize,
    pub max_k: usize,
}

impl Default for ChoosabilityCap {
    fn default() -> ChoosabilityCap {
        ChoosabilityCap {
            max_vertices: 8,
            max_k: 3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChoosabilityOptions {
    pub cap: ChoosabilityCap,
    pub threads: usize,
    pub deterministic: bool,
}

impl Default for ChoosabilityOptions {
    fn default() -> ChoosabilityOptions {
        ChoosabilityOptions {
            cap: ChoosabilityCap::default(),
            threads: 1,
            deterministic: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "witness", rename_all = "snake_case")]
pub enum ChoosabilityOutcome {
    Choosable,
    /// Every list has exactly `k` colours and no L-colouring exists.
    NotChoosable(ListAssignment),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChoosabilityVerdict {
    pub k: usize,
    pub outcome: ChoosabilityOutcome,
    pub universe_size: usize,
}

impl ChoosabilityVerdict {
    pub fn is_choosable(&self) -> bool {
        matches!(self.outcome, ChoosabilityOutcome::Choosable)
    }
}

/// Decides k-choosability exactly under the default cap.
pub fn is_k_choosable(g: &Graph, k: usize) -> Result<ChoosabilityVerdict, ListColorError> {
    is_k_choosable_with(g, k, &ChoosabilityOptions::default())
}

pub fn is_k_choosable_with(
    g: &Graph,
    k: usize,
    opts: &ChoosabilityOptions,
) -> Result<ChoosabilityVerdict, ListColorError> {
    if k == 0 {
        return Err(ListColorError::InvalidK);
    }
    let n = g.vertex_count();
    if n > opts.cap.max_vertices || k > opts.cap.max_k || n > 64 || k * n > MAX_UNIVERSE {
        return Err(ListColorError::CapExceeded {
            vertices: n,
            k,
            max_vertices: opts.cap.max_vertices,
            max_k: opts.cap.max_k,
        });
    }

    let search = Enumeration::new(g, k);
    let mut tasks = Vec::new();
    search.split(&search.root(), SPLIT_DEPTH, &mut tasks);

    let witness = if opts.threads == 1 {
        tasks.iter().find_map(|t| search.run(t, None))
    } else {
        let run = || search.run_parallel(&tasks, opts.deterministic);
        if opts.threads == 0 {
            run()
        } else {
            match rayon::ThreadPoolBuilder::new().num_threads(opts.threads).build() {
                Ok(pool) => pool.install(run),
                Err(_) => tasks.iter().find_map(|t| search.run(t, None)),
            }
        }
    };

    Ok(ChoosabilityVerdict {
        k,
        outcome: match witness {
            Some(w) => ChoosabilityOutcome::NotChoosable(w),
            None => ChoosabilityOutcome::Choosable,
        },
        universe_size: k * n,
    })
}

/// Colours are bits `0..MAX_UNIVERSE` of a mask; bit `i` is colour `i + 1`.
type ColorSet = u128;

/// Hard ceiling on `k * |V|` regardless of the configured cap.
pub const MAX_UNIVERSE: usize = 128;

enum Task {
    /// Decided while splitting.
    Done(Option<ListAssignment>),
    Open(Node),
}

/// Lists on a prefix of the vertex order together with every proper
/// colouring of that prefix.
#[derive(Clone)]
struct Node {
    lists: Vec<ColorSet>,
    /// Colours `1..=used` appear in `lists`.
    used: usize,
    /// Colour indices, `lists.len()` per colouring.
    colorings: Vec<u8>,
}

enum Status {
    Witness(ListAssignment),
    Clear,
    Expand,
}

struct Enumeration {
    k: usize,
    /// Vertex order: each next vertex has the most neighbours among earlier
    /// ones, ties by higher degree then lowest index.
    order: Vec<usize>,
    /// Adjacency between order positions.
    adj: Vec<u64>,
}

impl Enumeration {
    fn new(g: &Graph, k: usize) -> Enumeration {
        let n = g.vertex_count();
        let mut order = Vec::with_capacity(n);
        let mut placed = vec![false; n];
        for _ in 0..n {
            let v = (0..n)
                .filter(|&v| !placed[v])
                .max_by_key(|&v| {
                    let back = g.neighbors(v).filter(|&u| placed[u]).count();
                    (back, g.degree(v), std::cmp::Reverse(v))
                })
                .expect("a vertex remains");
            placed[v] = true;
            order.push(v);
        }
        let mut pos = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let adj = order
            .iter()
            .map(|&v| g.neighbors(v).fold(0u64, |m, u| m | 1 << pos[u]))
            .collect();
        Enumeration { k, order, adj }
    }

    fn n(&self) -> usize {
        self.order.len()
    }

    fn root(&self) -> Node {
        Node {
            lists: Vec::new(),
            used: 0,
            colorings: Vec::new(),
        }
    }

    /// Appends a list for the next position and filters the colourings.
    fn child(&self, node: &Node, list: ColorSet, used: usize) -> Node {
        let d = node.lists.len();
        let back = self.adj[d] & ((1u64 << d) - 1);
        let mut colorings = Vec::new();
        let mut extend = |phi: &[u8]| {
            let mut blocked: ColorSet = 0;
            for (p, &c) in phi.iter().enumerate() {
                if back >> p & 1 == 1 {
                    blocked |= 1 << c;
                }
            }
            for c in bits(list & !blocked) {
                colorings.extend_from_slice(phi);
                colorings.push(c as u8);
            }
        };
        if d == 0 {
            extend(&[]);
        } else {
            node.colorings.chunks(d).for_each(&mut extend);
        }
        let mut lists = node.lists.clone();
        lists.push(list);
        Node { lists, used, colorings }
    }

    fn witness(&self, lists: &[ColorSet], used: usize) -> ListAssignment {
        let mut next = used as Color + 1;
        let mut out = vec![Vec::new(); self.n()];
        for (i, &v) in self.order.iter().enumerate() {
            out[v] = match lists.get(i) {
                Some(&l) => bits(l).map(|c| c as Color + 1).collect(),
                None => {
                    let l = (next..next + self.k as Color).collect();
                    next += self.k as Color;
                    l
                }
            };
        }
        ListAssignment::new(out)
    }

    /// Whether, after colouring the prefix by `phi`, the remaining vertices
    /// can always be coloured greedily from lists of size `k`.
    fn extends(&self, phi: &[u8]) -> bool {
        let d = phi.len();
        let n = self.n();
        let mut unpeeled: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 } & !((1u64 << d) - 1);
        let avail: Vec<i64> = (d..n)
            .map(|r| {
                let seen = phi
                    .iter()
                    .enumerate()
                    .filter(|&(p, _)| self.adj[r] >> p & 1 == 1)
                    .fold(0 as ColorSet, |m, (_, &c)| m | 1 << c);
                self.k as i64 - seen.count_ones() as i64
            })
            .collect();
        while unpeeled != 0 {
            let next = bits64(unpeeled).find(|&r| avail[r - d] > (self.adj[r] & unpeeled).count_ones() as i64);
            match next {
                Some(r) => unpeeled &= !(1 << r),
                None => return false,
            }
        }
        true
    }

    fn classify(&self, node: &Node) -> Status {
        let d = node.lists.len();
        let n = self.n();
        if d > 0 && node.colorings.is_empty() {
            return Status::Witness(self.witness(&node.lists, node.used));
        }
        if d == n {
            return Status::Clear;
        }
        let phis = || node.colorings.chunks(d.max(1)).map(move |c| &c[..d]);
        if d == n - 1 && d > 0 {
            let last = self.adj[d];
            let mut forced: ColorSet = ColorSet::MAX;
            for phi in phis() {
                let on_nbhd = phi
                    .iter()
                    .enumerate()
                    .filter(|&(p, _)| last >> p & 1 == 1)
                    .fold(0 as ColorSet, |m, (_, &c)| m | 1 << c);
                forced &= on_nbhd;
            }
            if forced.count_ones() as usize >= self.k {
                let mut lists = node.lists.clone();
                lists.push(bits(forced).take(self.k).fold(0, |m, c| m | 1 << c));
                return Status::Witness(self.witness(&lists, node.used));
            }
            return Status::Clear;
        }
        let root_extends = d == 0 && self.extends(&[]);
        if root_extends || (d > 0 && phis().any(|phi| self.extends(phi))) {
            return Status::Clear;
        }
        Status::Expand
    }

    /// Canonical next lists given that colours `1..=used` appeared so far,
    /// with the colour count after each.
    fn next_lists(&self, used: usize) -> Vec<(ColorSet, usize)> {
        let mut out = Vec::new();
        for reuse in (0..=self.k.min(used)).rev() {
            let fresh = self.k - reuse;
            let fresh_bits: ColorSet = (used..used + fresh).fold(0, |m, c| m | 1 << c);
            for combo in combinations(used, reuse) {
                let l = combo.iter().fold(fresh_bits, |m, &c| m | 1 << c);
                out.push((l, used + fresh));
            }
        }
        out
    }

    fn split(&self, node: &Node, depth: usize, out: &mut Vec<Task>) {
        if depth == 0 {
            out.push(Task::Open(node.clone()));
            return;
        }
        match self.classify(node) {
            Status::Witness(w) => out.push(Task::Done(Some(w))),
            Status::Clear => out.push(Task::Done(None)),
            Status::Expand => {
                for (l, used) in self.next_lists(node.used) {
                    self.split(&self.child(node, l, used), depth - 1, out);
                }
            }
        }
    }

    fn dfs(&self, node: &Node, cancel: Option<&dyn Fn() -> bool>) -> Option<ListAssignment> {
        if cancel.is_some_and(|c| c()) {
            return None;
        }
        match self.classify(node) {
            Status::Witness(w) => Some(w),
            Status::Clear => None,
            Status::Expand => self
                .next_lists(node.used)
                .into_iter()
                .find_map(|(l, used)| self.dfs(&self.child(node, l, used), cancel)),
        }
    }

    fn run(&self, task: &Task, cancel: Option<&dyn Fn() -> bool>) -> Option<ListAssignment> {
        match task {
            Task::Done(d) => d.clone(),
            Task::Open(node) => self.dfs(node, cancel),
        }
    }

    fn run_parallel(&self, tasks: &[Task], deterministic: bool) -> Option<ListAssignment> {
        let first = AtomicUsize::new(usize::MAX);
        let results: Vec<Option<ListAssignment>> = tasks
            .par_iter()
            .enumerate()
            .map(|(i, task)| {
                let stop = || {
                    let f = first.load(Ordering::Relaxed);
                    if deterministic {
                        f < i
                    } else {
                        f != usize::MAX
                    }
                };
                if stop() {
                    return None;
                }
                let found = self.run(task, Some(&stop));
                if found.is_some() {
                    first.fetch_min(i, Ordering::Relaxed);
                }
                found
            })
            .collect();
        results.into_iter().flatten().next()
    }
}

fn bits(mut m: ColorSet) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            i
        })
    })
}

fn bits64(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            i
        })
    })
}

/// All `r`-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..r).collect();
    if r > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut i = r;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - r + i {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..r {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::listcolor::{find_l_coloring, greedy_degeneracy_bound};

    fn big_cap() -> ChoosabilityOptions {
        ChoosabilityOptions {
            cap: ChoosabilityCap {
                max_vertices: 8,
                max_k: 6,
            },
            ..Default::default()
        }
    }

    #[test]
    fn combinations_enumerate_subsets() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert!(combinations(2, 3).is_empty());
        assert_eq!(combinations(4, 2)[5], vec![2, 3]);
    }

    #[test]
    fn canonical_lists_for_second_vertex() {
        let g = Graph::complete(2);
        let e = Enumeration::new(&g, 2);
        let lists: Vec<(ColorSet, usize)> = e.next_lists(2);
        assert_eq!(lists, vec![(0b11, 2), (0b101, 3), (0b110, 3), (0b1100, 4)]);
    }

    #[test]
    fn even_cycles_are_2_choosable() {
        assert!(is_k_choosable(&Graph::cycle(4), 2).unwrap().is_choosable());
        assert!(is_k_choosable(&Graph::cycle(6), 2).unwrap().is_choosable());
    }

    #[test]
    fn odd_cycles_are_not() {
        for n in [3, 5] {
            let v = is_k_choosable(&Graph::cycle(n), 2).unwrap();
            let ChoosabilityOutcome::NotChoosable(w) = &v.outcome else {
                panic!("C_{n} reported 2-choosable");
            };
            assert!(w.lists().iter().all(|l| l.len() == 2));
            assert!(find_l_coloring(&Graph::cycle(n), w).unwrap().is_none());
        }
    }

    #[test]
    fn k33_is_not_2_choosable() {
        let g = Graph::complete_bipartite(3, 3);
        let v = is_k_choosable(&g, 2).unwrap();
        assert_eq!(v.universe_size, 12);
        let ChoosabilityOutcome::NotChoosable(w) = &v.outcome else {
            panic!("K33 reported 2-choosable");
        };
        assert!(find_l_coloring(&g, w).unwrap().is_none());
        assert!(is_k_choosable(&g, 3).unwrap().is_choosable());
    }

    #[test]
    fn complete_graphs() {
        for n in 1..=5 {
            let g = Graph::complete(n);
            assert!(is_k_choosable_with(&g, n, &big_cap()).unwrap().is_choosable());
            if n >= 2 {
                assert!(!is_k_choosable_with(&g, n - 1, &big_cap()).unwrap().is_choosable());
            }
        }
    }

    #[test]
    fn cap_and_k_errors() {
        assert_eq!(is_k_choosable(&Graph::cycle(4), 0), Err(ListColorError::InvalidK));
        assert!(matches!(
            is_k_choosable(&Graph::cycle(20), 3),
            Err(ListColorError::CapExceeded { vertices: 20, .. })
        ));
        assert!(matches!(is_k_choosable(&Graph::cycle(4), 4), Err(ListColorError::CapExceeded { .. })));
    }

    #[test]
    fn parallel_agrees_with_sequential() {
        for g in [Graph::cycle(5), Graph::complete_bipartite(3, 3), Graph::cycle(6), Graph::complete_bipartite(2, 4)] {
            let seq = is_k_choosable(&g, 2).unwrap();
            for threads in [2, 4] {
                let opts = ChoosabilityOptions { threads, ..Default::default() };
                assert_eq!(is_k_choosable_with(&g, 2, &opts).unwrap(), seq);
            }
        }
    }

    #[test]
    fn degeneracy_plus_one_suffices() {
        for g in [Graph::path(5), Graph::cycle(7), Graph::complete_bipartite(2, 3), Graph::empty(3)] {
            let k = greedy_degeneracy_bound(&g) + 1;
            assert!(is_k_choosable_with(&g, k, &big_cap()).unwrap().is_choosable());
        }
    }

    #[test]
    fn greedy_peeling() {
        let c5 = Enumeration::new(&Graph::cycle(5), 2);
        assert!(!c5.extends(&[]));
        assert!(Enumeration::new(&Graph::cycle(5), 3).extends(&[]));
        assert!(Enumeration::new(&Graph::path(4), 2).extends(&[]));
        // Two coloured neighbours sharing a colour leave room on the rest.
        let k33 = Enumeration::new(&Graph::complete_bipartite(3, 3), 3);
        let same = if k33.adj[1] & 1 == 1 { [0, 1, 0, 1] } else { [0, 0, 1, 1] };
        assert!(k33.extends(&same));
    }

    #[test]
    fn bipartite_graphs_are_3_choosable() {
        assert!(is_k_choosable(&Graph::complete_bipartite(3, 3), 3).unwrap().is_choosable());
        assert!(is_k_choosable(&Graph::complete_bipartite(2, 4), 3).unwrap().is_choosable());
    }

    #[test]
    fn universe_ceiling_refuses() {
        let opts = ChoosabilityOptions {
            cap: ChoosabilityCap { max_vertices: 100, max_k: 100 },
            ..Default::default()
        };
        assert!(matches!(is_k_choosable_with(&Graph::empty(30), 5, &opts), Err(ListColorError::CapExceeded { .. })));
    }
}
