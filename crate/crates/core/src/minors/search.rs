//! Backtracking search for `K_{s,t}` models.
//!
//! Vertices are decided one at a time: each joins one of the `s + t` branch
//! sets or is left unused. Sets are numbered per side in the order they are
//! opened, so a vertex may only open the next unused slot of a side; when
//! `s == t` the very first set is always put on side 1.
//!
//! A node is pruned when
//! * fewer undecided vertices remain than there are unopened sets,
//! * some opened set can no longer become connected through undecided
//!   vertices,
//! * an opened side-1 set and an opened side-2 set can no longer touch, or
//! * the undecided components able to host a new set of one side (they must
//!   reach every opened set of the other side) hold too few vertices, or
//! * the graph on decided-in-set and undecided vertices has fewer edges than
//!   `s * t` plus a spanning tree of every opened set.
//!
//! When `s >= 2`, an undecided vertex with at most one live neighbour is
//! forced unused: it cannot be a branch set of its own, and inside a larger
//! set it is a leaf that touches nothing outside the set.
//!
//! The next vertex is the undecided vertex with the fewest admissible
//! choices, ties broken by lowest index. Budgets count node expansions.
//!
//! For parallel runs the tree is split at a fixed depth; the subtrees are
//! searched independently and their results are replayed in depth-first
//! order, so the outcome, the model and the node count do not depend on the
//! number of threads in deterministic mode.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{BranchModel, MinorError, MinorOutcome, MinorQuery};
use crate::graph::Graph;

/// Hosts are handled as single-word bitsets.
pub const MAX_HOST_VERTICES: usize = 64;

const SPLIT_DEPTH: usize = 3;
const CANCEL_POLL: u64 = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOptions {
    /// Maximum number of node expansions; `None` searches exhaustively.
    pub budget: Option<u64>,
    /// Worker threads; 1 runs on the calling thread, 0 uses rayon's default.
    pub threads: usize,
    /// Report the same model and node count regardless of scheduling.
    pub deterministic: bool,
}

impl Default for SearchOptions {
    fn default() -> SearchOptions {
        SearchOptions {
            budget: None,
            threads: 1,
            deterministic: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub outcome: MinorOutcome,
    pub nodes: u64,
}

/// Sequential exact search. `Found` models always pass
/// [`verify_model`](super::verify_model); `NotFound` is a proof of absence.
pub fn find_kst_minor(g: &Graph, q: MinorQuery, budget: Option<u64>) -> Result<MinorOutcome, MinorError> {
    let opts = SearchOptions {
        budget,
        ..SearchOptions::default()
    };
    Ok(find_kst_minor_with(g, q, &opts)?.outcome)
}

pub fn find_kst_minor_with(g: &Graph, q: MinorQuery, opts: &SearchOptions) -> Result<SearchReport, MinorError> {
    let adj = g.masks().ok_or(MinorError::HostTooLarge {
        n: g.vertex_count(),
        max: MAX_HOST_VERTICES,
    })?;
    let ctx = Ctx { adj: &adj, s: q.s(), t: q.t() };
    let limit = opts.budget.unwrap_or(u64::MAX);

    let mut tasks = Vec::new();
    ctx.split(&mut ctx.root(g.vertex_count()), SPLIT_DEPTH, &mut tasks);

    let report = if opts.threads == 1 {
        ctx.run_sequential(tasks, limit)
    } else if opts.threads == 0 {
        ctx.run_parallel(tasks, limit, opts.deterministic)
    } else {
        match rayon::ThreadPoolBuilder::new().num_threads(opts.threads).build() {
            Ok(pool) => pool.install(|| ctx.run_parallel(tasks, limit, opts.deterministic)),
            Err(_) => ctx.run_sequential(tasks, limit),
        }
    };
    Ok(report)
}

#[derive(Clone, Copy, Debug)]
enum Choice {
    New(usize),
    Join(usize),
    Unused,
}

#[derive(Clone, Debug)]
struct State {
    /// Side-1 sets occupy `0..s`, side-2 sets `s..s + t`.
    sets: Vec<u64>,
    open: [usize; 2],
    undecided: u64,
}

enum Eval {
    Complete,
    Dead,
    Branch { v: usize, choices: Vec<Choice> },
}

enum Task {
    /// A node expanded while splitting; costs one node.
    Inner(Option<BranchModel>),
    Run(State),
}

enum RunOutcome {
    Found(BranchModel),
    Exhausted,
    Dead,
    Cancelled,
}

struct RunResult {
    outcome: RunOutcome,
    nodes: u64,
}

struct Ctx<'a> {
    adj: &'a [u64],
    s: usize,
    t: usize,
}

struct Runner<'a> {
    limit: u64,
    nodes: u64,
    cancel: Option<&'a dyn Fn() -> bool>,
}

enum Step {
    Found(BranchModel),
    Dead,
    Exhausted,
    Cancelled,
}

#[inline]
fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(b)
        }
    })
}

#[inline]
fn low_bit(m: u64) -> u64 {
    m & m.wrapping_neg()
}

impl Ctx<'_> {
    fn root(&self, n: usize) -> State {
        State {
            sets: vec![0; self.s + self.t],
            open: [0, 0],
            undecided: if n == 64 { u64::MAX } else { (1u64 << n) - 1 },
        }
    }

    fn nbhd(&self, m: u64) -> u64 {
        bits(m).fold(0, |acc, v| acc | self.adj[v])
    }

    /// Vertices of `allowed` reachable from `start` inside `allowed`.
    fn closure(&self, start: u64, allowed: u64) -> u64 {
        let mut comp = start;
        let mut frontier = start;
        while frontier != 0 {
            let next = self.nbhd(frontier) & allowed & !comp;
            comp |= next;
            frontier = next;
        }
        comp
    }

    fn side_range(&self, side: usize, st: &State) -> std::ops::Range<usize> {
        let base = if side == 0 { 0 } else { self.s };
        base..base + st.open[side]
    }

    fn is_complete(&self, st: &State) -> bool {
        if st.open != [self.s, self.t] {
            return false;
        }
        let connected = st.sets.iter().all(|&z| self.closure(low_bit(z), z) == z);
        connected
            && st.sets[..self.s]
                .iter()
                .all(|&a| st.sets[self.s..].iter().all(|&b| self.nbhd(a) & b != 0))
    }

    fn model(&self, st: &State) -> BranchModel {
        BranchModel::from_masks(&st.sets[..self.s], &st.sets[self.s..])
    }

    fn evaluate(&self, st: &State) -> Eval {
        if self.is_complete(st) {
            return Eval::Complete;
        }
        let u = st.undecided;
        let need = [self.s - st.open[0], self.t - st.open[1]];
        if (u.count_ones() as usize) < need[0] + need[1] {
            return Eval::Dead;
        }

        // Every final set needs a spanning tree and every cross pair an edge.
        let live = u | st.sets.iter().fold(0, |a, &z| a | z);
        let live_edges: u32 = bits(live).map(|v| (self.adj[v] & live).count_ones()).sum::<u32>() / 2;
        let tree_edges: u32 = st.sets.iter().map(|z| z.count_ones().saturating_sub(1)).sum();
        if (live_edges as usize) < self.s * self.t + tree_edges as usize {
            return Eval::Dead;
        }

        let k = self.s + self.t;
        let mut region = vec![0u64; k];
        let mut region_nbhd = vec![0u64; k];
        for side in 0..2 {
            for i in self.side_range(side, st) {
                let z = st.sets[i];
                let comp = self.closure(low_bit(z), z | u);
                if z & !comp != 0 {
                    return Eval::Dead;
                }
                region[i] = comp;
                region_nbhd[i] = self.nbhd(comp);
            }
        }
        for i in self.side_range(0, st) {
            let zn = self.nbhd(st.sets[i]);
            for j in self.side_range(1, st) {
                if zn & st.sets[j] == 0 && region_nbhd[i] & region[j] == 0 {
                    return Eval::Dead;
                }
            }
        }

        // Components of the undecided vertices and which sides may open a
        // new set inside them.
        let mut hosts = [0u64; 2];
        let mut rest = u;
        while rest != 0 {
            let comp = self.closure(low_bit(rest), u);
            rest &= !comp;
            for (side, host) in hosts.iter_mut().enumerate() {
                if self.side_range(1 - side, st).all(|j| comp & region[j] != 0) {
                    *host |= comp;
                }
            }
        }
        for side in 0..2 {
            if (hosts[side].count_ones() as usize) < need[side] {
                return Eval::Dead;
            }
        }

        let symmetric_start = self.s == self.t && st.open == [0, 0];
        let mut best: Option<(usize, Vec<Choice>)> = None;
        for v in bits(u) {
            let bit = 1u64 << v;
            // With s >= 2 every branch set touches at least two others, so a
            // vertex with at most one live neighbour is a removable leaf.
            if self.s >= 2 && (self.adj[v] & live).count_ones() <= 1 {
                best = Some((v, vec![Choice::Unused]));
                break;
            }
            let mut choices = Vec::with_capacity(4);
            for side in 0..2 {
                if need[side] > 0 && hosts[side] & bit != 0 && !(side == 1 && symmetric_start) {
                    choices.push(Choice::New(side));
                }
            }
            for side in 0..2 {
                for i in self.side_range(side, st) {
                    if region[i] & bit != 0 {
                        choices.push(Choice::Join(i));
                    }
                }
            }
            choices.push(Choice::Unused);
            if best.as_ref().is_none_or(|(_, b)| choices.len() < b.len()) {
                let forced = choices.len() == 1;
                best = Some((v, choices));
                if forced {
                    break;
                }
            }
        }
        match best {
            Some((v, choices)) => Eval::Branch { v, choices },
            None => Eval::Dead,
        }
    }

    fn apply(&self, st: &mut State, v: usize, c: Choice) {
        let bit = 1u64 << v;
        st.undecided &= !bit;
        match c {
            Choice::New(side) => {
                let i = if side == 0 { st.open[0] } else { self.s + st.open[1] };
                st.sets[i] |= bit;
                st.open[side] += 1;
            }
            Choice::Join(i) => st.sets[i] |= bit,
            Choice::Unused => {}
        }
    }

    fn undo(&self, st: &mut State, v: usize, c: Choice) {
        let bit = 1u64 << v;
        st.undecided |= bit;
        match c {
            Choice::New(side) => {
                st.open[side] -= 1;
                let i = if side == 0 { st.open[0] } else { self.s + st.open[1] };
                st.sets[i] &= !bit;
            }
            Choice::Join(i) => st.sets[i] &= !bit,
            Choice::Unused => {}
        }
    }

    fn dfs(&self, st: &mut State, r: &mut Runner<'_>) -> Step {
        r.nodes += 1;
        if r.nodes > r.limit {
            return Step::Exhausted;
        }
        if r.nodes % CANCEL_POLL == 0 && r.cancel.is_some_and(|c| c()) {
            return Step::Cancelled;
        }
        match self.evaluate(st) {
            Eval::Complete => Step::Found(self.model(st)),
            Eval::Dead => Step::Dead,
            Eval::Branch { v, choices } => {
                for c in choices {
                    self.apply(st, v, c);
                    let step = self.dfs(st, r);
                    self.undo(st, v, c);
                    if !matches!(step, Step::Dead) {
                        return step;
                    }
                }
                Step::Dead
            }
        }
    }

    fn split(&self, st: &mut State, depth: usize, out: &mut Vec<Task>) {
        if depth == 0 {
            out.push(Task::Run(st.clone()));
            return;
        }
        match self.evaluate(st) {
            Eval::Complete => out.push(Task::Inner(Some(self.model(st)))),
            Eval::Dead => out.push(Task::Inner(None)),
            Eval::Branch { v, choices } => {
                out.push(Task::Inner(None));
                for c in choices {
                    self.apply(st, v, c);
                    self.split(st, depth - 1, out);
                    self.undo(st, v, c);
                }
            }
        }
    }

    fn run_task(&self, st: &State, limit: u64, cancel: Option<&dyn Fn() -> bool>) -> RunResult {
        let mut runner = Runner { limit, nodes: 0, cancel };
        let outcome = match self.dfs(&mut st.clone(), &mut runner) {
            Step::Found(m) => RunOutcome::Found(m),
            Step::Dead => RunOutcome::Dead,
            Step::Exhausted => RunOutcome::Exhausted,
            Step::Cancelled => RunOutcome::Cancelled,
        };
        RunResult {
            outcome,
            nodes: runner.nodes.min(limit),
        }
    }

    fn run_sequential(&self, tasks: Vec<Task>, limit: u64) -> SearchReport {
        let mut used = 0u64;
        for task in tasks {
            match task {
                Task::Inner(found) => {
                    if used == limit {
                        return exhausted(limit);
                    }
                    used += 1;
                    if let Some(m) = found {
                        return SearchReport {
                            outcome: MinorOutcome::Found(m),
                            nodes: used,
                        };
                    }
                }
                Task::Run(st) => {
                    let res = self.run_task(&st, limit - used, None);
                    used += res.nodes;
                    match res.outcome {
                        RunOutcome::Found(m) => {
                            return SearchReport {
                                outcome: MinorOutcome::Found(m),
                                nodes: used,
                            }
                        }
                        RunOutcome::Exhausted | RunOutcome::Cancelled => return exhausted(limit),
                        RunOutcome::Dead => {}
                    }
                }
            }
        }
        SearchReport {
            outcome: MinorOutcome::NotFound,
            nodes: used,
        }
    }

    fn run_parallel(&self, tasks: Vec<Task>, limit: u64, deterministic: bool) -> SearchReport {
        // Index of the earliest task whose result already decides the replay.
        let decisive = AtomicUsize::new(usize::MAX);
        let any_found = AtomicBool::new(false);
        for (i, t) in tasks.iter().enumerate() {
            if matches!(t, Task::Inner(Some(_))) {
                decisive.fetch_min(i, Ordering::Relaxed);
                any_found.store(true, Ordering::Relaxed);
                break;
            }
        }

        let results: Vec<Option<RunResult>> = tasks
            .par_iter()
            .enumerate()
            .map(|(i, task)| {
                let Task::Run(st) = task else { return None };
                if decisive.load(Ordering::Relaxed) < i || (!deterministic && any_found.load(Ordering::Relaxed)) {
                    return Some(RunResult {
                        outcome: RunOutcome::Cancelled,
                        nodes: 0,
                    });
                }
                let cancel = || {
                    decisive.load(Ordering::Relaxed) < i || (!deterministic && any_found.load(Ordering::Relaxed))
                };
                let res = self.run_task(st, limit, Some(&cancel));
                match res.outcome {
                    RunOutcome::Found(_) => {
                        decisive.fetch_min(i, Ordering::Relaxed);
                        any_found.store(true, Ordering::Relaxed);
                    }
                    RunOutcome::Exhausted => {
                        decisive.fetch_min(i, Ordering::Relaxed);
                    }
                    _ => {}
                }
                Some(res)
            })
            .collect();

        if !deterministic {
            let found = tasks.iter().zip(&results).find_map(|(t, r)| match (t, r) {
                (Task::Inner(Some(m)), _) => Some(m.clone()),
                (_, Some(RunResult { outcome: RunOutcome::Found(m), .. })) => Some(m.clone()),
                _ => None,
            });
            if let Some(m) = found {
                let nodes = results.iter().flatten().map(|r| r.nodes).sum::<u64>() + inner_count(&tasks);
                return SearchReport {
                    outcome: MinorOutcome::Found(m),
                    nodes,
                };
            }
        }

        // Replay in depth-first order against the budget.
        let mut used = 0u64;
        for (task, res) in tasks.into_iter().zip(results) {
            match (task, res) {
                (Task::Inner(found), _) => {
                    if used == limit {
                        return exhausted(limit);
                    }
                    used += 1;
                    if let Some(m) = found {
                        return SearchReport {
                            outcome: MinorOutcome::Found(m),
                            nodes: used,
                        };
                    }
                }
                (Task::Run(_), Some(res)) => {
                    if res.nodes > limit - used {
                        return exhausted(limit);
                    }
                    used += res.nodes;
                    match res.outcome {
                        RunOutcome::Found(m) => {
                            return SearchReport {
                                outcome: MinorOutcome::Found(m),
                                nodes: used,
                            }
                        }
                        RunOutcome::Dead => {}
                        // A cancelled task always follows a decisive one.
                        RunOutcome::Exhausted | RunOutcome::Cancelled => return exhausted(limit),
                    }
                }
                (Task::Run(_), None) => unreachable!("every run task yields a result"),
            }
        }
        SearchReport {
            outcome: MinorOutcome::NotFound,
            nodes: used,
        }
    }
}

fn inner_count(tasks: &[Task]) -> u64 {
    tasks.iter().filter(|t| matches!(t, Task::Inner(_))).count() as u64
}

fn exhausted(limit: u64) -> SearchReport {
    SearchReport {
        outcome: MinorOutcome::BudgetExhausted,
        nodes: limit,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minors::verify_model;

    fn q(s: usize, t: usize) -> MinorQuery {
        MinorQuery::new(s, t).unwrap()
    }

    fn found(g: &Graph, s: usize, t: usize) -> bool {
        match find_kst_minor(g, q(s, t), None).unwrap() {
            MinorOutcome::Found(m) => {
                assert!(verify_model(g, &m, q(s, t)), "invalid model {m:?}");
                true
            }
            MinorOutcome::NotFound => false,
            MinorOutcome::BudgetExhausted => panic!("unlimited search exhausted"),
        }
    }

    fn petersen() -> Graph {
        let mut e: Vec<(usize, usize)> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        e.extend((0..5).map(|i| (i, i + 5)));
        e.extend((0..5).map(|i| (5 + i, 5 + (i + 2) % 5)));
        Graph::from_edges(10, e).unwrap()
    }

    #[test]
    fn c4_has_k22() {
        assert!(found(&Graph::cycle(4), 2, 2));
    }

    #[test]
    fn trees_have_no_k22() {
        assert!(!found(&Graph::path(7), 2, 2));
        let star = Graph::from_edges(6, (1..6).map(|v| (0, v))).unwrap();
        assert!(!found(&star, 2, 2));
        assert!(found(&star, 1, 5));
        assert!(!found(&star, 1, 6));
    }

    #[test]
    fn complete_graphs() {
        assert!(found(&Graph::complete(5), 2, 3));
        assert!(!found(&Graph::complete(5), 3, 3));
        assert!(found(&Graph::complete(6), 3, 3));
        assert!(found(&Graph::complete(13), 6, 7));
        assert!(!found(&Graph::complete(12), 6, 7));
    }

    #[test]
    fn petersen_has_k33() {
        assert!(found(&petersen(), 3, 3));
        assert!(!found(&petersen(), 4, 4));
    }

    #[test]
    fn planar_graphs_lack_k33() {
        // Triangulated hexagon: planar, so no K_{3,3} minor.
        let mut e: Vec<(usize, usize)> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
        e.extend((0..6).map(|i| (6, i)));
        let wheel = Graph::from_edges(7, e).unwrap();
        assert!(!found(&wheel, 3, 3));
        assert!(found(&wheel, 2, 3));
    }

    #[test]
    fn empty_and_tiny_hosts() {
        assert!(!found(&Graph::empty(0), 1, 1));
        assert!(!found(&Graph::empty(3), 1, 1));
        assert!(found(&Graph::path(2), 1, 1));
    }

    #[test]
    fn budget_is_respected() {
        let g = petersen();
        let r = find_kst_minor_with(&g, q(2, 5), &SearchOptions { budget: Some(1), ..Default::default() }).unwrap();
        assert_eq!(r.outcome, MinorOutcome::BudgetExhausted);
        let full = find_kst_minor_with(&g, q(2, 5), &SearchOptions::default()).unwrap();
        assert_eq!(full.outcome, MinorOutcome::NotFound);
        let exact = SearchOptions { budget: Some(full.nodes), ..Default::default() };
        assert_eq!(find_kst_minor_with(&g, q(2, 5), &exact).unwrap(), full);
        let short = SearchOptions { budget: Some(full.nodes - 1), ..Default::default() };
        assert_eq!(find_kst_minor_with(&g, q(2, 5), &short).unwrap().outcome, MinorOutcome::BudgetExhausted);
    }

    #[test]
    fn parallel_deterministic_matches_sequential() {
        let g = petersen();
        for (s, t) in [(2, 2), (3, 3), (2, 4), (4, 4), (1, 5)] {
            let seq = find_kst_minor_with(&g, q(s, t), &SearchOptions::default()).unwrap();
            for threads in [2, 4] {
                let par = find_kst_minor_with(&g, q(s, t), &SearchOptions { threads, ..Default::default() }).unwrap();
                assert_eq!(par, seq, "({s},{t}) with {threads} threads");
            }
            for budget in [1, 5, 40, seq.nodes.saturating_sub(1).max(1)] {
                let opts = SearchOptions { budget: Some(budget), ..Default::default() };
                let a = find_kst_minor_with(&g, q(s, t), &opts).unwrap();
                let b = find_kst_minor_with(&g, q(s, t), &SearchOptions { threads: 3, ..opts }).unwrap();
                assert_eq!(a, b, "({s},{t}) budget {budget}");
            }
        }
    }

    #[test]
    fn nondeterministic_mode_still_certifies() {
        let g = petersen();
        let opts = SearchOptions { threads: 4, deterministic: false, ..Default::default() };
        match find_kst_minor_with(&g, q(3, 3), &opts).unwrap().outcome {
            MinorOutcome::Found(m) => assert!(verify_model(&g, &m, q(3, 3))),
            other => panic!("{other:?}"),
        }
        assert_eq!(find_kst_minor_with(&g, q(4, 4), &opts).unwrap().outcome, MinorOutcome::NotFound);
    }

    #[test]
    fn rejects_large_hosts() {
        assert_eq!(
            find_kst_minor(&Graph::empty(65), q(1, 1), None),
            Err(MinorError::HostTooLarge { n: 65, max: 64 })
        );
        assert!(find_kst_minor(&Graph::path(64), q(1, 1), None).is_ok());
    }
}
