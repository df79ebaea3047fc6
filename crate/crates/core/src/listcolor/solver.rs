//! Backtracking L-colouring with minimum-remaining-values selection and
//! forward checking.

use super::{Color, Coloring, ListAssignment, ListColorError};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    /// Colour assignments tried.
    pub nodes: u64,
}

/// Searches for an L-colouring. `Some` is always a valid colouring; `None`
/// means none exists.
pub fn find_l_coloring(g: &Graph, l: &ListAssignment) -> Result<Option<Coloring>, ListColorError> {
    Ok(find_l_coloring_counted(g, l)?.0)
}

pub fn find_l_coloring_counted(
    g: &Graph,
    l: &ListAssignment,
) -> Result<(Option<Coloring>, SolveStats), ListColorError> {
    l.check_shape(g)?;
    let mut solver = Solver::new(g, l);
    let found = solver.solve();
    let coloring = found.then(|| Coloring {
        colors: solver
            .assigned
            .iter()
            .map(|c| solver.palette[c.expect("every vertex is coloured")])
            .collect(),
    });
    Ok((coloring, SolveStats { nodes: solver.nodes }))
}

struct Frame {
    v: usize,
    next: usize,
    mark: usize,
}

struct Solver {
    n: usize,
    words: usize,
    palette: Vec<Color>,
    neighbors: Vec<Vec<usize>>,
    /// Live colours per vertex as dense palette indices.
    domain: Vec<u64>,
    size: Vec<u32>,
    assigned: Vec<Option<usize>>,
    /// (vertex, colour) removals to undo.
    trail: Vec<(usize, usize)>,
    nodes: u64,
}

impl Solver {
    fn new(g: &Graph, l: &ListAssignment) -> Solver {
        let mut palette: Vec<Color> = l.lists().iter().flatten().copied().collect();
        palette.sort_unstable();
        palette.dedup();
        let n = g.vertex_count();
        let words = palette.len().div_ceil(64).max(1);
        let mut domain = vec![0u64; n * words];
        let mut size = vec![0u32; n];
        for v in 0..n {
            for c in l.list(v) {
                let i = palette.binary_search(c).expect("colour is in the palette");
                domain[v * words + i / 64] |= 1 << (i % 64);
            }
            size[v] = l.list(v).len() as u32;
        }
        Solver {
            n,
            words,
            palette,
            neighbors: (0..n).map(|v| g.neighbors(v).collect()).collect(),
            domain,
            size,
            assigned: vec![None; n],
            trail: Vec::new(),
            nodes: 0,
        }
    }

    fn has(&self, v: usize, c: usize) -> bool {
        self.domain[v * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    fn next_color(&self, v: usize, from: usize) -> Option<usize> {
        let row = &self.domain[v * self.words..(v + 1) * self.words];
        let mut w = from / 64;
        if w >= row.len() {
            return None;
        }
        let mut bits = row[w] & (u64::MAX << (from % 64));
        loop {
            if bits != 0 {
                return Some(w * 64 + bits.trailing_zeros() as usize);
            }
            w += 1;
            if w == row.len() {
                return None;
            }
            bits = row[w];
        }
    }

    fn select(&self) -> Option<usize> {
        (0..self.n)
            .filter(|&v| self.assigned[v].is_none())
            .min_by_key(|&v| self.size[v])
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (w, c) = self.trail.pop().expect("trail is non-empty");
            self.domain[w * self.words + c / 64] |= 1 << (c % 64);
            self.size[w] += 1;
        }
    }

    /// Assigns `c` to `v` and removes it from uncoloured neighbours. False if
    /// some neighbour runs out of colours.
    fn assign(&mut self, v: usize, c: usize) -> bool {
        self.assigned[v] = Some(c);
        let mut ok = true;
        for i in 0..self.neighbors[v].len() {
            let w = self.neighbors[v][i];
            if self.assigned[w].is_none() && self.has(w, c) {
                self.domain[w * self.words + c / 64] &= !(1 << (c % 64));
                self.size[w] -= 1;
                self.trail.push((w, c));
                if self.size[w] == 0 {
                    ok = false;
                    break;
                }
            }
        }
        ok
    }

    fn solve(&mut self) -> bool {
        if self.size.contains(&0) {
            return false;
        }
        let mut frames: Vec<Frame> = Vec::new();
        loop {
            match self.select() {
                None => return true,
                Some(v) => frames.push(Frame {
                    v,
                    next: 0,
                    mark: self.trail.len(),
                }),
            }
            loop {
                let Some(f) = frames.last() else {
                    return false;
                };
                let (v, from, mark) = (f.v, f.next, f.mark);
                self.undo_to(mark);
                self.assigned[v] = None;
                let Some(c) = self.next_color(v, from) else {
                    frames.pop();
                    continue;
                };
                frames.last_mut().expect("frame exists").next = c + 1;
                self.nodes += 1;
                if self.assign(v, c) {
                    break;
                }
            }
        }
    }
}
