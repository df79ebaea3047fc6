//! Copies of the gadget glued along side `B`, one per colouring of `B`, with
//! lists that punch out the colours of each `A`-vertex's non-neighbours.

use serde::{Deserialize, Serialize};

use super::ConstructionError;
use crate::graph::{Graph, Side};
use crate::listcolor::{find_l_coloring, Color, ListAssignment};

/// Default limit on the number of vertices of an assembled counterexample.
pub const DEFAULT_VERTEX_CAP: usize = 16_384;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "colorings", rename_all = "snake_case")]
pub enum ColoringSubset {
    /// Every map from `B` to the palette.
    All,
    /// Only these colourings, each listing a colour per `B` vertex in
    /// increasing vertex order.
    Explicit(Vec<Vec<Color>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CopyEntry {
    pub coloring: Vec<Color>,
    /// First glued vertex of this copy's `A` part.
    pub start: usize,
}

/// Where each copy lives in the glued graph. `B` occupies vertices
/// `0..b.len()`; copy `i` places `a[j]` at `copies[i].start + j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CopyIndex {
    /// The gadget's `A` vertices in increasing order.
    pub a: Vec<usize>,
    /// The gadget's `B` vertices in increasing order.
    pub b: Vec<usize>,
    pub copies: Vec<CopyEntry>,
}

impl CopyIndex {
    /// For copy `i`, the glued vertex of every gadget vertex.
    pub fn copy_map(&self, i: usize) -> Vec<usize> {
        let mut map = vec![0; self.a.len() + self.b.len()];
        for (j, &v) in self.b.iter().enumerate() {
            map[v] = j;
        }
        for (j, &v) in self.a.iter().enumerate() {
            map[v] = self.copies[i].start + j;
        }
        map
    }

    pub fn find(&self, coloring: &[Color]) -> Option<usize> {
        self.copies.iter().position(|c| c.coloring == coloring)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub graph: Graph,
    pub lists: ListAssignment,
    pub index: CopyIndex,
    pub palette_size: usize,
}

/// Sides of a gadget: labelled, each a clique, `A` non-empty.
fn gadget_sides(h: &Graph) -> Result<(Vec<usize>, Vec<usize>), ConstructionError> {
    if !h.is_labelled() {
        return Err(ConstructionError::NotLabelled);
    }
    let a = h.part(Side::A);
    let b = h.part(Side::B);
    if !h.is_clique(&a) || !h.is_clique(&b) {
        return Err(ConstructionError::NotAGadget("sides A and B must both be cliques".into()));
    }
    Ok((a.iter().collect(), b.iter().collect()))
}

fn check_coloring(c: &[Color], b: &[usize], palette: usize) -> Result<(), ConstructionError> {
    if c.len() != b.len() || c.iter().any(|&x| x == 0 || x as usize > palette) {
        return Err(ConstructionError::InvalidColoring(format!(
            "{c:?} is not a map from {} B vertices to 1..={palette}",
            b.len()
        )));
    }
    Ok(())
}

/// Lists on the gadget's own vertices for the copy indexed by `c`:
/// the full palette on `B`, and on each `a` the palette minus `c(b)` for
/// every non-neighbour `b`.
pub fn copy_lists(h: &Graph, palette_size: usize, c: &[Color]) -> Result<ListAssignment, ConstructionError> {
    let (_, b) = gadget_sides(h)?;
    check_coloring(c, &b, palette_size)?;
    let full: Vec<Color> = (1..=palette_size as Color).collect();
    let lists = (0..h.vertex_count())
        .map(|v| match h.label(v) {
            Some(Side::A) => {
                let punched: Vec<Color> =
                    b.iter().zip(c).filter(|&(&w, _)| !h.has_edge(v, w)).map(|(_, &col)| col).collect();
                full.iter().copied().filter(|x| !punched.contains(x)).collect()
            }
            _ => full.clone(),
        })
        .collect();
    Ok(ListAssignment::new(lists))
}

/// All maps `B → [palette]`, lexicographic with the first `B` vertex most
/// significant.
fn all_colorings(b_len: usize, palette: usize) -> Vec<Vec<Color>> {
    let mut out = Vec::new();
    let mut c = vec![1 as Color; b_len];
    loop {
        out.push(c.clone());
        let mut i = b_len;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if (c[i] as usize) < palette {
                c[i] += 1;
                break;
            }
            c[i] = 1;
        }
    }
}

/// Assembles the glued graph and its lists. `palette_size` must be
/// `|A| + |B| − 1`, and the result must fit in `vertex_cap` vertices.
pub fn build_counterexample(
    h: &Graph,
    palette_size: usize,
    subset: &ColoringSubset,
    vertex_cap: usize,
) -> Result<Counterexample, ConstructionError> {
    let (a, b) = gadget_sides(h)?;
    if a.is_empty() {
        return Err(ConstructionError::NotAGadget("side A is empty".into()));
    }
    let expected = a.len() + b.len() - 1;
    if palette_size != expected {
        return Err(ConstructionError::PaletteMismatch {
            expected,
            got: palette_size,
        });
    }
    let copies = match subset {
        ColoringSubset::All => {
            let count = (palette_size as u128).checked_pow(b.len() as u32);
            let vertices = count.and_then(|c| c.checked_mul(a.len() as u128)).and_then(|v| v.checked_add(b.len() as u128));
            match vertices {
                Some(v) if v <= vertex_cap as u128 => all_colorings(b.len(), palette_size),
                _ => {
                    return Err(ConstructionError::CounterexampleTooLarge {
                        copies: count.map_or_else(|| format!("{palette_size}^{}", b.len()), |c| c.to_string()),
                        cap: vertex_cap,
                    })
                }
            }
        }
        ColoringSubset::Explicit(list) => {
            for (i, c) in list.iter().enumerate() {
                check_coloring(c, &b, palette_size)?;
                if list[..i].contains(c) {
                    return Err(ConstructionError::InvalidColoring(format!("{c:?} is listed twice")));
                }
            }
            if list.len().saturating_mul(a.len()).saturating_add(b.len()) > vertex_cap {
                return Err(ConstructionError::CounterexampleTooLarge {
                    copies: list.len().to_string(),
                    cap: vertex_cap,
                });
            }
            list.clone()
        }
    };

    let total = b.len() + copies.len() * a.len();
    let mut graph = Graph::empty(total);
    let mut lists: Vec<Vec<Color>> = vec![(1..=palette_size as Color).collect(); total];
    for (j, &v) in b.iter().enumerate() {
        graph.set_label(j, Some(Side::B));
        for (k, &w) in b.iter().enumerate().skip(j + 1) {
            if h.has_edge(v, w) {
                graph.insert_edge(j, k);
            }
        }
    }
    let mut entries = Vec::with_capacity(copies.len());
    for coloring in copies {
        let start = b.len() + entries.len() * a.len();
        let local = copy_lists(h, palette_size, &coloring)?;
        for (j, &v) in a.iter().enumerate() {
            let x = start + j;
            graph.set_label(x, Some(Side::A));
            lists[x] = local.list(v).to_vec();
            for (k, &w) in a.iter().enumerate().skip(j + 1) {
                if h.has_edge(v, w) {
                    graph.insert_edge(x, start + k);
                }
            }
            for (k, &w) in b.iter().enumerate() {
                if h.has_edge(v, w) {
                    graph.insert_edge(x, k);
                }
            }
        }
        entries.push(CopyEntry { coloring, start });
    }
    Ok(Counterexample {
        graph,
        lists: ListAssignment::new(lists),
        index: CopyIndex {
            a,
            b,
            copies: entries,
        },
        palette_size,
    })
}

/// With `B` fixed to the proper colouring `c`, true iff no L-colouring of
/// `copy` extends it. `copy` must be the gadget `h` itself (same vertices,
/// edges and labels) and `l` its lists.
pub fn verify_no_l_coloring_pigeonhole(
    h: &Graph,
    copy: &Graph,
    l: &ListAssignment,
    c: &[Color],
) -> Result<bool, ConstructionError> {
    if copy.canonical_edges() != h.canonical_edges() || copy.labels() != h.labels() {
        return Err(ConstructionError::NotAGadget("copy differs from the gadget".into()));
    }
    let (_, b) = gadget_sides(copy)?;
    if c.len() != b.len() {
        return Err(ConstructionError::InvalidColoring(format!("{c:?} does not colour {} B vertices", b.len())));
    }
    for (i, &u) in b.iter().enumerate() {
        for (j, &w) in b.iter().enumerate().skip(i + 1) {
            if copy.has_edge(u, w) && c[i] == c[j] {
                return Err(ConstructionError::InvalidColoring(format!("{c:?} is not proper on B")));
            }
        }
    }
    let mut fixed = l.lists().to_vec();
    if fixed.len() != copy.vertex_count() {
        return Err(ConstructionError::ListColor(crate::listcolor::ListColorError::ShapeMismatch {
            vertices: copy.vertex_count(),
            lists: fixed.len(),
        }));
    }
    for (&v, &col) in b.iter().zip(c) {
        fixed[v] = if l.list(v).contains(&col) { vec![col] } else { Vec::new() };
    }
    Ok(find_l_coloring(copy, &ListAssignment::new(fixed))?.is_none())
}
