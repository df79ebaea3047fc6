use super::{Graph, GraphError, VertexSet};

/// Two graphs and an explicit identification of a clique in each.
#[derive(Clone, Debug)]
pub struct GlueSpec {
    pub g1: Graph,
    pub g2: Graph,
    /// Pairs `(c1, c2)`: vertex `c2` of `g2` is identified with `c1` of `g1`.
    pub shared: Vec<(usize, usize)>,
}

/// Result of [`glue`]. `g1` keeps its indices; `from_g2[v]` is the image of
/// `g2`'s vertex `v`.
#[derive(Clone, Debug)]
pub struct Glued {
    pub graph: Graph,
    pub from_g2: Vec<usize>,
}

/// Clique-sum without deleting edges: the union of `g1` and `g2` with the
/// shared cliques identified.
///
/// The result has `g1`'s vertices first, followed by the unshared vertices of
/// `g2` in increasing order. No edge joins the two private parts. Fails if
/// either shared set is not a clique in its host or the correspondence is not
/// injective.
pub fn glue(spec: &GlueSpec) -> Result<Glued, GraphError> {
    let GlueSpec { g1, g2, shared } = spec;
    let mut c1 = VertexSet::new();
    let mut c2 = VertexSet::new();
    for &(a, b) in shared {
        g1.check_vertex(a)?;
        g2.check_vertex(b)?;
        if !c1.insert(a) {
            return Err(GraphError::SharedNotInjective { side: 1, vertex: a });
        }
        if !c2.insert(b) {
            return Err(GraphError::SharedNotInjective { side: 2, vertex: b });
        }
    }
    if let Some((u, v)) = g1.first_non_adjacent_pair(&c1) {
        return Err(GraphError::SharedNotClique { side: 1, u, v });
    }
    if let Some((u, v)) = g2.first_non_adjacent_pair(&c2) {
        return Err(GraphError::SharedNotClique { side: 2, u, v });
    }

    let n1 = g1.vertex_count();
    let mut from_g2 = vec![usize::MAX; g2.vertex_count()];
    for &(a, b) in shared {
        from_g2[b] = a;
    }
    let mut next = n1;
    for slot in from_g2.iter_mut().filter(|s| **s == usize::MAX) {
        *slot = next;
        next += 1;
    }

    let mut graph = Graph::empty(next);
    for (u, v) in g1.edges() {
        graph.insert_edge(u, v);
    }
    for (u, v) in g2.edges() {
        graph.insert_edge(from_g2[u], from_g2[v]);
    }
    for v in 0..n1 {
        graph.set_label(v, g1.label(v));
    }
    for (v, &image) in from_g2.iter().enumerate() {
        if !c2.contains(v) {
            graph.set_label(image, g2.label(v));
        }
    }
    Ok(Glued { graph, from_g2 })
}
