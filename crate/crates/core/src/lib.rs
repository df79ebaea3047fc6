//! Exact tools for `K_{s,t}` minors and list colouring, plus the randomized
//! clique-glued construction of `K_{s,t}`-minor-free graphs that need many
//! colours from their lists.
//!
//! * [`graph`]: immutable bitset graphs, complement, induced subgraphs,
//!   clique gluing and the edge-list format.
//! * [`minors`]: certified `K_{s,t}`-minor search and a brute-force oracle.
//! * [`listcolor`]: L-colouring search and exact k-choosability.
//! * [`construction`]: random bipartite sampling, the clique gadget and the
//!   glued counterexample with its adversarial lists.

pub mod construction;
pub mod graph;
pub mod listcolor;
pub mod minors;

pub use graph::{Graph, GraphError, Side, VertexSet};
pub use listcolor::{find_l_coloring, is_k_choosable, Coloring, ListAssignment};
pub use minors::{find_kst_minor, BranchModel, MinorOutcome, MinorQuery};
