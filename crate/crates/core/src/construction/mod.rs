//! The randomized construction: sampling a bipartite graph with the two
//! required properties, the clique gadget built from its complement, and the
//! glued counterexample with adversarial lists.
//!
//! Parameters that enter floors and ceilings are exact rationals; the
//! probability bounds are evaluated in log space as `f64`.

mod bounds;
mod counterexample;
mod experiment;
mod gadget;
mod params;
mod rational;
mod sample;

use thiserror::Error;

pub use bounds::{degree_tail_bound, event1_bound};
pub use counterexample::{
    build_counterexample, copy_lists, verify_no_l_coloring_pigeonhole, ColoringSubset, CopyEntry, CopyIndex,
    Counterexample, DEFAULT_VERTEX_CAP,
};
pub use experiment::{
    degree_pass_frequencies, run_experiment, sample_seed, ExperimentConfig, ExperimentRow, EXPERIMENT_CSV_HEADER,
};
pub use gadget::{build_h, gadget_holds, BlockRequirement, BuildOptions, BuildOutcome, SampleReport};
pub use params::{derive_lemma3_params, theorem1_bound, Lemma3Params, Theorem1Bound, Theorem1Params, THRESHOLD_UNKNOWN};
pub use rational::{ceil_int, floor_int, parse_rational, serde_str, to_f64, Rational};
pub use sample::{
    block_count, check_block_property, check_degree_property, cross_degree, edge_probability, is_block_witness,
    sample_bipartite, BlockMode, BlockReport, BlockStatus, BlockWitness, DegreeCheck,
};

use crate::graph::GraphError;
use crate::listcolor::ListColorError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("not a rational number: {0:?}")]
    InvalidRational(String),
    #[error("epsilon = {value} is outside {range}")]
    InvalidEpsilon { value: String, range: &'static str },
    #[error("C = {0} must be at least 1")]
    InvalidC(String),
    #[error("delta = {0} is outside (0, 1)")]
    InvalidDelta(String),
    #[error("f^2 * delta = {0} is not below 1")]
    HypothesisViolated(String),
    #[error("invalid sizes: {0}")]
    InvalidSizes(String),
    #[error("graph has unlabelled vertices; a bipartition into sides A and B is required")]
    NotLabelled,
    #[error("exhaustive block check refused: {reason}")]
    ExhaustiveCapExceeded { reason: String },
    #[error("not a gadget: {0}")]
    NotAGadget(String),
    #[error("palette size must be |A| + |B| - 1 = {expected}, got {got}")]
    PaletteMismatch { expected: usize, got: usize },
    #[error("counterexample needs {copies} copies, exceeding the cap of {cap} vertices")]
    CounterexampleTooLarge { copies: String, cap: usize },
    #[error("invalid colouring: {0}")]
    InvalidColoring(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    ListColor(#[from] ListColorError),
}

/// Seed of stream `index` under `master` (SplitMix64 finalizer).
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
