//! Seeded Monte Carlo sweeps over the sampled bipartite graph.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::params::Lemma3Params;
use super::sample::{
    check_block_property, check_degree_property, cross_degree, edge_probability, sample_bipartite, BlockMode,
    BlockStatus,
};
use super::{derive_seed, ConstructionError};

pub const EXPERIMENT_CSV_HEADER: &str = "n,seed,p,max_degree,degree_pass,block_status,block_failures,trials";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub ns: Vec<usize>,
    /// Samples per value of `n`.
    pub trials: u64,
    pub seed: u64,
    pub params: Lemma3Params,
    /// `None` skips the block property.
    pub block: Option<BlockMode>,
}

/// One sampled graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub n: usize,
    /// The sample's own seed.
    pub seed: u64,
    pub p: f64,
    pub max_degree: usize,
    pub degree_pass: bool,
    /// `verified`, `falsified`, `unknown_sampled` or `skipped`.
    pub block_status: String,
    pub block_failures: u64,
    /// Block-property collections drawn.
    pub trials: u64,
}

impl ExperimentRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.n, self.seed, self.p, self.max_degree, self.degree_pass, self.block_status, self.block_failures, self.trials
        )
    }
}

/// Seed of sample `trial` at size `n`.
pub fn sample_seed(master: u64, n: usize, trial: u64) -> u64 {
    derive_seed(derive_seed(master, n as u64), trial)
}

/// Rows ordered by `n` as given, then by trial. Samples run in parallel on
/// the current rayon pool; the rows do not depend on the thread count.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRow>, ConstructionError> {
    let jobs: Vec<(usize, u64)> = cfg.ns.iter().flat_map(|&n| (0..cfg.trials).map(move |t| (n, t))).collect();
    jobs.par_iter()
        .map(|&(n, trial)| {
            let seed = sample_seed(cfg.seed, n, trial);
            let g = sample_bipartite(n, &cfg.params, seed)?;
            let degree = check_degree_property(&g, &cfg.params.epsilon, n)?;
            let max_degree = (0..g.vertex_count()).map(|v| cross_degree(&g, v)).max().unwrap_or(0);
            let (block_status, block_failures, trials) = match cfg.block {
                None => ("skipped".to_string(), 0, 0),
                Some(mode) => {
                    let rep = check_block_property(&g, cfg.params.f, &cfg.params.epsilon, n, mode, derive_seed(seed, 0))?;
                    let status = match rep.status {
                        BlockStatus::Verified => "verified",
                        BlockStatus::Falsified { .. } => "falsified",
                        BlockStatus::UnknownSampled { .. } => "unknown_sampled",
                    };
                    (status.to_string(), rep.failures, rep.trials)
                }
            };
            Ok(ExperimentRow {
                n,
                seed,
                p: edge_probability(n, &cfg.params.delta),
                max_degree,
                degree_pass: degree.passed(),
                block_status,
                block_failures,
                trials,
            })
        })
        .collect()
}

/// Fraction of rows with `degree_pass`, per `n` in first-seen order.
pub fn degree_pass_frequencies(rows: &[ExperimentRow]) -> Vec<(usize, f64)> {
    let mut out: Vec<(usize, u64, u64)> = Vec::new();
    for r in rows {
        match out.iter_mut().find(|e| e.0 == r.n) {
            Some(e) => {
                e.1 += u64::from(r.degree_pass);
                e.2 += 1;
            }
            None => out.push((r.n, u64::from(r.degree_pass), 1)),
        }
    }
    out.into_iter().map(|(n, pass, total)| (n, pass as f64 / total as f64)).collect()
}
