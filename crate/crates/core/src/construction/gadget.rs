//! The clique gadget: the complement of a sampled bipartite graph restricted
//! to `m` vertices of its larger side.

use serde::{Deserialize, Serialize};

use super::params::Lemma3Params;
use super::rational::Rational;
use super::sample::{
    check_block_property, check_degree_property, edge_probability, sample_bipartite, BlockMode, BlockReport,
    BlockStatus, DegreeCheck,
};
use super::{derive_seed, ConstructionError};
use crate::graph::{Graph, Side, VertexSet};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleReport {
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub p: f64,
    pub property_degree: DegreeCheck,
    pub property_blocks: BlockReport,
}

/// Whether a sample must also pass the block property to be accepted. The
/// degree property is always required: it is what bounds the number of
/// non-neighbours in the gadget.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockRequirement {
    /// Reject samples whose block check found a collection without a fully
    /// joined pair.
    Required,
    /// Record the block check but accept regardless.
    RecordOnly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildOptions {
    pub max_retries: u32,
    pub block_mode: BlockMode,
    pub block_requirement: BlockRequirement,
}

impl Default for BuildOptions {
    fn default() -> BuildOptions {
        BuildOptions {
            max_retries: 32,
            block_mode: BlockMode::Sampled { trials: 100_000 },
            block_requirement: BlockRequirement::Required,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum BuildOutcome {
    /// `h` has side `A` on `0..m` and side `B` on `m..m+n`. `rejected` lists
    /// the samples tried before the accepted one.
    Built {
        h: Box<Graph>,
        report: SampleReport,
        rejected: Vec<SampleReport>,
    },
    GaveUp { reports: Vec<SampleReport> },
}

/// Samples `G′`, checks both properties, keeps the first `m` vertices of its
/// side `A` and complements. Attempt `i` uses seed `derive_seed(seed, i)`.
pub fn build_h(
    m: usize,
    n: usize,
    params: &Lemma3Params,
    seed: u64,
    opts: &BuildOptions,
) -> Result<BuildOutcome, ConstructionError> {
    let m_max = params.m_for(n);
    if n < 2 || n > m || m > m_max {
        return Err(ConstructionError::InvalidSizes(format!(
            "need 2 <= n <= m <= floor(C*n) = {m_max}, got n = {n}, m = {m}"
        )));
    }
    let mut reports = Vec::new();
    for attempt in 0..opts.max_retries {
        let attempt_seed = derive_seed(seed, u64::from(attempt));
        let g = sample_bipartite(n, params, attempt_seed)?;
        let property_degree = check_degree_property(&g, &params.epsilon, n)?;
        let property_blocks =
            check_block_property(&g, params.f, &params.epsilon, n, opts.block_mode, derive_seed(attempt_seed, 0))?;
        let report = SampleReport {
            seed: attempt_seed,
            n,
            m: m_max,
            p: edge_probability(n, &params.delta),
            property_degree,
            property_blocks,
        };
        let blocks_ok = opts.block_requirement == BlockRequirement::RecordOnly
            || !matches!(report.property_blocks.status, BlockStatus::Falsified { .. });
        if report.property_degree.passed() && blocks_ok {
            let keep: VertexSet = (0..m).chain(m_max..m_max + n).collect();
            let h = g.induced_subgraph(&keep)?.graph.complement();
            return Ok(BuildOutcome::Built {
                h: Box::new(h),
                report,
                rejected: reports,
            });
        }
        reports.push(report);
    }
    Ok(BuildOutcome::GaveUp { reports })
}

/// Checks the gadget guarantees: both sides are cliques and every vertex has
/// at most `ε·n` non-neighbours.
pub fn gadget_holds(h: &Graph, epsilon: &Rational, n: usize) -> bool {
    let limit = *epsilon * Rational::from_integer(n as i128);
    h.is_clique(&h.part(Side::A))
        && h.is_clique(&h.part(Side::B))
        && (0..h.vertex_count()).all(|v| Rational::from_integer(h.non_neighbor_count(v) as i128) <= limit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::derive_lemma3_params;

    fn r(p: i128, q: i128) -> Rational {
        Rational::new(p, q)
    }

    #[test]
    fn built_gadget_has_clique_sides() {
        let params = derive_lemma3_params(r(1, 2), r(1, 1)).unwrap().with_delta(r(9, 10)).unwrap();
        let opts = BuildOptions {
            block_mode: BlockMode::Sampled { trials: 200 },
            block_requirement: BlockRequirement::RecordOnly,
            ..Default::default()
        };
        let BuildOutcome::Built { h, report, .. } = build_h(10, 10, &params, 11, &opts).unwrap() else {
            panic!("no sample passed the degree check");
        };
        assert_eq!(h.vertex_count(), 20);
        assert!(report.property_degree.passed());
        assert!(gadget_holds(&h, &params.epsilon, 10));
        assert_eq!(build_h(10, 10, &params, 11, &opts).unwrap(), build_h(10, 10, &params, 11, &opts).unwrap());
    }

    #[test]
    fn gives_up_when_degrees_are_hopeless() {
        // p is close to 1, so every degree is far above εn.
        let params = derive_lemma3_params(r(1, 10), r(1, 1)).unwrap();
        let opts = BuildOptions {
            max_retries: 3,
            block_mode: BlockMode::Sampled { trials: 10 },
            ..Default::default()
        };
        match build_h(20, 20, &params, 0, &opts).unwrap() {
            BuildOutcome::GaveUp { reports } => {
                assert_eq!(reports.len(), 3);
                assert!(reports.iter().all(|r| !r.property_degree.passed()));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn size_preconditions() {
        let params = derive_lemma3_params(r(1, 2), r(1, 1)).unwrap();
        assert!(build_h(11, 10, &params, 0, &BuildOptions::default()).is_err());
        assert!(build_h(9, 10, &params, 0, &BuildOptions::default()).is_err());
    }
}
