//! Graph construction: the exhaustive threshold graph plus the two
//! navigable proximity graphs, each under either distance mode.

mod kgraph;
mod nsw;
mod threshold;

pub use kgraph::{build_npg_kgraph, build_npg_kgraph_detailed, KGraphBuild};
pub use nsw::build_npg_nsw;
pub use threshold::{build_threshold_graph, build_threshold_graph_with};

use serde::{Deserialize, Serialize};

use crate::error::{NhqError, Result};
use crate::graph::{BuilderKind, CompositeGraph};
use crate::types::{DistanceMode, ObjectSet};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BuildParams {
    /// Degree bound.
    pub k: usize,
    /// Candidate pool size, at least `k`.
    pub l: usize,
    /// Target candidate-graph quality that ends NPG_kgraph refinement.
    pub quality_threshold: f64,
    /// Fusion-distance threshold of the threshold builder.
    pub theta_prime: f64,
    pub seed: u64,
    /// Worker threads; 0 = all cores, 1 = sequential.
    pub threads: usize,
    /// Refinement round cap for NPG_kgraph.
    pub max_iterations: usize,
    /// Vertices sampled for the per-round quality estimate.
    pub quality_sample: usize,
    /// Largest object set the O(n^2) threshold builder accepts.
    pub threshold_cap: usize,
}

impl Default for BuildParams {
    fn default() -> Self {
        Self {
            k: 20,
            l: 60,
            quality_threshold: 0.8,
            theta_prime: 0.0,
            seed: 0,
            threads: 0,
            max_iterations: 30,
            quality_sample: 500,
            threshold_cap: 20_000,
        }
    }
}

impl BuildParams {
    pub fn new(k: usize, l: usize) -> Self {
        Self {
            k,
            l,
            ..Self::default()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(NhqError::usage("degree bound k must be at least 1"));
        }
        if self.l < self.k {
            return Err(NhqError::usage(format!(
                "candidate pool size l={} must be >= k={}",
                self.l, self.k
            )));
        }
        if !(self.quality_threshold > 0.0 && self.quality_threshold <= 1.0) {
            return Err(NhqError::usage("quality threshold must lie in (0, 1]"));
        }
        if self.theta_prime.is_nan() || self.theta_prime < 0.0 {
            return Err(NhqError::usage("theta_prime must be non-negative"));
        }
        if self.quality_sample == 0 {
            return Err(NhqError::usage("quality sample must be positive"));
        }
        Ok(())
    }
}

pub(crate) fn check_mode(set: &ObjectSet, mode: DistanceMode) -> Result<()> {
    if let DistanceMode::Fusion(w) = mode {
        w.validate()?;
        if set.attr_dim() == 0 {
            log::warn!("fusion mode on an object set without attributes reduces to vector distance");
        }
    }
    Ok(())
}

/// Builds a graph of the requested kind.
pub fn build(kind: BuilderKind, set: &ObjectSet, mode: DistanceMode, params: &BuildParams) -> Result<CompositeGraph> {
    match kind {
        BuilderKind::Threshold => build_threshold_graph_with(set, mode, params),
        BuilderKind::NpgNsw => build_npg_nsw(set, params, mode),
        BuilderKind::NpgKgraph => build_npg_kgraph(set, params, mode),
        BuilderKind::Manual => Err(NhqError::usage("manual graphs are not built")),
    }
}
