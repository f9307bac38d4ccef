use super::{check_mode, BuildParams};
use crate::distance::PairMetric;
use crate::error::{NhqError, Result};
use crate::exec::Executor;
use crate::graph::{BuildMeta, BuilderKind, CompositeGraph};
use crate::types::{DistanceMode, Neighbor, NodeId, ObjectSet};

/// Connects every pair whose distance is at most `theta_prime`. Quadratic;
/// meant for small sets and as a reference. The degree is not bounded.
pub fn build_threshold_graph(set: &ObjectSet, theta_prime: f64, mode: DistanceMode) -> Result<CompositeGraph> {
    let params = BuildParams {
        theta_prime,
        ..BuildParams::default()
    };
    build_threshold_graph_with(set, mode, &params)
}

pub fn build_threshold_graph_with(set: &ObjectSet, mode: DistanceMode, params: &BuildParams) -> Result<CompositeGraph> {
    check_mode(set, mode)?;
    let n = set.len();
    if n == 0 {
        return Err(NhqError::usage("cannot build a graph over an empty object set"));
    }
    if params.theta_prime.is_nan() || params.theta_prime < 0.0 {
        return Err(NhqError::usage("theta_prime must be non-negative"));
    }
    if n > params.threshold_cap {
        return Err(NhqError::usage(format!(
            "threshold graph over {n} objects exceeds the cap of {}; use npg-kgraph or npg-nsw",
            params.threshold_cap
        )));
    }
    let metric = PairMetric::new(set, mode);
    let theta = params.theta_prime;
    let exec = Executor::new(params.threads);
    let adjacency: Vec<Vec<NodeId>> = exec.map(n, |i| {
        let i = i as NodeId;
        let mut row: Vec<Neighbor> = (0..n as NodeId)
            .filter(|&j| j != i)
            .map(|j| Neighbor::new(j, metric.between(i, j)))
            .filter(|nb| nb.distance <= theta)
            .collect();
        row.sort_unstable();
        row.into_iter().map(|nb| nb.id).collect()
    });
    let max_degree = adjacency.iter().map(Vec::len).max().unwrap_or(0);
    let meta = BuildMeta {
        builder: BuilderKind::Threshold,
        k: max_degree as u32,
        l: 0,
        quality_threshold: 0.0,
        theta_prime: theta,
        seed: params.seed,
        degree_bounded: false,
        rounds: 0,
        estimated_quality: 0.0,
    };
    CompositeGraph::new(adjacency, max_degree.max(1), mode, meta)
}
