use rand::seq::index;

use super::{check_mode, BuildParams};
use crate::distance::PairMetric;
use crate::edge_select::{select_neighbors, CandidatePool};
use crate::error::{NhqError, Result};
use crate::exec::{self, stream, Executor};
use crate::graph::{exact_knn, overlap_ratio, sample_vertices, BuildMeta, BuilderKind, CompositeGraph, Sample};
use crate::types::{DistanceMode, Neighbor, NodeId, ObjectSet};

/// Output of [`build_npg_kgraph_detailed`].
#[derive(Debug, Clone)]
pub struct KGraphBuild {
    /// The final graph after landing-zone edge selection.
    pub graph: CompositeGraph,
    /// The refined candidate graph truncated to its `k` nearest entries.
    pub candidate_graph: CompositeGraph,
    /// Refinement rounds executed.
    pub rounds: usize,
    /// Estimated candidate-graph quality before refinement and after each round.
    pub quality_trace: Vec<f64>,
}

/// Neighbor-descent construction: random candidate pools of size `l` are
/// refined by looking at neighbors of neighbors until the sampled quality of
/// their `k` nearest entries reaches the threshold, then each pool is pruned
/// to `k` neighbors by landing-zone selection.
pub fn build_npg_kgraph(set: &ObjectSet, params: &BuildParams, mode: DistanceMode) -> Result<CompositeGraph> {
    build_npg_kgraph_detailed(set, params, mode).map(|b| b.graph)
}

pub fn build_npg_kgraph_detailed(set: &ObjectSet, params: &BuildParams, mode: DistanceMode) -> Result<KGraphBuild> {
    params.validate()?;
    check_mode(set, mode)?;
    let n = set.len();
    if n == 0 {
        return Err(NhqError::usage("cannot build a graph over an empty object set"));
    }
    let (k, l) = (params.k, params.l);
    let metric = PairMetric::new(set, mode);
    let exec = Executor::new(params.threads);

    let mut pools = initial_pools(&metric, l, params.seed, &exec);

    let sample = if n <= params.quality_sample {
        Sample::All
    } else {
        Sample::Count(params.quality_sample)
    };
    let probe = sample_vertices(n, sample, params.seed);
    let truth: Vec<Vec<Neighbor>> = exec.map(probe.len(), |i| exact_knn(&metric, probe[i], k));
    let estimate = |pools: &[Vec<Neighbor>]| {
        let kk = k.min(n - 1).max(1);
        let sum: f64 = probe
            .iter()
            .zip(&truth)
            .map(|(&u, t)| {
                let top: Vec<NodeId> = pools[u as usize].iter().take(k).map(|c| c.id).collect();
                overlap_ratio(&top, t, kk)
            })
            .sum();
        sum / probe.len() as f64
    };

    let mut trace = vec![estimate(&pools)];
    let mut rounds = 0;
    while *trace.last().unwrap() < params.quality_threshold && rounds < params.max_iterations {
        let (next, changed) = refine_round(&metric, &pools, &exec);
        pools = next;
        rounds += 1;
        trace.push(estimate(&pools));
        log::debug!("kgraph round {rounds}: quality {:.4}, {changed} replacements", trace[rounds]);
        if changed == 0 {
            break;
        }
    }
    let quality = *trace.last().unwrap();
    if quality < params.quality_threshold {
        log::warn!(
            "candidate graph quality {quality:.4} below threshold {} after {rounds} rounds",
            params.quality_threshold
        );
    }

    let meta = BuildMeta {
        builder: BuilderKind::NpgKgraph,
        k: k as u32,
        l: l as u32,
        quality_threshold: params.quality_threshold,
        theta_prime: 0.0,
        seed: params.seed,
        degree_bounded: true,
        rounds: rounds as u32,
        estimated_quality: quality,
    };
    let selected = exec.map(n, |i| {
        let pool = CandidatePool::new(i as NodeId, pools[i].clone());
        select_neighbors(&pool, k, |a, b| metric.between(a, b))
            .into_iter()
            .map(|nb| nb.id)
            .collect::<Vec<_>>()
    });
    let top_k = pools
        .iter()
        .map(|p| p.iter().take(k).map(|c| c.id).collect())
        .collect();
    Ok(KGraphBuild {
        graph: CompositeGraph::new(selected, k, mode, meta.clone())?,
        candidate_graph: CompositeGraph::new(top_k, k, mode, meta)?,
        rounds,
        quality_trace: trace,
    })
}

/// `l` distinct random other vertices per vertex, sorted by distance. Each
/// vertex draws from its own stream, so the result does not depend on
/// scheduling.
fn initial_pools(metric: &PairMetric<'_>, l: usize, seed: u64, exec: &Executor) -> Vec<Vec<Neighbor>> {
    let n = metric.set().len();
    let others = n - 1;
    exec.map(n, |i| {
        let mut pool: Vec<Neighbor> = if l >= others {
            (0..n).filter(|&j| j != i).map(|j| j as NodeId).map(|j| nb(metric, i, j)).collect()
        } else {
            let mut rng = exec::rng_for(seed, stream::KGRAPH_INIT, i as u64);
            index::sample(&mut rng, others, l)
                .into_iter()
                .map(|x| if x < i { x } else { x + 1 } as NodeId)
                .map(|j| nb(metric, i, j))
                .collect()
        };
        pool.sort_unstable();
        pool
    })
}

fn nb(metric: &PairMetric<'_>, i: usize, j: NodeId) -> Neighbor {
    Neighbor::new(j, metric.between(i as NodeId, j))
}

/// One synchronized round: every vertex reads the previous round's pools of
/// its candidates and swaps in any neighbor-of-neighbor closer than its
/// current farthest candidate. Returns the new pools and the replacement count.
pub(crate) fn refine_round(
    metric: &PairMetric<'_>,
    pools: &[Vec<Neighbor>],
    exec: &Executor,
) -> (Vec<Vec<Neighbor>>, usize) {
    let results = exec.map(pools.len(), |i| {
        let me = i as NodeId;
        let mut pool = pools[i].clone();
        let mut ids: Vec<NodeId> = pools[i]
            .iter()
            .flat_map(|c| pools[c.id as usize].iter().map(|x| x.id))
            .filter(|&x| x != me)
            .collect();
        ids.sort_unstable();
        ids.dedup();
        let mut changed = 0;
        for x in ids {
            if pool.iter().any(|c| c.id == x) {
                continue;
            }
            let cand = nb(metric, i, x);
            match pool.last() {
                Some(worst) if cand.distance < worst.distance => {
                    pool.pop();
                    let pos = pool.partition_point(|c| *c < cand);
                    pool.insert(pos, cand);
                    changed += 1;
                }
                _ => {}
            }
        }
        (pool, changed)
    });
    let changed = results.iter().map(|r| r.1).sum();
    (results.into_iter().map(|r| r.0).collect(), changed)
}
