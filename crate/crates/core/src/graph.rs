//! Adjacency-list proximity graph and graph-quality measurement.

use std::collections::HashSet;

use rand::seq::index;
use serde::{Deserialize, Serialize};

use crate::distance::PairMetric;
use crate::error::{NhqError, Result};
use crate::exec::{self, Executor};
use crate::types::{DistanceMode, Neighbor, NodeId, ObjectSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BuilderKind {
    Threshold,
    NpgNsw,
    NpgKgraph,
    /// Hand-assembled graphs (tests, toy examples).
    Manual,
}

impl BuilderKind {
    pub fn name(&self) -> &'static str {
        match self {
            BuilderKind::Threshold => "threshold",
            BuilderKind::NpgNsw => "npg-nsw",
            BuilderKind::NpgKgraph => "npg-kgraph",
            BuilderKind::Manual => "manual",
        }
    }
}

/// Provenance of a built graph. Worker count is deliberately absent: the
/// same inputs must give the same bytes on any number of threads.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuildMeta {
    pub builder: BuilderKind,
    pub k: u32,
    pub l: u32,
    pub quality_threshold: f64,
    pub theta_prime: f64,
    pub seed: u64,
    /// False for the threshold builder, whose degree is unbounded.
    pub degree_bounded: bool,
    /// Refinement rounds actually run (NPG_kgraph only).
    pub rounds: u32,
    /// Final sampled candidate-graph quality (NPG_kgraph only).
    pub estimated_quality: f64,
}

impl BuildMeta {
    pub fn manual(k: usize) -> Self {
        BuildMeta {
            builder: BuilderKind::Manual,
            k: k as u32,
            l: k as u32,
            quality_threshold: 0.0,
            theta_prime: 0.0,
            seed: 0,
            degree_bounded: true,
            rounds: 0,
            estimated_quality: 0.0,
        }
    }
}

/// Proximity graph over the objects of an [`ObjectSet`]. Each vertex's list
/// is kept in ascending distance order, as produced by edge selection.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeGraph {
    adjacency: Vec<Vec<NodeId>>,
    degree_bound: usize,
    mode: DistanceMode,
    meta: BuildMeta,
}

impl CompositeGraph {
    /// Assembles a graph, rejecting self-loops, duplicates, out-of-range ids
    /// and lists longer than `degree_bound`.
    pub fn new(
        adjacency: Vec<Vec<NodeId>>,
        degree_bound: usize,
        mode: DistanceMode,
        meta: BuildMeta,
    ) -> Result<Self> {
        let g = CompositeGraph {
            adjacency,
            degree_bound,
            mode,
            meta,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.degree_bound == 0 {
            return Err(NhqError::Invariant("degree bound must be positive".into()));
        }
        let n = self.adjacency.len();
        let mut seen = HashSet::new();
        for (u, list) in self.adjacency.iter().enumerate() {
            if list.len() > self.degree_bound {
                return Err(NhqError::Invariant(format!(
                    "vertex {u} has degree {} above bound {}",
                    list.len(),
                    self.degree_bound
                )));
            }
            seen.clear();
            for &v in list {
                if v as usize >= n {
                    return Err(NhqError::Invariant(format!("vertex {u} links to {v} >= n={n}")));
                }
                if v as usize == u {
                    return Err(NhqError::Invariant(format!("self-loop at vertex {u}")));
                }
                if !seen.insert(v) {
                    return Err(NhqError::Invariant(format!("duplicate neighbor {v} at vertex {u}")));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    #[inline]
    pub fn neighbors(&self, u: NodeId) -> &[NodeId] {
        &self.adjacency[u as usize]
    }

    pub fn adjacency(&self) -> &[Vec<NodeId>] {
        &self.adjacency
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn mode(&self) -> DistanceMode {
        self.mode
    }

    pub fn meta(&self) -> &BuildMeta {
        &self.meta
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum()
    }

    /// Checks the graph can be paired with `set`.
    pub fn check_aligned(&self, set: &ObjectSet) -> Result<()> {
        if self.len() != set.len() {
            return Err(NhqError::usage(format!(
                "graph has {} vertices but object set has {} objects",
                self.len(),
                set.len()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeStats {
    pub min: usize,
    pub mean: f64,
    pub max: usize,
}

pub fn degree_stats(g: &CompositeGraph) -> DegreeStats {
    let degrees = g.adjacency.iter().map(Vec::len);
    if g.is_empty() {
        return DegreeStats { min: 0, mean: 0.0, max: 0 };
    }
    let (mut min, mut max, mut sum) = (usize::MAX, 0, 0);
    for d in degrees {
        min = min.min(d);
        max = max.max(d);
        sum += d;
    }
    DegreeStats {
        min,
        mean: sum as f64 / g.len() as f64,
        max,
    }
}

/// Which vertices enter a quality estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sample {
    All,
    Count(usize),
}

impl Sample {
    /// The default estimator size: every vertex up to 1000, else 1000.
    pub fn default_for(n: usize) -> Self {
        if n <= 1000 {
            Sample::All
        } else {
            Sample::Count(1000)
        }
    }
}

/// Result of a graph-quality measurement.
///
/// `quality` is the mean over sampled vertices `u` of `|N(u) ∩ M(u)| / k`,
/// with `M(u)` the exact `k` nearest other vertices under the graph's
/// distance. When only a sample is taken, `std_error` is the standard error
/// of that mean (per-vertex standard deviation over `sqrt(samples)`, with a
/// finite-population correction); it is zero for `Sample::All`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphQualityReport {
    pub quality: f64,
    pub sampled_vertices: usize,
    pub k_used: usize,
    pub std_error: f64,
}

/// Picks the sampled vertex ids, sorted ascending.
pub(crate) fn sample_vertices(n: usize, sample: Sample, seed: u64) -> Vec<NodeId> {
    match sample {
        Sample::Count(c) if c < n => {
            let mut rng = exec::rng_for(seed, exec::stream::QUALITY_SAMPLE, 0);
            let mut ids: Vec<NodeId> = index::sample(&mut rng, n, c)
                .into_iter()
                .map(|i| i as NodeId)
                .collect();
            ids.sort_unstable();
            ids
        }
        _ => (0..n as NodeId).collect(),
    }
}

/// Exact `k` nearest vertices of `u` in `V \ {u}` by brute force.
pub(crate) fn exact_knn(metric: &PairMetric<'_>, u: NodeId, k: usize) -> Vec<Neighbor> {
    let n = metric.set().len() as NodeId;
    let mut all: Vec<Neighbor> = (0..n)
        .filter(|&v| v != u)
        .map(|v| Neighbor::new(v, metric.between(u, v)))
        .collect();
    let k = k.min(all.len());
    if k < all.len() {
        all.select_nth_unstable(k);
        all.truncate(k);
    }
    all.sort_unstable();
    all
}

pub(crate) fn overlap_ratio(list: &[NodeId], truth: &[Neighbor], k: usize) -> f64 {
    let hits = truth.iter().filter(|t| list.contains(&t.id)).count();
    hits as f64 / k as f64
}

pub(crate) fn summarize(ratios: &[f64], n: usize, k: usize) -> GraphQualityReport {
    let s = ratios.len();
    let quality = ratios.iter().sum::<f64>() / s as f64;
    let std_error = if s >= n || s < 2 {
        0.0
    } else {
        let var = ratios.iter().map(|r| (r - quality).powi(2)).sum::<f64>() / (s - 1) as f64;
        (var / s as f64 * (1.0 - s as f64 / n as f64)).sqrt()
    };
    GraphQualityReport {
        quality,
        sampled_vertices: s,
        k_used: k,
        std_error,
    }
}

/// Measures graph quality against brute-force neighbors; `k` is the graph's
/// degree bound.
pub fn graph_quality(
    g: &CompositeGraph,
    set: &ObjectSet,
    sample: Sample,
    seed: u64,
) -> Result<GraphQualityReport> {
    graph_quality_with(g, set, sample, seed, &Executor::new(0))
}

pub fn graph_quality_with(
    g: &CompositeGraph,
    set: &ObjectSet,
    sample: Sample,
    seed: u64,
    exec: &Executor,
) -> Result<GraphQualityReport> {
    if g.is_empty() {
        return Err(NhqError::usage("graph quality of an empty graph is undefined"));
    }
    g.check_aligned(set)?;
    if let Sample::Count(0) = sample {
        return Err(NhqError::usage("quality sample must be positive"));
    }
    if let Sample::Count(c) = sample {
        if c > g.len() {
            return Err(NhqError::usage(format!(
                "quality sample {c} exceeds vertex count {}",
                g.len()
            )));
        }
    }
    let k = g.degree_bound();
    let metric = PairMetric::new(set, g.mode());
    let ids = sample_vertices(g.len(), sample, seed);
    let ratios = exec.map(ids.len(), |i| {
        let u = ids[i];
        let truth = exact_knn(&metric, u, k);
        overlap_ratio(g.neighbors(u), &truth, k)
    });
    Ok(summarize(&ratios, g.len(), k))
}
