//! Query routing on a proximity graph.
//!
//! [`greedy_search`] is joint pruning with full neighbor expansion: a
//! candidate set `C` and a bounded result set `R` start from random seed
//! vertices; each iteration extracts the closest vertex of `C`, evaluates its
//! unvisited neighbors, pushes them into `C` and lets each replace the worst
//! member of `R` if it is closer. The search stops after the first iteration
//! that leaves `R` unchanged.
//!
//! [`two_stage_search`] first runs the same loop but evaluates only
//! `ceil(k / h)` randomly chosen neighbors per expansion (`k` = degree
//! bound). When that stage stalls, `R` is merged back into `C` and the loop
//! resumes with full expansion.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::seq::index;
use rand_chacha::ChaCha8Rng;

use crate::distance::{QueryDistance, QueryMetric};
use crate::error::{NhqError, Result};
use crate::exec;
use crate::graph::CompositeGraph;
use crate::types::{Neighbor, NodeId, ObjectSet, Query};

/// Read access to adjacency lists. Implemented by [`CompositeGraph`] and by
/// the partially built graph used during incremental construction.
pub trait NeighborSource {
    fn node_count(&self) -> usize;
    fn degree_bound(&self) -> usize;
    fn neighbors_of(&self, u: NodeId) -> &[NodeId];
}

impl NeighborSource for CompositeGraph {
    fn node_count(&self) -> usize {
        self.len()
    }

    fn degree_bound(&self) -> usize {
        CompositeGraph::degree_bound(self)
    }

    fn neighbors_of(&self, u: NodeId) -> &[NodeId] {
        self.neighbors(u)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchParams {
    /// Number of hits returned.
    pub k_results: usize,
    /// Capacity of the working result set `R`.
    pub pool_size: usize,
    /// Stage-1 sampling divisor: `ceil(degree_bound / h)` neighbors per hop.
    pub h: usize,
    /// Number of random entry vertices.
    pub seeds: usize,
    pub rng_seed: u64,
}

impl SearchParams {
    pub fn new(k_results: usize, pool_size: usize) -> Self {
        Self {
            k_results,
            pool_size,
            h: 1,
            seeds: 1,
            rng_seed: 0,
        }
    }

    pub fn with_h(mut self, h: usize) -> Self {
        self.h = h;
        self
    }

    pub fn with_seeds(mut self, seeds: usize) -> Self {
        self.seeds = seeds;
        self
    }

    pub fn with_rng_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    pub fn validate(&self, degree_bound: usize) -> Result<()> {
        if self.k_results == 0 {
            return Err(NhqError::usage("k_results must be at least 1"));
        }
        if self.pool_size < self.k_results {
            return Err(NhqError::usage(format!(
                "pool_size {} must be >= k_results {}",
                self.pool_size, self.k_results
            )));
        }
        if self.h == 0 || self.h > degree_bound.max(1) {
            return Err(NhqError::usage(format!(
                "h must lie in [1, {}], got {}",
                degree_bound.max(1),
                self.h
            )));
        }
        if self.seeds == 0 {
            return Err(NhqError::usage("at least one seed vertex is required"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    /// Best hits, ascending by distance.
    pub hits: Vec<Neighbor>,
    /// Distance evaluations performed.
    pub ndc: usize,
    pub hops: usize,
    /// Distance evaluations made before the switch to full expansion.
    pub stage1_ndc: usize,
    pub stage1_hops: usize,
    pub stage2_hops: usize,
    /// Vertex whose expansion ended the search.
    pub last_expanded: Option<NodeId>,
    /// Expanded vertices in order, across both stages.
    pub path: Vec<NodeId>,
}

/// Generation-stamped membership marks, reusable across searches without
/// clearing.
#[derive(Debug, Clone)]
pub(crate) struct VisitedSet {
    marks: Vec<u32>,
    epoch: u32,
}

impl VisitedSet {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            marks: vec![0; n],
            epoch: 1,
        }
    }

    pub(crate) fn reset(&mut self) {
        if self.epoch == u32::MAX {
            self.marks.iter_mut().for_each(|m| *m = 0);
            self.epoch = 1;
        } else {
            self.epoch += 1;
        }
    }

    /// Marks `u`; returns false if it was already marked.
    #[inline]
    pub(crate) fn insert(&mut self, u: NodeId) -> bool {
        let slot = &mut self.marks[u as usize];
        if *slot == self.epoch {
            false
        } else {
            *slot = self.epoch;
            true
        }
    }
}

/// Bounded result set, ascending.
struct ResultSet {
    items: Vec<Neighbor>,
    cap: usize,
}

impl ResultSet {
    fn new(cap: usize) -> Self {
        Self {
            items: Vec::with_capacity(cap + 1),
            cap,
        }
    }

    fn offer(&mut self, n: Neighbor) -> bool {
        if self.items.len() == self.cap {
            match self.items.last() {
                Some(worst) if n < *worst => {
                    self.items.pop();
                }
                _ => return false,
            }
        }
        let pos = self.items.partition_point(|x| *x < n);
        self.items.insert(pos, n);
        true
    }
}

pub(crate) struct RouteConfig {
    pub pool_size: usize,
    /// `Some(s)`: run a sampled first stage evaluating `s` neighbors per hop.
    pub stage1_sample: Option<usize>,
}

pub(crate) struct RouteOutcome {
    pub pool: Vec<Neighbor>,
    pub ndc: usize,
    pub stage1_ndc: usize,
    pub stage1_hops: usize,
    pub stage2_hops: usize,
    pub last_expanded: Option<NodeId>,
    pub path: Vec<NodeId>,
}

struct Router<'a, G: ?Sized, D: ?Sized, A, E> {
    graph: &'a G,
    dist: &'a D,
    visited: &'a mut VisitedSet,
    expanded: VisitedSet,
    cands: BinaryHeap<Reverse<Neighbor>>,
    results: ResultSet,
    scratch: Vec<NodeId>,
    ndc: usize,
    path: Vec<NodeId>,
    admit: A,
    on_eval: E,
}

impl<G, D, A, E> Router<'_, G, D, A, E>
where
    G: NeighborSource + ?Sized,
    D: QueryDistance + ?Sized,
    A: Fn(NodeId) -> bool,
    E: FnMut(Neighbor),
{
    /// Evaluates `v` if unvisited; returns whether `R` changed.
    #[inline]
    fn visit(&mut self, v: NodeId) -> bool {
        if !self.visited.insert(v) {
            return false;
        }
        let n = Neighbor::new(v, self.dist.eval(v));
        self.ndc += 1;
        (self.on_eval)(n);
        self.cands.push(Reverse(n));
        (self.admit)(v) && self.results.offer(n)
    }

    /// Runs extraction/expansion until an iteration leaves `R` unchanged or
    /// `C` is exhausted. Returns the number of expansions.
    fn stage(&mut self, sample: Option<usize>, rng: &mut ChaCha8Rng) -> usize {
        let mut hops = 0;
        while let Some(Reverse(u)) = self.cands.pop() {
            if !self.expanded.insert(u.id) {
                continue;
            }
            hops += 1;
            self.path.push(u.id);
            let all = self.graph.neighbors_of(u.id);
            let mut list = std::mem::take(&mut self.scratch);
            list.clear();
            match sample {
                Some(s) if all.len() > s => {
                    let mut pos = index::sample(rng, all.len(), s).into_vec();
                    pos.sort_unstable();
                    list.extend(pos.into_iter().map(|p| all[p]));
                }
                _ => list.extend_from_slice(all),
            }
            let mut updated = false;
            for &v in &list {
                updated |= self.visit(v);
            }
            self.scratch = list;
            if !updated {
                break;
            }
        }
        hops
    }
}

/// The shared routing loop. `admit` decides which evaluated vertices may
/// enter `R` (always true except for filter-during-traversal baselines);
/// `on_eval` sees every evaluated vertex.
#[allow(clippy::too_many_arguments)]
pub(crate) fn route<G, D, A, E>(
    graph: &G,
    dist: &D,
    entries: &[NodeId],
    cfg: &RouteConfig,
    rng: &mut ChaCha8Rng,
    visited: &mut VisitedSet,
    admit: A,
    on_eval: E,
) -> RouteOutcome
where
    G: NeighborSource + ?Sized,
    D: QueryDistance + ?Sized,
    A: Fn(NodeId) -> bool,
    E: FnMut(Neighbor),
{
    visited.reset();
    let mut r = Router {
        graph,
        dist,
        visited,
        expanded: VisitedSet::new(graph.node_count()),
        cands: BinaryHeap::new(),
        results: ResultSet::new(cfg.pool_size),
        scratch: Vec::new(),
        ndc: 0,
        path: Vec::new(),
        admit,
        on_eval,
    };
    for &e in entries {
        r.visit(e);
    }

    let (stage1_ndc, stage1_hops, stage2_hops) = match cfg.stage1_sample {
        Some(s) if s < graph.degree_bound() => {
            let h1 = r.stage(Some(s), rng);
            let ndc1 = r.ndc;
            // C <- C ∪ R, then full expansion with fresh expansion marks
            r.expanded.reset();
            for i in 0..r.results.items.len() {
                let item = r.results.items[i];
                r.cands.push(Reverse(item));
            }
            (ndc1, h1, r.stage(None, rng))
        }
        _ => (0, 0, r.stage(None, rng)),
    };

    RouteOutcome {
        pool: r.results.items,
        ndc: r.ndc,
        stage1_ndc,
        stage1_hops,
        stage2_hops,
        last_expanded: r.path.last().copied(),
        path: r.path,
    }
}

fn pick_entries<G: NeighborSource + ?Sized>(graph: &G, seeds: usize, rng: &mut ChaCha8Rng) -> Vec<NodeId> {
    let n = graph.node_count();
    let mut ids: Vec<NodeId> = index::sample(rng, n, seeds.min(n))
        .into_iter()
        .map(|i| i as NodeId)
        .collect();
    ids.sort_unstable();
    ids
}

pub(crate) fn query_rng(seed: u64) -> ChaCha8Rng {
    exec::rng_for(seed, exec::stream::QUERY, 0)
}

fn checked_params<G: NeighborSource + ?Sized>(graph: &G, p: &SearchParams) -> Result<SearchParams> {
    if graph.node_count() == 0 {
        return Err(NhqError::usage("cannot search an empty graph"));
    }
    p.validate(graph.degree_bound())?;
    let mut p = *p;
    let n = graph.node_count();
    if p.k_results > n {
        log::warn!("k_results {} exceeds object count {n}; clamping", p.k_results);
        p.k_results = n;
        p.pool_size = p.pool_size.min(n).max(p.k_results);
    }
    Ok(p)
}

fn run<G, D>(graph: &G, dist: &D, p: &SearchParams, two_stage: bool) -> Result<SearchResult>
where
    G: NeighborSource + ?Sized,
    D: QueryDistance + ?Sized,
{
    run_admitting(graph, dist, p, two_stage, None, |_| true)
}

/// Routing where only vertices passing `admit` may enter the result set.
/// `entries` overrides the random seed vertices.
pub(crate) fn run_admitting<G, D, A>(
    graph: &G,
    dist: &D,
    p: &SearchParams,
    two_stage: bool,
    entries: Option<&[NodeId]>,
    admit: A,
) -> Result<SearchResult>
where
    G: NeighborSource + ?Sized,
    D: QueryDistance + ?Sized,
    A: Fn(NodeId) -> bool,
{
    let p = checked_params(graph, p)?;
    let mut rng = query_rng(p.rng_seed);
    let entries = match entries {
        Some(e) => {
            if e.is_empty() || e.iter().any(|&v| v as usize >= graph.node_count()) {
                return Err(NhqError::usage("entry vertices must be non-empty and in range"));
            }
            e.to_vec()
        }
        None => pick_entries(graph, p.seeds, &mut rng),
    };
    let stage1_sample = two_stage.then(|| graph.degree_bound().div_ceil(p.h));
    let cfg = RouteConfig {
        pool_size: p.pool_size,
        stage1_sample,
    };
    let mut visited = VisitedSet::new(graph.node_count());
    let out = route(graph, dist, &entries, &cfg, &mut rng, &mut visited, admit, |_| {});
    let mut hits = out.pool;
    hits.truncate(p.k_results);
    Ok(SearchResult {
        hits,
        ndc: out.ndc,
        hops: out.stage1_hops + out.stage2_hops,
        stage1_ndc: out.stage1_ndc,
        stage1_hops: out.stage1_hops,
        stage2_hops: out.stage2_hops,
        last_expanded: out.last_expanded,
        path: out.path,
    })
}

/// Greedy joint pruning from an explicit seed set instead of random entries.
pub fn greedy_search_from<G, D>(graph: &G, dist: &D, entries: &[NodeId], p: &SearchParams) -> Result<SearchResult>
where
    G: NeighborSource + ?Sized,
    D: QueryDistance + ?Sized,
{
    run_admitting(graph, dist, p, false, Some(entries), |_| true)
}

/// Greedy joint pruning over any adjacency with any query distance.
pub fn greedy_search_with<G, D>(graph: &G, dist: &D, p: &SearchParams) -> Result<SearchResult>
where
    G: NeighborSource + ?Sized,
    D: QueryDistance + ?Sized,
{
    run(graph, dist, p, false)
}

/// Two-stage routing over any adjacency with any query distance.
pub fn two_stage_search_with<G, D>(graph: &G, dist: &D, p: &SearchParams) -> Result<SearchResult>
where
    G: NeighborSource + ?Sized,
    D: QueryDistance + ?Sized,
{
    run(graph, dist, p, true)
}

/// Greedy search under the graph's own distance mode.
pub fn greedy_search(g: &CompositeGraph, set: &ObjectSet, q: &Query, p: &SearchParams) -> Result<SearchResult> {
    g.check_aligned(set)?;
    let metric = QueryMetric::new(set, q, g.mode())?;
    greedy_search_with(g, &metric, p)
}

/// Two-stage search under the graph's own distance mode.
pub fn two_stage_search(g: &CompositeGraph, set: &ObjectSet, q: &Query, p: &SearchParams) -> Result<SearchResult> {
    g.check_aligned(set)?;
    let metric = QueryMetric::new(set, q, g.mode())?;
    two_stage_search_with(g, &metric, p)
}

/// Hybrid query on a fusion-mode composite index. Hits are ranked by the
/// fusion distance and are not post-filtered by attribute.
pub fn hybrid_query(index: &CompositeGraph, set: &ObjectSet, q: &Query, p: &SearchParams) -> Result<SearchResult> {
    if !index.mode().is_fusion() {
        return Err(NhqError::usage("hybrid queries need an index built in fusion mode"));
    }
    two_stage_search(index, set, q, p)
}
