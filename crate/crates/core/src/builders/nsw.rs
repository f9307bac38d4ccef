use rand::Rng;

use super::{check_mode, BuildParams};
use crate::distance::PairMetric;
use crate::edge_select::{select_neighbors, CandidatePool};
use crate::error::{NhqError, Result};
use crate::exec::{self, stream};
use crate::graph::{BuildMeta, BuilderKind, CompositeGraph};
use crate::search::{route, NeighborSource, RouteConfig, VisitedSet};
use crate::types::{DistanceMode, Neighbor, NodeId, ObjectSet};

/// Graph under construction: only the first `inserted` vertices exist.
struct PartialGraph {
    ids: Vec<Vec<NodeId>>,
    dists: Vec<Vec<f64>>,
    inserted: usize,
    k: usize,
}

impl NeighborSource for PartialGraph {
    fn node_count(&self) -> usize {
        self.inserted
    }

    fn degree_bound(&self) -> usize {
        self.k
    }

    fn neighbors_of(&self, u: NodeId) -> &[NodeId] {
        &self.ids[u as usize]
    }
}

impl PartialGraph {
    fn set_list(&mut self, u: usize, list: &[Neighbor]) {
        self.ids[u] = list.iter().map(|n| n.id).collect();
        self.dists[u] = list.iter().map(|n| n.distance).collect();
    }

    fn list(&self, u: usize) -> Vec<Neighbor> {
        self.ids[u]
            .iter()
            .zip(&self.dists[u])
            .map(|(&id, &d)| Neighbor::new(id, d))
            .collect()
    }

    /// Offers the reverse edge `u -> v`: `u`'s list is re-selected from its
    /// current neighbors plus `v`, so it keeps both the degree bound and the
    /// pairwise landing-zone property. `v` may be rejected, or may displace
    /// existing neighbors.
    fn add_reverse(&mut self, u: usize, v: Neighbor, metric: &PairMetric<'_>) {
        let mut list = self.list(u);
        list.push(v);
        let pool = CandidatePool::new(u as NodeId, list);
        let list = select_neighbors(&pool, self.k, |a, b| metric.between(a, b));
        self.set_list(u, &list);
    }
}

/// Incremental construction: each object, in index order, searches the
/// graph built so far from one random entry vertex, takes the `l` closest
/// vertices it evaluated as candidates, selects its neighbors by landing
/// zone, and offers each of them the reverse edge.
pub fn build_npg_nsw(set: &ObjectSet, params: &BuildParams, mode: DistanceMode) -> Result<CompositeGraph> {
    params.validate()?;
    check_mode(set, mode)?;
    let n = set.len();
    if n == 0 {
        return Err(NhqError::usage("cannot build a graph over an empty object set"));
    }
    let (k, l) = (params.k, params.l);
    let metric = PairMetric::new(set, mode);
    let mut g = PartialGraph {
        ids: vec![Vec::new(); n],
        dists: vec![Vec::new(); n],
        inserted: 1,
        k,
    };
    let mut rng = exec::rng_for(params.seed, stream::NSW_ENTRY, 0);
    let mut visited = VisitedSet::new(n);
    let cfg = RouteConfig {
        pool_size: l,
        stage1_sample: None,
    };

    for i in 1..n {
        let new = i as NodeId;
        let entry = rng.gen_range(0..i) as NodeId;
        let dist = |v: NodeId| metric.between(new, v);
        let mut evaluated = Vec::new();
        route(&g, &dist, &[entry], &cfg, &mut rng, &mut visited, |_| true, |nb| evaluated.push(nb));

        let mut pool = CandidatePool::new(new, evaluated);
        if pool.len() > l {
            let mut c = pool.candidates().to_vec();
            c.truncate(l);
            pool = CandidatePool::new(new, c);
        }
        let chosen = select_neighbors(&pool, k, |a, b| metric.between(a, b));
        g.set_list(i, &chosen);
        g.inserted = i + 1;
        for nb in &chosen {
            g.add_reverse(nb.id as usize, Neighbor::new(new, nb.distance), &metric);
        }
    }

    let meta = BuildMeta {
        builder: BuilderKind::NpgNsw,
        k: k as u32,
        l: l as u32,
        quality_threshold: params.quality_threshold,
        theta_prime: 0.0,
        seed: params.seed,
        degree_bounded: true,
        rounds: 0,
        estimated_quality: 0.0,
    };
    CompositeGraph::new(g.ids, k, mode, meta)
}
