//! Landing-zone edge selection.
//!
//! The landing zone of a selected neighbor `u_j` of `u_i` is the half space on
//! `u_i`'s side of the bisector between them, minus the ball around `u_i`
//! of radius `dist(u_i, u_j)`. A candidate is accepted only if it lies in the
//! landing zone of every neighbor already selected, which keeps neighbors
//! both close and spread over different directions.
//!
//! Only distances are used, never coordinates, so the same rule works
//! unchanged under the fusion distance.

use crate::types::{Neighbor, NodeId};

/// Candidate neighbors of one vertex, ascending by distance to it.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidatePool {
    owner: NodeId,
    candidates: Vec<Neighbor>,
}

impl CandidatePool {
    /// Sorts candidates, drops the owner itself and duplicate ids (keeping
    /// the first occurrence after sorting).
    pub fn new(owner: NodeId, mut candidates: Vec<Neighbor>) -> Self {
        candidates.retain(|c| c.id != owner);
        candidates.sort_unstable();
        let mut seen = std::collections::HashSet::with_capacity(candidates.len());
        candidates.retain(|c| seen.insert(c.id));
        Self { owner, candidates }
    }

    pub fn owner(&self) -> NodeId {
        self.owner
    }

    pub fn candidates(&self) -> &[Neighbor] {
        &self.candidates
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }
}

/// Whether `p` lies in the landing zone `L(i, j)`: strictly on `i`'s side of
/// the bisector and not strictly inside the ball `B(i, dist(i, j))`.
pub fn in_landing_zone<D>(i: NodeId, j: NodeId, p: NodeId, dist: D) -> bool
where
    D: Fn(NodeId, NodeId) -> f64,
{
    dist(p, i) < dist(p, j) && dist(i, p) >= dist(i, j)
}

/// Selects at most `k` neighbors from `pool`.
///
/// The nearest candidate is always taken; each later one is taken iff it is
/// in the intersection of the landing zones of everything selected so far.
/// Scanning stops when the pool is exhausted or `k` neighbors are chosen.
pub fn select_neighbors<D>(pool: &CandidatePool, k: usize, dist: D) -> Vec<Neighbor>
where
    D: Fn(NodeId, NodeId) -> f64,
{
    select_neighbors_counted(pool, k, dist).0
}

/// As [`select_neighbors`], also returning the number of landing-zone checks.
pub fn select_neighbors_counted<D>(pool: &CandidatePool, k: usize, dist: D) -> (Vec<Neighbor>, usize)
where
    D: Fn(NodeId, NodeId) -> f64,
{
    let mut selected: Vec<Neighbor> = Vec::with_capacity(k.min(pool.len()));
    let mut checks = 0;
    if k == 0 {
        return (selected, checks);
    }
    for &cand in pool.candidates() {
        if selected.len() == k {
            break;
        }
        // pool distances are to the owner: dist(i, p) == dist(p, i)
        let accepted = selected.iter().all(|sel| {
            checks += 1;
            cand.distance < dist(cand.id, sel.id) && cand.distance >= sel.distance
        });
        if accepted {
            selected.push(cand);
        }
    }
    (selected, checks)
}
