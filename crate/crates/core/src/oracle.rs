//! Brute-force ground truth and the filter-based baseline.

use serde::{Deserialize, Serialize};

use crate::distance::{l2, QueryMetric};
use crate::error::{NhqError, Result};
use crate::exec::Executor;
use crate::graph::CompositeGraph;
use crate::search::{run_admitting, two_stage_search, SearchParams, SearchResult};
use crate::types::{DistanceMode, Neighbor, NodeId, ObjectSet, Query};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TruthFlavor {
    /// Nearest objects by vector distance alone.
    Vector,
    /// Nearest by vector distance among objects whose attributes equal the query's.
    Hybrid,
}

/// Exact answers for a query batch. Hybrid entries may hold fewer than `k`
/// neighbors when matches are scarce.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    pub flavor: TruthFlavor,
    pub k: usize,
    pub entries: Vec<Vec<Neighbor>>,
}

impl GroundTruth {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn top_k(mut all: Vec<Neighbor>, k: usize) -> Vec<Neighbor> {
    if k < all.len() {
        all.select_nth_unstable(k);
        all.truncate(k);
    }
    all.sort_unstable();
    all
}

/// Linear scan under an arbitrary distance mode, ascending, ties by index.
pub fn exact_topk(s: &ObjectSet, q: &Query, k: usize, mode: DistanceMode) -> Result<Vec<Neighbor>> {
    if k > s.len() {
        return Err(NhqError::usage(format!("k={k} exceeds object count {}", s.len())));
    }
    let metric = QueryMetric::new(s, q, mode)?;
    use crate::distance::QueryDistance;
    let all = (0..s.len() as NodeId).map(|i| Neighbor::new(i, metric.eval(i))).collect();
    Ok(top_k(all, k))
}

/// Exact vector top-`k`; exactly `n` distance evaluations.
pub fn exact_topk_vector(s: &ObjectSet, q: &Query, k: usize) -> Result<Vec<Neighbor>> {
    exact_topk(s, q, k, DistanceMode::Euclidean)
}

/// Exact hybrid top-`k`: attribute-equal objects ranked by vector distance.
pub fn exact_topk_hybrid(s: &ObjectSet, q: &Query, k: usize) -> Result<Vec<Neighbor>> {
    s.check_query(q)?;
    let all = (0..s.len())
        .filter(|&i| s.attributes(i) == q.attributes.as_slice())
        .map(|i| Neighbor::new(i as NodeId, l2(&q.vector, s.vector(i))))
        .collect();
    Ok(top_k(all, k))
}

/// Ground truth for a query batch, parallel across queries.
pub fn ground_truth(s: &ObjectSet, queries: &[Query], k: usize, flavor: TruthFlavor, exec: &Executor) -> Result<GroundTruth> {
    if flavor == TruthFlavor::Vector && k > s.len() {
        return Err(NhqError::usage(format!("k={k} exceeds object count {}", s.len())));
    }
    for q in queries {
        s.check_query(q)?;
    }
    let entries = exec.map(queries.len(), |i| match flavor {
        TruthFlavor::Vector => exact_topk_vector(s, &queries[i], k),
        TruthFlavor::Hybrid => exact_topk_hybrid(s, &queries[i], k),
    });
    Ok(GroundTruth {
        flavor,
        k,
        entries: entries.into_iter().collect::<Result<_>>()?,
    })
}

/// How the baseline applies the attribute constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyBVariant {
    /// Vector search for `multiplier * k_results` candidates, then filter.
    #[default]
    PostFilter,
    /// Attribute check before any evaluated vertex may enter the result set.
    FilterDuringTraversal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrategyBResult {
    /// Hits carry vector distances; `ndc` counts vector distance evaluations.
    pub search: SearchResult,
    pub attribute_checks: usize,
}

/// Vector search on a Euclidean graph followed by exact attribute filtering.
pub fn strategy_b_search(
    vector_graph: &CompositeGraph,
    s: &ObjectSet,
    q: &Query,
    p: &SearchParams,
    candidate_multiplier: usize,
) -> Result<StrategyBResult> {
    strategy_b_search_variant(vector_graph, s, q, p, candidate_multiplier, StrategyBVariant::PostFilter)
}

pub fn strategy_b_search_variant(
    vector_graph: &CompositeGraph,
    s: &ObjectSet,
    q: &Query,
    p: &SearchParams,
    candidate_multiplier: usize,
    variant: StrategyBVariant,
) -> Result<StrategyBResult> {
    if vector_graph.mode() != DistanceMode::Euclidean {
        return Err(NhqError::usage("the filtering baseline needs a graph built in euclidean mode"));
    }
    if candidate_multiplier == 0 {
        return Err(NhqError::usage("candidate multiplier must be at least 1"));
    }
    vector_graph.check_aligned(s)?;
    s.check_query(q)?;
    let matches = |id: NodeId| s.attributes(id as usize) == q.attributes.as_slice();
    match variant {
        StrategyBVariant::PostFilter => {
            let want = p.k_results.saturating_mul(candidate_multiplier).min(s.len());
            let inner = SearchParams {
                k_results: want,
                pool_size: p.pool_size.max(want),
                ..*p
            };
            let mut res = two_stage_search(vector_graph, s, q, &inner)?;
            let attribute_checks = res.hits.len();
            res.hits.retain(|h| matches(h.id));
            res.hits.truncate(p.k_results);
            Ok(StrategyBResult {
                search: res,
                attribute_checks,
            })
        }
        StrategyBVariant::FilterDuringTraversal => {
            let metric = QueryMetric::new(s, q, DistanceMode::Euclidean)?;
            let res = run_admitting(vector_graph, &metric, p, true, None, matches)?;
            // every evaluated vertex is checked once
            Ok(StrategyBResult {
                attribute_checks: res.ndc,
                search: res,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::BuildMeta;
    use rand::{Rng, SeedableRng};

    fn hybrid(n: usize, seed: u64) -> ObjectSet {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let v = (0..n * 4).map(|_| rng.gen::<f32>()).collect();
        let a = (0..n * 2).map(|_| rng.gen_range(0..3)).collect();
        ObjectSet::new(4, v, a, vec![3, 3]).unwrap()
    }

    fn query(seed: u64) -> Query {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        Query::new((0..4).map(|_| rng.gen()).collect(), vec![rng.gen_range(0..3), rng.gen_range(0..3)])
    }

    fn complete(n: usize, mode: DistanceMode) -> CompositeGraph {
        let adj = (0..n as NodeId).map(|i| (0..n as NodeId).filter(|&j| j != i).collect()).collect();
        CompositeGraph::new(adj, n - 1, mode, BuildMeta::manual(n - 1)).unwrap()
    }

    #[test]
    fn self_match_ranks_first() {
        let s = hybrid(100, 1);
        let q = Query::vector_only(s.vector(7).to_vec());
        let r = exact_topk_vector(&s, &q, 3);
        assert!(r.is_err(), "attribute dimension mismatch must be reported");
        let q = Query::new(s.vector(7).to_vec(), s.attributes(7).to_vec());
        let r = exact_topk_vector(&s, &q, 3).unwrap();
        assert_eq!(r[0], Neighbor::new(7, 0.0));
    }

    #[test]
    fn k_equal_n_is_permutation() {
        let s = hybrid(60, 2);
        let r = exact_topk_vector(&s, &query(3), 60).unwrap();
        let mut ids: Vec<_> = r.iter().map(|n| n.id).collect();
        ids.sort_unstable();
        assert_eq!(ids, (0..60).collect::<Vec<_>>());
        assert!(exact_topk_vector(&s, &query(3), 61).is_err());
    }

    #[test]
    fn vector_scan_matches_full_sort() {
        let s = hybrid(300, 4);
        for qs in 0..10 {
            let q = query(qs);
            // independent implementation: squared distances, full stable sort
            let mut all: Vec<(f64, usize)> = (0..300)
                .map(|i| {
                    let d2: f64 = q.vector.iter().zip(s.vector(i)).map(|(a, b)| (*a as f64 - *b as f64).powi(2)).sum();
                    (d2, i)
                })
                .collect();
            all.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let want: Vec<NodeId> = all[..10].iter().map(|x| x.1 as NodeId).collect();
            let got: Vec<NodeId> = exact_topk_vector(&s, &q, 10).unwrap().iter().map(|n| n.id).collect();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn hybrid_matches_filter_then_sort() {
        let s = hybrid(500, 5);
        for qs in 0..20 {
            let q = query(100 + qs);
            let mut want: Vec<(f64, usize)> = (0..500)
                .filter(|&i| s.attributes(i) == q.attributes.as_slice())
                .map(|i| {
                    let d2: f64 = q.vector.iter().zip(s.vector(i)).map(|(a, b)| (*a as f64 - *b as f64).powi(2)).sum();
                    (d2, i)
                })
                .collect();
            want.sort_by(|a, b| a.partial_cmp(b).unwrap());
            want.truncate(10);
            let got = exact_topk_hybrid(&s, &q, 10).unwrap();
            assert_eq!(got.iter().map(|n| n.id as usize).collect::<Vec<_>>(), want.iter().map(|x| x.1).collect::<Vec<_>>());
            assert!(got.iter().all(|n| s.attributes(n.id as usize) == q.attributes.as_slice()));
        }
    }

    #[test]
    fn hybrid_scarce_and_empty() {
        let s = hybrid(50, 6);
        let q = Query::new(vec![0.5; 4], vec![7, 7]);
        assert!(exact_topk_hybrid(&s, &q, 10).unwrap().is_empty());
        let q = Query::new(vec![0.5; 4], s.attributes(0).to_vec());
        let r = exact_topk_hybrid(&s, &q, 100).unwrap();
        let expected = (0..50).filter(|&i| s.attributes(i) == s.attributes(0)).count();
        assert_eq!(r.len(), expected);
    }

    #[test]
    fn hybrid_without_attributes_is_vector() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let s = ObjectSet::from_vectors(3, (0..300).map(|_| rng.gen()).collect()).unwrap();
        let q = Query::vector_only(vec![0.2, 0.4, 0.6]);
        assert_eq!(exact_topk_hybrid(&s, &q, 10).unwrap(), exact_topk_vector(&s, &q, 10).unwrap());
    }

    #[test]
    fn batch_truth_is_thread_independent() {
        let s = hybrid(400, 8);
        let qs: Vec<Query> = (0..30).map(query).collect();
        for flavor in [TruthFlavor::Vector, TruthFlavor::Hybrid] {
            let a = ground_truth(&s, &qs, 10, flavor, &Executor::sequential()).unwrap();
            let b = ground_truth(&s, &qs, 10, flavor, &Executor::new(4)).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn post_filter_exhaustive_limit() {
        let s = hybrid(120, 9);
        let g = complete(120, DistanceMode::Euclidean);
        let q = query(11);
        let p = SearchParams::new(5, 120);
        let r = strategy_b_search(&g, &s, &q, &p, 1000).unwrap();
        assert_eq!(r.search.hits, exact_topk_hybrid(&s, &q, 5).unwrap());
        assert_eq!(r.attribute_checks, 120);
    }

    #[test]
    fn post_filter_all_match_is_vector_search() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        let s = ObjectSet::new(2, (0..200).map(|_| rng.gen()).collect(), vec![0; 100], vec![1]).unwrap();
        let g = complete(100, DistanceMode::Euclidean);
        let q = Query::new(vec![0.3, 0.3], vec![0]);
        let p = SearchParams::new(10, 100);
        let b = strategy_b_search(&g, &s, &q, &p, 1).unwrap();
        let v = two_stage_search(&g, &s, &q, &p).unwrap();
        assert_eq!(b.search.hits, v.hits);
        assert_eq!(b.search.ndc, v.ndc);
    }

    #[test]
    fn filter_during_traversal_only_admits_matches() {
        let s = hybrid(120, 13);
        let g = complete(120, DistanceMode::Euclidean);
        let q = query(14);
        let p = SearchParams::new(5, 20);
        let r = strategy_b_search_variant(&g, &s, &q, &p, 1, StrategyBVariant::FilterDuringTraversal).unwrap();
        assert!(r.search.hits.iter().all(|h| s.attributes(h.id as usize) == q.attributes.as_slice()));
        assert_eq!(r.attribute_checks, r.search.ndc);
    }

    #[test]
    fn baseline_rejects_fusion_graph() {
        let s = hybrid(20, 15);
        let g = complete(20, DistanceMode::Fusion(Default::default()));
        assert!(strategy_b_search(&g, &s, &query(1), &SearchParams::new(2, 4), 2).is_err());
    }
}
