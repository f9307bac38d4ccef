//! Grid search over the threshold of the exhaustive threshold graph.
//!
//! Candidates are quantiles of the pairwise fusion distance on a seeded
//! workload. For each one the graph is built, every query is routed with a
//! fixed pool, and recall against hybrid ground truth is reported along with
//! mean degree and distance evaluations.
//!
//! ```text
//! cargo run --release --example theta_grid -- [n] [seed]
//! ```

use nhq::distance::PairMetric;
use nhq::io::{generate_attributes, generate_query_attributes, generate_vectors, VectorDistribution};
use nhq::{
    build_threshold_graph, degree_stats, ground_truth, hybrid_query, hybrid_recall_at_k, DistanceMode, Executor,
    FusionWeights, NodeId, ObjectSet, Query, SearchParams, TruthFlavor,
};

const D: usize = 8;
const CARDS: [u32; 2] = [3, 3];
const QUANTILES: [f64; 6] = [0.005, 0.01, 0.02, 0.05, 0.1, 0.2];

fn main() -> nhq::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(800, |a| a.parse().expect("n must be an integer"));
    let seed: u64 = args.next().map_or(1, |a| a.parse().expect("seed must be an integer"));

    let v = generate_vectors(n, D, VectorDistribution::Uniform, seed, 0)?;
    let a = generate_attributes(n, CARDS.len(), &CARDS, seed)?.concat();
    let set = ObjectSet::new(D, v, a, CARDS.to_vec())?;
    let qv = generate_vectors(50, D, VectorDistribution::Uniform, seed, 1)?;
    let qa = generate_query_attributes(50, &CARDS, seed)?.concat();
    let queries = Query::batch(D, &qv, CARDS.len(), &qa)?;
    let truth = ground_truth(&set, &queries, 10, TruthFlavor::Hybrid, &Executor::new(0))?;

    let mode = DistanceMode::Fusion(FusionWeights::Recommended);
    let metric = PairMetric::new(&set, mode);
    let mut pairwise: Vec<f64> = (0..n as NodeId)
        .flat_map(|i| (i + 1..n as NodeId).map(move |j| (i, j)))
        .map(|(i, j)| metric.between(i, j))
        .collect();
    pairwise.sort_unstable_by(f64::total_cmp);

    println!("quantile\ttheta\tmean_degree\trecall@10\tmean_ndc");
    let params = SearchParams::new(10, 40).with_rng_seed(seed);
    for q in QUANTILES {
        let theta = pairwise[((pairwise.len() - 1) as f64 * q) as usize];
        let g = build_threshold_graph(&set, theta, mode)?;
        let (mut recall, mut counted, mut ndc) = (0.0, 0, 0);
        for (query, t) in queries.iter().zip(&truth.entries) {
            let r = hybrid_query(&g, &set, query, &params)?;
            ndc += r.ndc;
            if let Some(x) = hybrid_recall_at_k(&r.hits, t, 10) {
                recall += x;
                counted += 1;
            }
        }
        println!(
            "{q}\t{theta:.4}\t{:.1}\t{:.3}\t{:.1}",
            degree_stats(&g).mean,
            recall / counted.max(1) as f64,
            ndc as f64 / queries.len() as f64
        );
    }
    Ok(())
}
