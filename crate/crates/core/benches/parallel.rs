//! Sequential vs all-core execution of the data-parallel jobs.
//!
//! `threads = 1` takes the plain iterator path; `threads = 0` uses a rayon
//! pool sized to the machine. Building with `--no-default-features` removes
//! rayon entirely and both rows then measure the sequential path.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nhq::graph::graph_quality_with;
use nhq::io::{generate_vectors, VectorDistribution};
use nhq::{build_npg_kgraph, ground_truth, BuildParams, DistanceMode, Executor, ObjectSet, Query, Sample, TruthFlavor};

const N: usize = 4000;
const D: usize = 16;

fn workload() -> (ObjectSet, Vec<Query>) {
    let v = generate_vectors(N, D, VectorDistribution::Uniform, 1, 0).unwrap();
    let q = generate_vectors(200, D, VectorDistribution::Uniform, 1, 1).unwrap();
    (
        ObjectSet::from_vectors(D, v).unwrap(),
        q.chunks(D).map(|c| Query::vector_only(c.to_vec())).collect(),
    )
}

fn bench(c: &mut Criterion) {
    let (set, queries) = workload();
    let params = BuildParams::new(20, 40).with_seed(3);
    let graph = build_npg_kgraph(&set, &params, DistanceMode::Euclidean).unwrap();

    let mut group = c.benchmark_group("parallel");
    group.sample_size(10);
    for threads in [1usize, 0] {
        let label = if threads == 1 { "sequential" } else { "all-cores" };
        group.bench_with_input(BenchmarkId::new("kgraph-build", label), &threads, |b, &t| {
            let p = params.clone().with_threads(t);
            b.iter(|| build_npg_kgraph(&set, &p, DistanceMode::Euclidean).unwrap())
        });
        let exec = Executor::new(threads);
        group.bench_with_input(BenchmarkId::new("ground-truth", label), &exec, |b, e| {
            b.iter(|| ground_truth(&set, &queries, 10, TruthFlavor::Vector, e).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("graph-quality", label), &exec, |b, e| {
            b.iter(|| graph_quality_with(&graph, &set, Sample::Count(500), 7, e).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
