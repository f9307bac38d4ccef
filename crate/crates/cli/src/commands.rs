use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use anyhow::{Context, Result};
use nhq::graph::graph_quality_with;
use nhq::io::{
    generate_attributes, generate_query_attributes, generate_vectors, read_ground_truth, write_attributes, write_fvecs,
    write_ground_truth, VectorDistribution,
};
use nhq::{
    build, degree_stats, ground_truth, load_index, run_benchmark, save_index, two_stage_search, write_tsv,
    AttributeSchema, BuildParams, BuilderKind, DistanceMode, EvalReport, Executor, FusionWeights, GroundTruth,
    IndexArchive, Method, NhqError, ObjectSet, Query, Sample, SearchParams, StrategyBVariant, TruthFlavor,
};

use crate::config::{required, DistributionArg, FlavorArg, GraphArg, MethodArg, ModeArg, RunConfig, StreamArg};
use crate::data::{builder_name, check_index, common_schema, load_objects, load_queries};

fn usage(msg: impl Into<String>) -> anyhow::Error {
    NhqError::Usage(msg.into()).into()
}

fn seed(cfg: &mut RunConfig) -> u64 {
    *cfg.seed.get_or_insert(0)
}

fn threads(cfg: &mut RunConfig) -> usize {
    *cfg.threads.get_or_insert(0)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn fusion_weights(cfg: &mut RunConfig) -> Result<FusionWeights> {
    match (cfg.vector_weight, cfg.attribute_weight) {
        (None, None) => Ok(FusionWeights::Recommended),
        (_, None) => Err(usage("--vector-weight needs --attribute-weight")),
        (v, Some(a)) => {
            let v = *cfg.vector_weight.get_or_insert(v.unwrap_or(1.0));
            Ok(FusionWeights::fixed(v, a)?)
        }
    }
}

pub fn cmd_build(cfg: &mut RunConfig) -> Result<()> {
    let out = required(&cfg.out, "out")?;
    let vectors = required(&cfg.vectors, "vectors")?;
    let (set, schema) = load_objects(&vectors, cfg.attributes.as_deref(), None)?;
    let kind = match *cfg.graph.get_or_insert(GraphArg::NpgKgraph) {
        GraphArg::NpgKgraph => BuilderKind::NpgKgraph,
        GraphArg::NpgNsw => BuilderKind::NpgNsw,
        GraphArg::Threshold => BuilderKind::Threshold,
    };
    let default_mode = if set.attr_dim() > 0 { ModeArg::Fusion } else { ModeArg::Euclidean };
    let mode = match *cfg.mode.get_or_insert(default_mode) {
        ModeArg::Euclidean => DistanceMode::Euclidean,
        ModeArg::Fusion if set.attr_dim() == 0 => {
            return Err(usage("fusion mode needs --attributes"));
        }
        ModeArg::Fusion => DistanceMode::Fusion(fusion_weights(cfg)?),
    };
    let defaults = BuildParams::default();
    if kind == BuilderKind::Threshold && cfg.theta_prime.is_none() {
        return Err(usage("--theta-prime is required for the threshold graph"));
    }
    let params = BuildParams {
        k: *cfg.k.get_or_insert(defaults.k),
        l: *cfg.l.get_or_insert(defaults.l),
        quality_threshold: *cfg.quality_threshold.get_or_insert(defaults.quality_threshold),
        theta_prime: cfg.theta_prime.unwrap_or(0.0),
        seed: seed(cfg),
        threads: threads(cfg),
        ..defaults
    };

    let start = Instant::now();
    let graph = build(kind, &set, mode, &params)?;
    let secs = start.elapsed().as_secs_f64();
    let stats = degree_stats(&graph);
    let quality = if set.len() > 1 {
        let q = graph_quality_with(&graph, &set, Sample::default_for(set.len()), params.seed, &Executor::new(params.threads))?;
        format!("{:.4} over {} vertices", q.quality, q.sampled_vertices)
    } else {
        "n/a".to_string()
    };
    let edges = graph.edge_count();
    save_index(&out, &IndexArchive::new(graph, &set, schema)?)?;
    println!(
        "built {} over {} objects in {secs:.2}s: {edges} edges, degree min {} mean {:.2} max {}, graph quality {quality}",
        kind.name(),
        set.len(),
        stats.min,
        stats.mean,
        stats.max
    );
    let echo = cfg.echo_beside(&out)?;
    log::info!("wrote {} and {}", out.display(), echo.display());
    Ok(())
}

fn flavor_or_default(cfg: &mut RunConfig) -> TruthFlavor {
    let default = if cfg.attributes.is_some() { FlavorArg::Hybrid } else { FlavorArg::Vector };
    match *cfg.flavor.get_or_insert(default) {
        FlavorArg::Vector => TruthFlavor::Vector,
        FlavorArg::Hybrid => TruthFlavor::Hybrid,
    }
}

pub fn cmd_gt(cfg: &mut RunConfig) -> Result<()> {
    let out = required(&cfg.out, "out")?;
    let vectors = required(&cfg.vectors, "vectors")?;
    let queries = required(&cfg.queries, "queries")?;
    let flavor = flavor_or_default(cfg);
    let attributes = match flavor {
        TruthFlavor::Vector => None,
        TruthFlavor::Hybrid => cfg.attributes.as_deref(),
    };
    let (set, schema) = load_objects(&vectors, attributes, None)?;
    let qs = load_queries(&queries, cfg.query_attributes.as_deref(), &set, &schema)?;
    let k = *cfg.k_results.get_or_insert(10);
    let gt = ground_truth(&set, &qs, k, flavor, &Executor::new(threads(cfg)))?;
    write_ground_truth(&out, &gt)?;
    let short = gt.entries.iter().filter(|e| e.len() < k).count();
    let empty = gt.entries.iter().filter(|e| e.is_empty()).count();
    println!(
        "wrote {} {:?} ground-truth records of depth {k} to {} ({short} short, {empty} empty)",
        gt.len(),
        flavor,
        out.display()
    );
    cfg.echo_beside(&out)?;
    Ok(())
}

/// Sweep points; `sweep_default` picks between a doubling sweep and a single
/// pool of `4 * k_results` when no pool size is configured.
fn search_params(cfg: &mut RunConfig, sweep_default: bool) -> Result<Vec<SearchParams>> {
    let k = *cfg.k_results.get_or_insert(10);
    let h = *cfg.h.get_or_insert(1);
    let rng = seed(cfg);
    let default = if sweep_default { vec![k, 2 * k, 4 * k, 8 * k, 16 * k] } else { vec![4 * k] };
    let pools = cfg.pool_size.get_or_insert(default).clone();
    if pools.is_empty() {
        return Err(usage("--pool-size needs at least one value"));
    }
    Ok(pools
        .into_iter()
        .map(|p| SearchParams::new(k, p).with_h(h).with_rng_seed(rng))
        .collect())
}

/// Object set and queries for an index, read with the archive's attribute
/// dictionary so codes agree with the ones the graph was built on.
fn workload_for(cfg: &RunConfig, schema: Option<&AttributeSchema>) -> Result<(ObjectSet, Vec<Query>)> {
    let vectors = required(&cfg.vectors, "vectors")?;
    let queries = required(&cfg.queries, "queries")?;
    let (set, schema) = load_objects(&vectors, cfg.attributes.as_deref(), schema)?;
    let qs = load_queries(&queries, cfg.query_attributes.as_deref(), &set, &schema)?;
    Ok((set, qs))
}

fn schema_of(a: &IndexArchive) -> Option<&AttributeSchema> {
    (!a.schema.is_empty()).then_some(&a.schema)
}

pub fn cmd_search(cfg: &mut RunConfig) -> Result<()> {
    let index = required(&cfg.index, "index")?;
    let archive = load_index(&index)?;
    if archive.graph.mode().is_fusion() && cfg.attributes.is_none() && archive.attr_dim > 0 {
        return Err(usage("--attributes is required for an index built in fusion mode"));
    }
    let (set, qs) = workload_for(cfg, schema_of(&archive))?;
    check_index(&archive, &set)?;
    let sweep = search_params(cfg, false)?;
    if sweep.len() > 1 {
        log::warn!("search uses only the first --pool-size value");
    }
    let p = sweep[0];

    let mut w: Box<dyn Write> = match &cfg.out {
        Some(path) => Box::new(create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    let io_err = |e| anyhow::Error::new(e).context("writing search results");
    writeln!(w, "query\tndc\thops\thits").map_err(io_err)?;
    for (i, q) in qs.iter().enumerate() {
        let r = two_stage_search(&archive.graph, &set, q, &p)?;
        let hits: Vec<String> = r.hits.iter().map(|h| format!("{}:{:.6}", h.id, h.distance)).collect();
        writeln!(w, "{i}\t{}\t{}\t{}", r.ndc, r.hops, hits.join(" ")).map_err(io_err)?;
    }
    w.flush().map_err(io_err)?;
    drop(w);
    match &cfg.out {
        Some(out) => {
            cfg.echo_beside(out)?;
        }
        None => log::info!("run config:\n{}", cfg.to_toml()),
    }
    Ok(())
}

pub fn cmd_bench(cfg: &mut RunConfig) -> Result<()> {
    let index = cfg.index.as_deref().map(load_index).transpose()?;
    let baseline = cfg.baseline_index.as_deref().map(load_index).transpose()?;
    let default_methods = if index.is_some() { vec![MethodArg::Nhq] } else { vec![MethodArg::Oracle] };
    let methods = cfg.method.get_or_insert(default_methods).clone();
    let multiplier = *cfg.multiplier.get_or_insert(10);

    let schema = common_schema(index.iter().chain(&baseline))?;
    let (set, qs) = workload_for(cfg, schema.as_ref())?;
    for a in index.iter().chain(&baseline) {
        check_index(a, &set)?;
    }
    let flavor = flavor_or_default(cfg);
    let sweep = search_params(cfg, true)?;
    let k = sweep[0].k_results;

    let truth = match &cfg.ground_truth {
        Some(path) => {
            let gt = read_ground_truth(path, flavor, &set, &qs)?;
            if gt.k < k {
                return Err(usage(format!("{} holds depth {} but --k-results is {k}", path.display(), gt.k)));
            }
            trim(gt, k)
        }
        None => ground_truth(&set, &qs, k, flavor, &Executor::new(threads(cfg)))?,
    };

    let mut reports: Vec<EvalReport> = Vec::new();
    for m in methods {
        let nhq_graph = || {
            index
                .as_ref()
                .map(|a| &a.graph)
                .ok_or_else(|| usage(format!("method {m:?} needs --index")))
        };
        let method = match m {
            MethodArg::Nhq => Method::Nhq(nhq_graph()?),
            MethodArg::NhqNpgKgraph | MethodArg::NhqNpgNsw => {
                let g = nhq_graph()?;
                let want = if m == MethodArg::NhqNpgKgraph { "npg-kgraph" } else { "npg-nsw" };
                if builder_name(g) != want {
                    return Err(usage(format!("--index holds a {} graph, not {want}", builder_name(g))));
                }
                Method::Nhq(g)
            }
            MethodArg::StrategyB | MethodArg::StrategyBTraversal => {
                let graph = baseline
                    .as_ref()
                    .or(index.as_ref())
                    .map(|a| &a.graph)
                    .ok_or_else(|| usage("strategy-b needs --baseline-index or --index"))?;
                let variant = if m == MethodArg::StrategyB {
                    StrategyBVariant::PostFilter
                } else {
                    StrategyBVariant::FilterDuringTraversal
                };
                Method::StrategyB {
                    graph,
                    multiplier,
                    variant,
                }
            }
            MethodArg::Oracle => Method::Oracle,
        };
        let points = if matches!(method, Method::Oracle) { &sweep[..1] } else { &sweep[..] };
        let rows = run_benchmark(method, &set, &qs, &truth, points)?;
        warn_if_not_monotone(&rows);
        reports.extend(rows);
    }

    match &cfg.report {
        Some(path) => {
            let mut w = create(path)?;
            write_tsv(&mut w, &reports)?;
            w.flush().with_context(|| format!("writing {}", path.display()))?;
            cfg.echo_beside(path)?;
            for r in &reports {
                println!(
                    "{}\tpool {}\trecall {:.4}\tmean ndc {:.1}\tspeedup {:.2}",
                    r.method, r.pool_size, r.recall_at_k, r.mean_ndc, r.speedup
                );
            }
        }
        None => write_tsv(io::stdout().lock(), &reports)?,
    }
    Ok(())
}

/// Keeps the first `k` answers of each record.
fn trim(mut gt: GroundTruth, k: usize) -> GroundTruth {
    for e in &mut gt.entries {
        e.truncate(k);
    }
    gt.k = k;
    gt
}

fn warn_if_not_monotone(rows: &[EvalReport]) {
    for w in rows.windows(2) {
        if w[1].pool_size > w[0].pool_size && w[1].recall_at_k < w[0].recall_at_k {
            log::warn!(
                "{}: recall fell from {:.4} to {:.4} as the pool grew from {} to {}",
                w[0].method,
                w[0].recall_at_k,
                w[1].recall_at_k,
                w[0].pool_size,
                w[1].pool_size
            );
        }
    }
}

fn stream_index(cfg: &mut RunConfig) -> u64 {
    match *cfg.stream.get_or_insert(StreamArg::Objects) {
        StreamArg::Objects => 0,
        StreamArg::Queries => 1,
    }
}

pub fn cmd_gen_attrs(cfg: &mut RunConfig) -> Result<()> {
    let out = required(&cfg.out, "out")?;
    let count = required(&cfg.count, "count")?;
    let cards = required(&cfg.cardinalities, "cardinalities")?;
    let seed = seed(cfg);
    let rows = if stream_index(cfg) == 0 {
        generate_attributes(count, cards.len(), &cards, seed)?
    } else {
        generate_query_attributes(count, &cards, seed)?
    };
    write_attributes(&out, &rows, &AttributeSchema::synthetic(&cards))?;
    println!("wrote {count} attribute rows to {}", out.display());
    cfg.echo_beside(&out)?;
    Ok(())
}

pub fn cmd_gen_vectors(cfg: &mut RunConfig) -> Result<()> {
    let out = required(&cfg.out, "out")?;
    let count = required(&cfg.count, "count")?;
    let dim = required(&cfg.dim, "dim")?;
    let dist = match *cfg.distribution.get_or_insert(DistributionArg::Uniform) {
        DistributionArg::Uniform => VectorDistribution::Uniform,
        DistributionArg::Gaussian => VectorDistribution::Gaussian,
        DistributionArg::Clustered => VectorDistribution::Clustered {
            clusters: *cfg.clusters.get_or_insert(10),
            spread: *cfg.spread.get_or_insert(0.05),
        },
    };
    let seed = seed(cfg);
    let index = stream_index(cfg);
    let flat = generate_vectors(count, dim, dist, seed, index)?;
    let rows: Vec<Vec<f32>> = flat.chunks(dim).map(<[f32]>::to_vec).collect();
    write_fvecs(&out, &rows)?;
    println!("wrote {count} vectors of dimension {dim} to {}", out.display());
    cfg.echo_beside(&out)?;
    Ok(())
}
