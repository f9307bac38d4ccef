//! Recall, selectivity and the sweep harness.
//!
//! Recall is `|D ∩ G| / k`. For hybrid ground truth with fewer than `k`
//! matching objects the denominator is `min(k, |G|)`, and queries with no
//! match at all are left out of the mean and counted in
//! [`EvalReport::excluded_queries`].

use std::fmt::Write as _;
use std::io::Write;
use std::time::Instant;

use crate::error::{NhqError, Result};
use crate::graph::CompositeGraph;
use crate::oracle::{exact_topk_hybrid, exact_topk_vector, strategy_b_search_variant, GroundTruth, StrategyBVariant, TruthFlavor};
use crate::search::{two_stage_search, SearchParams};
use crate::types::{DistanceMode, Neighbor, ObjectSet, Query};

/// Column order of the TSV report.
pub const TSV_HEADER: [&str; 14] = [
    "method",
    "n",
    "d",
    "m",
    "k",
    "l",
    "pool_size",
    "h",
    "recall_at_k",
    "mean_ndc",
    "speedup",
    "qps",
    "selectivity",
    "seed",
];

fn overlap(hits: &[Neighbor], truth: &[Neighbor], k: usize) -> usize {
    let g = &truth[..truth.len().min(k)];
    hits.iter().take(k).filter(|h| g.iter().any(|t| t.id == h.id)).count()
}

/// `|D ∩ G| / k` over the first `k` hits and first `k` truth entries.
pub fn recall_at_k(hits: &[Neighbor], truth: &[Neighbor], k: usize) -> f64 {
    if k == 0 {
        return 0.0;
    }
    overlap(hits, truth, k) as f64 / k as f64
}

/// Recall against hybrid truth: denominator `min(k, |G|)`, `None` when `G`
/// is empty.
pub fn hybrid_recall_at_k(hits: &[Neighbor], truth: &[Neighbor], k: usize) -> Option<f64> {
    let denom = k.min(truth.len());
    (denom > 0).then(|| overlap(hits, truth, k) as f64 / denom as f64)
}

/// Fraction of objects whose attributes do not equal the query's.
pub fn selectivity(s: &ObjectSet, q: &Query) -> f64 {
    if s.is_empty() {
        return 0.0;
    }
    let matching = (0..s.len()).filter(|&i| s.attributes(i) == q.attributes.as_slice()).count();
    1.0 - matching as f64 / s.len() as f64
}

/// What answers the queries.
#[derive(Debug, Clone, Copy)]
pub enum Method<'a> {
    /// Two-stage routing on a composite graph under its own distance mode.
    Nhq(&'a CompositeGraph),
    /// Vector graph plus attribute filtering.
    StrategyB {
        graph: &'a CompositeGraph,
        multiplier: usize,
        variant: StrategyBVariant,
    },
    /// Exhaustive scan of the ground-truth flavor.
    Oracle,
}

impl Method<'_> {
    pub fn name(&self) -> String {
        match self {
            Method::Nhq(g) => format!("nhq-{}", g.meta().builder.name()),
            Method::StrategyB { variant, .. } => match variant {
                StrategyBVariant::PostFilter => "strategy-b".into(),
                StrategyBVariant::FilterDuringTraversal => "strategy-b-traversal".into(),
            },
            Method::Oracle => "oracle".into(),
        }
    }

    fn graph(&self) -> Option<&CompositeGraph> {
        match *self {
            Method::Nhq(g) | Method::StrategyB { graph: g, .. } => Some(g),
            Method::Oracle => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QueryRecord {
    /// `None` for hybrid queries without any matching object.
    pub recall: Option<f64>,
    pub ndc: usize,
    pub attribute_checks: usize,
    pub latency_secs: f64,
    pub selectivity: f64,
}

/// One sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub method: String,
    pub n: usize,
    pub d: usize,
    pub m: usize,
    /// Results per query, also the recall cutoff.
    pub k: usize,
    /// Candidate pool size the graph was built with, 0 if none.
    pub l: usize,
    pub pool_size: usize,
    pub h: usize,
    pub seed: u64,
    pub records: Vec<QueryRecord>,
    pub recall_at_k: f64,
    pub mean_ndc: f64,
    pub speedup: f64,
    pub qps: f64,
    pub selectivity: f64,
    pub excluded_queries: usize,
    pub recall_convention: &'static str,
    pub environment: String,
}

struct Aggregates {
    recall: f64,
    mean_ndc: f64,
    speedup: f64,
    qps: f64,
    selectivity: f64,
    excluded: usize,
}

fn aggregate(records: &[QueryRecord], n: usize) -> Aggregates {
    let counted: Vec<f64> = records.iter().filter_map(|r| r.recall).collect();
    let q = records.len().max(1) as f64;
    let mean_ndc = records.iter().map(|r| r.ndc as f64).sum::<f64>() / q;
    let total_time: f64 = records.iter().map(|r| r.latency_secs).sum();
    Aggregates {
        recall: if counted.is_empty() {
            0.0
        } else {
            counted.iter().sum::<f64>() / counted.len() as f64
        },
        mean_ndc,
        speedup: if mean_ndc > 0.0 { n as f64 / mean_ndc } else { 0.0 },
        qps: if total_time > 0.0 {
            records.len() as f64 / total_time
        } else {
            0.0
        },
        selectivity: records.iter().map(|r| r.selectivity).sum::<f64>() / q,
        excluded: records.len() - counted.len(),
    }
}

impl EvalReport {
    /// Checks that the aggregates recompute exactly from the records.
    pub fn verify(&self) -> Result<()> {
        let a = aggregate(&self.records, self.n);
        let same = |x: f64, y: f64| x.to_bits() == y.to_bits();
        if !(same(a.recall, self.recall_at_k)
            && same(a.mean_ndc, self.mean_ndc)
            && same(a.speedup, self.speedup)
            && same(a.qps, self.qps)
            && same(a.selectivity, self.selectivity)
            && a.excluded == self.excluded_queries)
        {
            return Err(NhqError::Invariant(format!(
                "report aggregates for {} do not match its per-query records",
                self.method
            )));
        }
        Ok(())
    }

    pub fn tsv_row(&self) -> String {
        let mut s = String::new();
        let _ = write!(
            s,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{:.6}\t{:.3}\t{:.6}\t{:.3}\t{:.6}\t{}",
            self.method,
            self.n,
            self.d,
            self.m,
            self.k,
            self.l,
            self.pool_size,
            self.h,
            self.recall_at_k,
            self.mean_ndc,
            self.speedup,
            self.qps,
            self.selectivity,
            self.seed
        );
        s
    }
}

/// Writes the header and one row per report, verifying each first.
pub fn write_tsv<W: Write>(mut w: W, reports: &[EvalReport]) -> Result<()> {
    let io = |e| NhqError::io("<report>", e);
    writeln!(w, "{}", TSV_HEADER.join("\t")).map_err(io)?;
    for r in reports {
        r.verify()?;
        writeln!(w, "{}", r.tsv_row()).map_err(io)?;
    }
    Ok(())
}

fn environment() -> String {
    let threads = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    format!(
        "{}-{}, {threads} hardware threads, queries timed on one thread",
        std::env::consts::OS,
        std::env::consts::ARCH
    )
}

fn check_inputs(method: &Method<'_>, s: &ObjectSet, queries: &[Query], truth: &GroundTruth, sweep: &[SearchParams]) -> Result<()> {
    if truth.len() != queries.len() {
        return Err(NhqError::usage(format!(
            "{} queries but ground truth for {}",
            queries.len(),
            truth.len()
        )));
    }
    for q in queries {
        s.check_query(q)?;
    }
    if let Some(g) = method.graph() {
        g.check_aligned(s)?;
    }
    let expected = match method {
        Method::Nhq(g) => Some(match g.mode() {
            DistanceMode::Euclidean => TruthFlavor::Vector,
            DistanceMode::Fusion(_) => TruthFlavor::Hybrid,
        }),
        Method::StrategyB { .. } => Some(TruthFlavor::Hybrid),
        Method::Oracle => None,
    };
    if let Some(f) = expected {
        if f != truth.flavor {
            return Err(NhqError::usage(format!(
                "{} needs {:?} ground truth, got {:?}",
                method.name(),
                f,
                truth.flavor
            )));
        }
    }
    for p in sweep {
        if p.k_results > truth.k {
            return Err(NhqError::usage(format!(
                "k_results {} exceeds ground-truth depth {}",
                p.k_results, truth.k
            )));
        }
        if let Some(g) = method.graph() {
            p.validate(g.degree_bound())?;
        }
    }
    Ok(())
}

/// Runs every query at every sweep point on the calling thread and returns
/// one report per point.
pub fn run_benchmark(
    method: Method<'_>,
    s: &ObjectSet,
    queries: &[Query],
    truth: &GroundTruth,
    sweep: &[SearchParams],
) -> Result<Vec<EvalReport>> {
    check_inputs(&method, s, queries, truth, sweep)?;
    let sel: Vec<f64> = queries.iter().map(|q| selectivity(s, q)).collect();
    let n = s.len();
    let mut out = Vec::with_capacity(sweep.len());
    for p in sweep {
        let k = p.k_results;
        let mut records = Vec::with_capacity(queries.len());
        for (qi, q) in queries.iter().enumerate() {
            let start = Instant::now();
            let (hits, ndc, attribute_checks) = match method {
                Method::Nhq(g) => {
                    let r = two_stage_search(g, s, q, p)?;
                    (r.hits, r.ndc, 0)
                }
                Method::StrategyB {
                    graph,
                    multiplier,
                    variant,
                } => {
                    let r = strategy_b_search_variant(graph, s, q, p, multiplier, variant)?;
                    (r.search.hits, r.search.ndc, r.attribute_checks)
                }
                Method::Oracle => match truth.flavor {
                    TruthFlavor::Vector => (exact_topk_vector(s, q, k)?, n, 0),
                    TruthFlavor::Hybrid => (exact_topk_hybrid(s, q, k)?, n, n),
                },
            };
            let latency_secs = start.elapsed().as_secs_f64();
            let t = &truth.entries[qi];
            let recall = match truth.flavor {
                TruthFlavor::Vector => Some(recall_at_k(&hits, t, k)),
                TruthFlavor::Hybrid => hybrid_recall_at_k(&hits, t, k),
            };
            records.push(QueryRecord {
                recall,
                ndc,
                attribute_checks,
                latency_secs,
                selectivity: sel[qi],
            });
        }
        let a = aggregate(&records, n);
        let (l, h) = match method {
            Method::Oracle => (0, 0),
            _ => (method.graph().map_or(0, |g| g.meta().l as usize), p.h),
        };
        out.push(EvalReport {
            method: method.name(),
            n,
            d: s.dim(),
            m: s.attr_dim(),
            k,
            l,
            pool_size: p.pool_size,
            h,
            seed: p.rng_seed,
            records,
            recall_at_k: a.recall,
            mean_ndc: a.mean_ndc,
            speedup: a.speedup,
            qps: a.qps,
            selectivity: a.selectivity,
            excluded_queries: a.excluded,
            recall_convention: match truth.flavor {
                TruthFlavor::Vector => "|D∩G|/k",
                TruthFlavor::Hybrid => "|D∩G|/min(k,|G|), empty G excluded",
            },
            environment: environment(),
        });
    }
    Ok(out)
}
