//! Hybrid queries over composite proximity graphs.
//!
//! Objects carry a feature vector and a tuple of categorical attributes. A
//! single proximity graph is built under a fusion distance that mixes both,
//! and a query is answered by one routing pass over that graph, with no
//! separate attribute index and no post-filtering.
//!
//! ```
//! use nhq::{build_npg_kgraph, hybrid_query, BuildParams, DistanceMode, FusionWeights, ObjectSet, Query, SearchParams};
//!
//! let vectors: Vec<f32> = (0..200).map(|i| (i as f32 * 0.37).sin()).collect();
//! let attrs: Vec<u32> = (0..100).map(|i| i % 3).collect();
//! let set = ObjectSet::new(2, vectors, attrs, vec![3]).unwrap();
//! let mode = DistanceMode::Fusion(FusionWeights::Recommended);
//! let graph = build_npg_kgraph(&set, &BuildParams::new(8, 16), mode).unwrap();
//! let q = Query::new(vec![0.1, 0.2], vec![1]);
//! let res = hybrid_query(&graph, &set, &q, &SearchParams::new(5, 20)).unwrap();
//! assert_eq!(res.hits.len(), 5);
//! ```

pub mod builders;
pub mod distance;
pub mod edge_select;
pub mod error;
pub mod exec;
pub mod eval;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod search;
pub mod types;

pub use builders::{build, build_npg_kgraph, build_npg_kgraph_detailed, build_npg_nsw, build_threshold_graph, BuildParams};
pub use distance::{attribute_distance, euclidean, fusion_distance};
pub use edge_select::{in_landing_zone, select_neighbors, CandidatePool};
pub use error::{ErrorKind, NhqError, Result};
pub use exec::Executor;
pub use eval::{hybrid_recall_at_k, recall_at_k, run_benchmark, selectivity, write_tsv, EvalReport, Method, QueryRecord};
pub use graph::{degree_stats, graph_quality, BuildMeta, BuilderKind, CompositeGraph, GraphQualityReport, Sample};
pub use io::{load_index, save_index, AttributeSchema, IndexArchive};
pub use oracle::{
    exact_topk, exact_topk_hybrid, exact_topk_vector, ground_truth, strategy_b_search, strategy_b_search_variant, GroundTruth,
    StrategyBResult, StrategyBVariant, TruthFlavor,
};
pub use search::{greedy_search, greedy_search_from, greedy_search_with, hybrid_query, two_stage_search_with, two_stage_search, NeighborSource, SearchParams, SearchResult};
pub use types::{DistanceMode, FusionWeights, Neighbor, NodeId, ObjectSet, Query};
