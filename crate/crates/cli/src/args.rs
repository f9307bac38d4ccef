use std::path::PathBuf;

use clap::{ArgAction, Args, Parser, Subcommand};
use serde::Serialize;

use crate::config::{DistributionArg, FlavorArg, GraphArg, MethodArg, ModeArg, StreamArg};

#[derive(Debug, Parser)]
#[command(name = "nhq", version, about = "Build, query and benchmark hybrid vector + attribute graph indexes")]
pub struct Cli {
    /// TOML file of defaults; keys are long flag names, e.g. `pool-size = [20, 40]`.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// More log output (-v info, -vv debug).
    #[arg(short, long, global = true, action = ArgAction::Count)]
    pub verbose: u8,

    #[command(flatten)]
    pub common: CommonArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct CommonArgs {
    /// Seed for every random choice (default 0).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for builds and ground truth; 0 = all cores, 1 = sequential.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a graph index and write it as an archive.
    Build(BuildCmd),
    /// Compute exact top-k answers for a query file.
    Gt(GtCmd),
    /// Answer queries against an index and print the hits.
    Search(SearchCmd),
    /// Run a pool-size sweep and write a TSV report.
    Bench(BenchCmd),
    /// Generate a seeded attribute table.
    GenAttrs(GenAttrsCmd),
    /// Generate seeded vectors as fvecs.
    GenVectors(GenVectorsCmd),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Build(_) => "build",
            Command::Gt(_) => "gt",
            Command::Search(_) => "search",
            Command::Bench(_) => "bench",
            Command::GenAttrs(_) => "gen-attrs",
            Command::GenVectors(_) => "gen-vectors",
        }
    }
}

#[derive(Debug, Clone, Default, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct ObjectArgs {
    /// Object vectors (fvecs).
    #[arg(long, value_name = "FILE")]
    pub vectors: Option<PathBuf>,
    /// Object attributes (CSV with a header row).
    #[arg(long, value_name = "FILE")]
    pub attributes: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct QueryArgs {
    /// Query vectors (fvecs).
    #[arg(long, value_name = "FILE")]
    pub queries: Option<PathBuf>,
    /// Query attributes (CSV, same columns as the objects).
    #[arg(long, value_name = "FILE")]
    pub query_attributes: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct GraphArgs {
    /// Graph builder (default npg-kgraph).
    #[arg(long, value_enum)]
    pub graph: Option<GraphArg>,
    /// Distance the graph is built under (default fusion when attributes are given).
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Fixed vector weight of the fusion distance (default 1 with --attribute-weight).
    #[arg(long)]
    pub vector_weight: Option<f64>,
    /// Fixed attribute weight; without it the recommended per-pair weights are used.
    #[arg(long)]
    pub attribute_weight: Option<f64>,
    /// Degree bound (default 20).
    #[arg(long)]
    pub k: Option<usize>,
    /// Candidate pool size (default 60).
    #[arg(long)]
    pub l: Option<usize>,
    /// Distance threshold of the threshold builder.
    #[arg(long)]
    pub theta_prime: Option<f64>,
    /// Candidate-graph quality that ends npg-kgraph refinement (default 0.8).
    #[arg(long)]
    pub quality_threshold: Option<f64>,
}

#[derive(Debug, Clone, Default, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct SearchArgs {
    /// Result-set capacity; a comma list gives a sweep.
    #[arg(long, value_delimiter = ',')]
    pub pool_size: Option<Vec<usize>>,
    /// Stage-1 sampling divisor (default 1, plain greedy routing).
    #[arg(long)]
    pub h: Option<usize>,
    /// Hits per query (default 10).
    #[arg(long)]
    pub k_results: Option<usize>,
}

#[derive(Debug, Clone, Default, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct BuildCmd {
    #[command(flatten)]
    #[serde(flatten)]
    pub objects: ObjectArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub graph: GraphArgs,
    /// Archive to write.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct GtCmd {
    #[command(flatten)]
    #[serde(flatten)]
    pub objects: ObjectArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub queries: QueryArgs,
    /// Vector or hybrid answers (default hybrid when attributes are given).
    #[arg(long, value_enum)]
    pub flavor: Option<FlavorArg>,
    /// Answers per query (default 10).
    #[arg(long)]
    pub k_results: Option<usize>,
    /// Ground-truth file to write (ivecs, short rows padded with -1).
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct SearchCmd {
    /// Index archive.
    #[arg(long, value_name = "FILE")]
    pub index: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub objects: ObjectArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub queries: QueryArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub search: SearchArgs,
    /// Write hits here instead of standard output.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct BenchCmd {
    /// Methods to run, comma separated (default nhq with --index, else oracle).
    #[arg(long, value_enum, value_delimiter = ',')]
    pub method: Option<Vec<MethodArg>>,
    /// Index for the nhq methods.
    #[arg(long, value_name = "FILE")]
    pub index: Option<PathBuf>,
    /// Euclidean index for the strategy-b methods (default --index).
    #[arg(long, value_name = "FILE")]
    pub baseline_index: Option<PathBuf>,
    /// Precomputed ground truth; computed on the fly when absent.
    #[arg(long, value_name = "FILE")]
    pub ground_truth: Option<PathBuf>,
    /// Ground-truth flavor (default hybrid when attributes are given).
    #[arg(long, value_enum)]
    pub flavor: Option<FlavorArg>,
    /// Strategy-b candidates requested per wanted hit (default 10).
    #[arg(long)]
    pub multiplier: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub objects: ObjectArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub queries: QueryArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub search: SearchArgs,
    /// TSV report to write instead of standard output.
    #[arg(long, value_name = "FILE")]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct GenAttrsCmd {
    /// Rows to generate.
    #[arg(long)]
    pub count: Option<usize>,
    /// Values per attribute, comma separated, e.g. 3,3,3.
    #[arg(long, value_delimiter = ',')]
    pub cardinalities: Option<Vec<u32>>,
    /// Object or query stream (default objects).
    #[arg(long, value_enum)]
    pub stream: Option<StreamArg>,
    /// CSV file to write.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct GenVectorsCmd {
    /// Vectors to generate.
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long)]
    pub dim: Option<usize>,
    /// Coordinate distribution (default uniform).
    #[arg(long, value_enum)]
    pub distribution: Option<DistributionArg>,
    /// Cluster count for the clustered distribution (default 10).
    #[arg(long)]
    pub clusters: Option<usize>,
    /// Cluster standard deviation (default 0.05).
    #[arg(long)]
    pub spread: Option<f32>,
    /// Object or query stream (default objects).
    #[arg(long, value_enum)]
    pub stream: Option<StreamArg>,
    /// fvecs file to write.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}
