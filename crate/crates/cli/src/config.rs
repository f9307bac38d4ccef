//! Run configuration: one flat table whose keys are the long flag names.
//!
//! A config file supplies defaults and flags override it key by key. Every
//! command echoes the merged, fully resolved table next to its output so the
//! run can be repeated with `--config`.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::ValueEnum;
use nhq::NhqError;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphArg {
    NpgKgraph,
    NpgNsw,
    Threshold,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeArg {
    Euclidean,
    Fusion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FlavorArg {
    Vector,
    Hybrid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodArg {
    /// Two-stage routing on `--index`, whatever builder made it.
    Nhq,
    NhqNpgKgraph,
    NhqNpgNsw,
    /// Vector search on a euclidean index, then attribute filtering.
    StrategyB,
    /// Attribute check before a candidate may enter the result set.
    StrategyBTraversal,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistributionArg {
    Uniform,
    Gaussian,
    Clustered,
}

/// Which generator stream to draw from, so objects and queries differ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StreamArg {
    Objects,
    Queries,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct RunConfig {
    /// Subcommand that produced an echoed config; ignored on input.
    pub command: Option<String>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,

    pub vectors: Option<PathBuf>,
    pub attributes: Option<PathBuf>,
    pub queries: Option<PathBuf>,
    pub query_attributes: Option<PathBuf>,
    pub index: Option<PathBuf>,
    pub baseline_index: Option<PathBuf>,
    pub ground_truth: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub report: Option<PathBuf>,

    pub graph: Option<GraphArg>,
    pub mode: Option<ModeArg>,
    pub vector_weight: Option<f64>,
    pub attribute_weight: Option<f64>,
    pub k: Option<usize>,
    pub l: Option<usize>,
    pub theta_prime: Option<f64>,
    pub quality_threshold: Option<f64>,

    pub pool_size: Option<Vec<usize>>,
    pub h: Option<usize>,
    pub k_results: Option<usize>,
    pub flavor: Option<FlavorArg>,
    pub method: Option<Vec<MethodArg>>,
    pub multiplier: Option<usize>,

    pub count: Option<usize>,
    pub dim: Option<usize>,
    pub cardinalities: Option<Vec<u32>>,
    pub distribution: Option<DistributionArg>,
    pub clusters: Option<usize>,
    pub spread: Option<f32>,
    pub stream: Option<StreamArg>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text)
            .map_err(|e| NhqError::Usage(format!("config {}: {e}", path.display())).into())
    }

    /// Overlays every key that `flags` sets.
    pub fn overlay<T: Serialize>(self, flags: &T) -> Result<Self> {
        let mut table = toml::Table::try_from(&self)?;
        table.extend(toml::Table::try_from(flags)?);
        table
            .try_into()
            .map_err(|e| NhqError::Usage(format!("conflicting settings: {e}")).into())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run config is always representable as TOML")
    }

    /// Writes the config to `<output>.run.toml` and returns that path.
    pub fn echo_beside(&self, output: &Path) -> Result<PathBuf> {
        let mut name = output.as_os_str().to_owned();
        name.push(".run.toml");
        let path = PathBuf::from(name);
        fs::write(&path, self.to_toml()).with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }
}

/// The value of a required setting, or a usage error naming its flag.
pub fn required<T: Clone>(value: &Option<T>, flag: &str) -> Result<T> {
    value
        .clone()
        .ok_or_else(|| NhqError::Usage(format!("--{flag} is required (on the command line or in --config)")).into())
}
