use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use molbench_core::metrics::MetricConfig;
use serde::Serialize;

use crate::error::CliError;

/// Scoring, metrics, dataset generation and policy-dynamics experiments for
/// molecular LLM benchmarks.
///
/// Exit codes: 0 success, 1 I/O failure, 2 schema or config error,
/// 3 missing data.
#[derive(Debug, Parser)]
#[command(name = "molbench", version)]
pub struct Cli {
    /// Worker threads (default: all cores). Never changes any output byte.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score completions against prompts; writes rewards.jsonl, report.json and sweep.csv.
    Score(ScoreArgs),
    /// Recompute the metric sweep CSV from rewards.jsonl.
    Metrics(MetricsArgs),
    /// Recompute report.json and sweep.csv from rewards.jsonl and print a summary.
    Report(ReportArgs),
    /// Sample prompt shards under a rule set.
    GenPrompts(GenPromptsArgs),
    /// Cluster ligand-contact pockets and write a pocket manifest.
    Pockets(PocketsArgs),
    /// Run a finite-support policy-dynamics experiment.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GridArgs {
    /// Comma-separated k values.
    #[arg(long = "k", value_delimiter = ',', default_value = "1,10")]
    pub ks: Vec<usize>,
    /// Comma-separated rollout counts; all rollouts when omitted.
    #[arg(long = "n-r", value_delimiter = ',')]
    pub n_rs: Vec<usize>,
    /// Comma-separated similarity thresholds for the diversity-aware sweep.
    #[arg(long = "s-max-grid", value_delimiter = ',', default_value = "0.7")]
    pub s_max: Vec<f64>,
}

impl GridArgs {
    pub fn metric_config(&self) -> Result<MetricConfig, CliError> {
        if self.ks.is_empty() || self.ks.contains(&0) {
            return Err(CliError::Config("--k needs positive values".into()));
        }
        if self.n_rs.contains(&0) {
            return Err(CliError::Config("--n-r needs positive values".into()));
        }
        if self.s_max.is_empty() || self.s_max.iter().any(|s| !(*s > 0.0 && *s <= 1.0)) {
            return Err(CliError::Config("--s-max-grid values must lie in (0, 1]".into()));
        }
        Ok(MetricConfig { ks: self.ks.clone(), n_rs: self.n_rs.clone(), s_max: self.s_max.clone() })
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ScoreArgs {
    /// Prompt JSONL.
    #[arg(long)]
    #[serde(skip)]
    pub prompts: PathBuf,
    /// Completion JSONL: {prompt_id, rollout_index, text}.
    #[arg(long)]
    #[serde(skip)]
    pub completions: PathBuf,
    /// Directory of descriptor parameter tables (bundled tables when omitted).
    #[arg(long)]
    #[serde(skip)]
    pub tables: Option<PathBuf>,
    /// JSON array of normalization maps overriding the table defaults.
    #[arg(long)]
    #[serde(skip)]
    pub norm_spec: Option<PathBuf>,
    /// Docking score JSONL: {target, smiles, score}.
    #[arg(long)]
    #[serde(skip)]
    pub docking_scores: Option<PathBuf>,
    /// Prediction-task label JSONL: {task, smiles, value}.
    #[arg(long)]
    #[serde(skip)]
    pub labels: Option<PathBuf>,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Output directory.
    #[arg(long)]
    #[serde(skip)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MetricsArgs {
    /// rewards.jsonl written by `score`.
    #[arg(long)]
    #[serde(skip)]
    pub rewards: PathBuf,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Output CSV file.
    #[arg(long)]
    #[serde(skip)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ReportArgs {
    /// rewards.jsonl written by `score`.
    #[arg(long)]
    #[serde(skip)]
    pub rewards: PathBuf,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Output directory.
    #[arg(long)]
    #[serde(skip)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GenPromptsArgs {
    /// Generator config JSON (standard catalog and caps of 4 when omitted).
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub shards: usize,
    #[arg(long)]
    pub per_shard: usize,
    /// Output directory.
    #[arg(long)]
    #[serde(skip)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PocketsArgs {
    /// Structure JSONL.
    #[arg(long)]
    #[serde(skip)]
    pub structures: PathBuf,
    /// Pocket config JSON: {k, iou_cutoff, consensus}.
    #[arg(long)]
    #[serde(skip)]
    pub config: PathBuf,
    /// Output manifest JSON file.
    #[arg(long)]
    #[serde(skip)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SimulateArgs {
    /// Experiment config JSON.
    #[arg(long)]
    #[serde(skip)]
    pub config: PathBuf,
    /// Overrides the seed in the config.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    #[serde(skip)]
    pub out: PathBuf,
}
