//! Finite-support simulations of reward-driven policy updates: exact
//! exponentiated updates and their collapse onto the best answer, a
//! cluster-coverage regularized step, a group-count exploration bonus,
//! coverage bounds, and the clipped group-relative surrogate loss.

pub mod coverage;
pub mod dynamics;
pub mod experiment;
pub mod landscape;
pub mod loss;

pub use coverage::{coverage_bound, expected_coverage, mc_coverage, CoverageEstimate};
pub use dynamics::{
    centered_advantage, coverage_objective, coverage_step, exp_update, group_bonus, run_collapse, simulate_grpo_group,
    CollapseRun, CoverageStep, GroupSample, StepRecord, Trajectory, UpdateParams,
};
pub use landscape::{cluster_mass, greedy_partition, FinitePolicy, Partition, RewardLandscape};
pub use loss::{grpo_clip_loss, normalize_advantages, NormalizedAdvantages};

#[derive(Debug, thiserror::Error)]
pub enum CollapseError {
    #[error("length mismatch: expected {expected}, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("not a probability vector: {0}")]
    NotAProbability(String),
    #[error("invalid landscape: {0}")]
    Landscape(String),
    #[error("invalid partition: {0}")]
    Partition(String),
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("no unique best answer (reward gap is zero)")]
    DegenerateGap,
    #[error("coverage step did not converge (residual {residual:e})")]
    NonConvergence { residual: f64 },
    #[error("shape mismatch: {tokens} tokens, {ratios} ratios, {advantages} advantages")]
    ShapeMismatch { tokens: usize, ratios: usize, advantages: usize },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
