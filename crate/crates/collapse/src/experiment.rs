//! JSON experiment configs, a parallel runner and trajectory CSV export.

use std::io::Write;

use molbench_core::chem::parse_smiles;
use molbench_core::simfp::{ecfp, tanimoto, DEFAULT_BITS, DEFAULT_RADIUS};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{run_collapse, simulate_coverage, simulate_grpo_group, Trajectory, UpdateParams};
use crate::landscape::{greedy_partition, FinitePolicy, Partition, RewardLandscape};
use crate::CollapseError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LandscapeSpec {
    Explicit { reward: Vec<f64>, sim: Vec<Vec<f64>> },
    Blocks { rewards: Vec<Vec<f64>>, within: f64, between: f64 },
    /// Tanimoto similarity of ECFP fingerprints.
    Smiles { smiles: Vec<String>, reward: Vec<f64> },
}

impl LandscapeSpec {
    pub fn build(&self) -> Result<RewardLandscape, CollapseError> {
        match self {
            LandscapeSpec::Explicit { reward, sim } => RewardLandscape::new(reward.clone(), sim.clone()),
            LandscapeSpec::Blocks { rewards, within, between } => RewardLandscape::blocks(rewards, *within, *between),
            LandscapeSpec::Smiles { smiles, reward } => {
                if smiles.len() != reward.len() {
                    return Err(CollapseError::Shape { expected: smiles.len(), got: reward.len() });
                }
                let fps = smiles
                    .iter()
                    .map(|s| {
                        let mol = parse_smiles(s).map_err(|e| CollapseError::Landscape(format!("{s}: {e}")))?;
                        ecfp(&mol, DEFAULT_RADIUS, DEFAULT_BITS).map_err(|e| CollapseError::Landscape(format!("{s}: {e}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let sim = fps
                    .iter()
                    .enumerate()
                    .map(|(i, a)| fps.iter().enumerate().map(|(j, b)| if i == j { 1.0 } else { tanimoto(a, b).unwrap_or(0.0) }).collect())
                    .collect();
                RewardLandscape::new(reward.clone(), sim)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PartitionSpec {
    Greedy { s_max: f64 },
    Explicit { clusters: Vec<Vec<usize>> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Mode {
    /// Exact exponentiated updates with the ratio-identity check.
    Exact,
    /// Exact coverage-regularized steps.
    Coverage,
    /// Sampled groups of `group_size` with empirical advantages.
    Grpo { group_size: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    pub name: String,
    pub landscape: LandscapeSpec,
    pub partition: PartitionSpec,
    /// Initial weights; uniform when absent.
    #[serde(default)]
    pub init: Option<Vec<f64>>,
    pub params: UpdateParams,
    pub mode: Mode,
    pub seed: u64,
    #[serde(default = "one")]
    pub runs: usize,
}

fn schema_version() -> u32 {
    SCHEMA_VERSION
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub run: usize,
    pub trajectory: Trajectory,
    pub max_ratio_rel_err: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub schema_version: u32,
    pub name: String,
    pub partition: Partition,
    pub runs: Vec<RunResult>,
}

impl ExperimentConfig {
    pub fn setup(&self) -> Result<(RewardLandscape, Partition, FinitePolicy), CollapseError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CollapseError::Params(format!("unsupported schema_version {}", self.schema_version)));
        }
        self.params.validate()?;
        let landscape = self.landscape.build()?;
        let partition = match &self.partition {
            PartitionSpec::Greedy { s_max } => greedy_partition(&landscape, *s_max),
            PartitionSpec::Explicit { clusters } => {
                let representatives = clusters
                    .iter()
                    .map(|c| {
                        c.iter().copied().max_by(|&a, &b| landscape.reward[a].total_cmp(&landscape.reward[b]).then(b.cmp(&a)))
                    })
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| CollapseError::Partition("empty cluster".into()))?;
                Partition { clusters: clusters.clone(), representatives }
            }
        };
        partition.assignment(landscape.len())?;
        let policy = match &self.init {
            Some(w) if w.len() != landscape.len() => return Err(CollapseError::Shape { expected: landscape.len(), got: w.len() }),
            Some(w) => FinitePolicy::from_weights(w)?,
            None => FinitePolicy::uniform(landscape.len()),
        };
        Ok((landscape, partition, policy))
    }
}

/// Runs are independent; run `i` draws from stream `i` of the seeded generator.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult, CollapseError> {
    let (landscape, partition, policy) = cfg.setup()?;
    let runs = (0..cfg.runs)
        .into_par_iter()
        .map(|run| -> Result<RunResult, CollapseError> {
            match &cfg.mode {
                Mode::Exact => {
                    let (_, out) = run_collapse(&policy, &landscape, &partition, cfg.params.eta, cfg.params.steps)?;
                    Ok(RunResult { run, trajectory: out.trajectory, max_ratio_rel_err: Some(out.max_ratio_rel_err) })
                }
                Mode::Coverage => {
                    let (_, trajectory) = simulate_coverage(&policy, &landscape, &partition, &cfg.params)?;
                    Ok(RunResult { run, trajectory, max_ratio_rel_err: None })
                }
                Mode::Grpo { group_size } => {
                    let mut rng = run_rng(cfg.seed, run);
                    let (_, trajectory) = simulate_grpo_group(&policy, &landscape, &partition, &cfg.params, *group_size, &mut rng)?;
                    Ok(RunResult { run, trajectory, max_ratio_rel_err: None })
                }
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ExperimentResult { schema_version: SCHEMA_VERSION, name: cfg.name.clone(), partition, runs })
}

pub fn run_rng(seed: u64, run: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(run as u64);
    rng
}

/// Columns: run, step, entropy, top_ratio, ratio_rel_err, mass_0..mass_{m-1}.
pub fn write_trajectory_csv<W: Write>(result: &ExperimentResult, out: W) -> Result<(), CollapseError> {
    let mut w = csv::Writer::from_writer(out);
    let m = result.partition.len();
    let mut header: Vec<String> = ["run", "step", "entropy", "top_ratio", "ratio_rel_err"].map(String::from).to_vec();
    header.extend((0..m).map(|c| format!("mass_{c}")));
    w.write_record(&header)?;
    for run in &result.runs {
        for s in &run.trajectory.steps {
            let mut row = vec![
                run.run.to_string(),
                s.step.to_string(),
                s.entropy.to_string(),
                s.top_ratio.to_string(),
                s.ratio_rel_err.map(|e| e.to_string()).unwrap_or_default(),
            ];
            row.extend(s.cluster_masses.iter().map(|p| p.to_string()));
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(())
}
