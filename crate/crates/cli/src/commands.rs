use std::collections::BTreeMap;
use std::path::Path;

use molbench_collapse::dynamics::reward_gap;
use molbench_collapse::experiment::{self, ExperimentConfig, Mode};
use molbench_collapse::run_collapse;
use molbench_core::metrics::{write_sweep_csv, MetricReport};
use molbench_core::scoring::SCHEMA_VERSION;
use molbench_datagen::pockets::{read_structures_jsonl, run_pipeline, PocketConfig};
use molbench_datagen::prompts::{audit_shard, generate_shard, GeneratorConfig, RuleSet};
use molbench_datagen::DatagenError;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::args::*;
use crate::error::CliError;
use crate::files;
use crate::provenance::{Provenance, WithProvenance};
use crate::score::{self, Inputs, ScoredLine};

/// Relative tolerance for the ratio check printed by `simulate`.
pub const RATIO_TOLERANCE: f64 = 1e-9;

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Score(a) => cmd_score(&a),
        Command::Metrics(a) => cmd_metrics(&a),
        Command::Report(a) => cmd_report(&a),
        Command::GenPrompts(a) => cmd_gen_prompts(&a),
        Command::Pockets(a) => cmd_pockets(&a),
        Command::Simulate(a) => cmd_simulate(&a),
    }
}

fn sweep_csv(report: &MetricReport) -> Vec<u8> {
    let mut buf = Vec::new();
    write_sweep_csv(report, &mut buf).expect("in-memory csv");
    buf
}

pub fn cmd_score(a: &ScoreArgs) -> Result<(), CliError> {
    let config = a.grid.metric_config()?;
    let inputs = Inputs {
        prompts: &a.prompts,
        completions: &a.completions,
        tables: a.tables.as_deref(),
        norm_spec: a.norm_spec.as_deref(),
        docking: a.docking_scores.as_deref(),
        labels: a.labels.as_deref(),
    };
    let loaded = score::load(&inputs)?;
    let lines = score::score_all(&loaded);
    let mut report = score::metric_report(&lines, &config)?;

    let mut prov = Provenance::new("score", a);
    prov.input("prompts", &a.prompts)?;
    prov.input("completions", &a.completions)?;
    for (name, path) in [("norm_spec", &a.norm_spec), ("docking_scores", &a.docking_scores), ("labels", &a.labels)] {
        if let Some(p) = path {
            prov.input(name, p)?;
        }
    }
    for (k, v) in score::table_provenance(loaded.tables.get()) {
        prov.insert(k, v);
    }
    report.provenance = prov.finish();

    files::create_dir(&a.out)?;
    files::write_jsonl(&a.out.join("rewards.jsonl"), &lines)?;
    files::write_json(&a.out.join("report.json"), &report)?;
    files::write(&a.out.join("sweep.csv"), &sweep_csv(&report))?;
    println!(
        "scored {} completions over {} prompts; mean reward {:.6}",
        lines.len(),
        loaded.prompts.len(),
        report.corpus.mean_reward
    );
    Ok(())
}

pub fn read_rewards(path: &Path) -> Result<Vec<ScoredLine>, CliError> {
    let lines: Vec<ScoredLine> = files::read_jsonl(path)?;
    if let Some(i) = lines.iter().position(|l| l.schema_version != SCHEMA_VERSION) {
        return Err(CliError::schema(path, i + 1, format!("unsupported schema_version {}", lines[i].schema_version)));
    }
    Ok(lines)
}

fn rewards_report(rewards: &Path, grid: &GridArgs, command: &str, settings: &impl Serialize) -> Result<MetricReport, CliError> {
    let config = grid.metric_config()?;
    let lines = read_rewards(rewards)?;
    let mut report = score::metric_report(&lines, &config)?;
    let mut prov = Provenance::new(command, settings);
    prov.input("rewards", rewards)?;
    report.provenance = prov.finish();
    Ok(report)
}

pub fn cmd_metrics(a: &MetricsArgs) -> Result<(), CliError> {
    let report = rewards_report(&a.rewards, &a.grid, "metrics", a)?;
    files::write(&a.out, &sweep_csv(&report))
}

pub fn cmd_report(a: &ReportArgs) -> Result<(), CliError> {
    let report = rewards_report(&a.rewards, &a.grid, "report", a)?;
    files::create_dir(&a.out)?;
    files::write_json(&a.out.join("report.json"), &report)?;
    files::write(&a.out.join("sweep.csv"), &sweep_csv(&report))?;
    print!("{}", summary(&report));
    Ok(())
}

/// Plain-text digest of a report for terminals and logs.
pub fn summary(report: &MetricReport) -> String {
    let c = &report.corpus;
    let mut out = format!(
        "prompts {}  completions {}  valid {}\nmean reward {:.4}  unique {:.4}  internal diversity {:.4}  mean occurrence {:.4}\n",
        c.n_prompts,
        c.validity.total,
        c.validity.valid,
        c.mean_reward,
        c.mean_unique_fraction,
        c.mean_internal_diversity,
        c.mean_occurrence
    );
    for (cat, n) in &c.validity.invalid {
        out.push_str(&format!("invalid {cat:?}: {n}\n"));
    }
    for row in &c.sweep {
        let s = row.s_max.map(|s| format!(" s_max={s}")).unwrap_or_default();
        out.push_str(&format!(
            "{:?} k={} n_r={}{}: {:.4} (std {:.4})\n",
            row.metric,
            row.k,
            row.n_r,
            s,
            row.value,
            row.std.unwrap_or(0.0)
        ));
    }
    for t in &c.prediction {
        out.push_str(&format!("{} {:?}: {:.4} ({}/{} valid)\n", t.task, t.kind, t.value, t.n_valid, t.n_total));
    }
    out.push_str(&format!("provenance {}\n", report.provenance.get("provenance_sha256").map_or("-", |s| s.as_str())));
    out
}

fn datagen_err(e: DatagenError) -> CliError {
    match e {
        DatagenError::Exhausted => CliError::MissingData(e.to_string()),
        _ => CliError::Config(e.to_string()),
    }
}

#[derive(Serialize)]
struct ShardEntry {
    file: String,
    prompts: usize,
    sha256: String,
    counts: BTreeMap<String, usize>,
}

#[derive(Serialize)]
struct ShardManifest {
    schema_version: u32,
    seed: u64,
    config: GeneratorConfig,
    shards: Vec<ShardEntry>,
}

/// Generator stream for shard `i`.
pub fn shard_rng(seed: u64, shard: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shard as u64);
    rng
}

pub fn cmd_gen_prompts(a: &GenPromptsArgs) -> Result<(), CliError> {
    let config = match &a.config {
        Some(p) => files::read_json::<GeneratorConfig>(p)?,
        None => GeneratorConfig::standard(RuleSet::default()),
    };
    config.validate().map_err(datagen_err)?;
    let shards = (0..a.shards)
        .into_par_iter()
        .map(|i| {
            let name = format!("s{i:03}");
            let mut rng = shard_rng(a.seed, i);
            let shard = generate_shard(&config, &name, a.per_shard, &mut rng).map_err(datagen_err)?;
            if let Err((at, veto)) = audit_shard(&config.ruleset, &shard) {
                return Err(CliError::Config(format!("shard {name} prompt {at} fails the rule audit: {veto:?}")));
            }
            Ok((name, shard))
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    files::create_dir(&a.out)?;
    let mut entries = Vec::new();
    for (name, shard) in &shards {
        let file = format!("{name}.jsonl");
        let prompts: Vec<_> = shard.iter().map(|s| &s.prompt).collect();
        files::write_jsonl(&a.out.join(&file), &prompts)?;
        let mut counts = BTreeMap::new();
        for p in shard.iter().flat_map(|s| &s.properties) {
            *counts.entry(p.clone()).or_insert(0) += 1;
        }
        entries.push(ShardEntry { sha256: files::sha256_hex(&files::read(&a.out.join(&file))?), file, prompts: shard.len(), counts });
    }
    let mut prov = Provenance::new("gen-prompts", &(a, &config));
    if let Some(p) = &a.config {
        prov.input("config", p)?;
    }
    let manifest = ShardManifest { schema_version: SCHEMA_VERSION, seed: a.seed, config, shards: entries };
    files::write_json(&a.out.join("manifest.json"), &WithProvenance { body: &manifest, provenance: prov.finish() })?;
    println!("wrote {} shards of {} prompts", a.shards, a.per_shard);
    Ok(())
}

pub fn cmd_pockets(a: &PocketsArgs) -> Result<(), CliError> {
    let config: PocketConfig = files::read_json(&a.config)?;
    config.validate().map_err(datagen_err)?;
    let text = files::read_text(&a.structures)?;
    let records = read_structures_jsonl(&text).map_err(|e| match e {
        DatagenError::Schema { line, message } => CliError::schema(&a.structures, line, message),
        e => CliError::Config(e.to_string()),
    })?;
    let manifest = run_pipeline(&records, &config).map_err(datagen_err)?;
    let mut prov = Provenance::new("pockets", a);
    prov.input("structures", &a.structures)?;
    prov.input("config", &a.config)?;
    files::write_json(&a.out, &WithProvenance { body: &manifest, provenance: prov.finish() })?;
    println!("{} pockets, {} clusters without consensus", manifest.pockets.len(), manifest.ignored.len());
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioCheck {
    pub best: usize,
    pub other: usize,
    pub steps: usize,
    pub measured: f64,
    pub predicted: f64,
    pub max_rel_err: f64,
    pub pass: bool,
}

/// Final probability ratio of the best answer over the runner-up against
/// the closed-form prediction, plus the worst relative error over all steps.
pub fn ratio_check(cfg: &ExperimentConfig) -> Result<RatioCheck, CliError> {
    let collapse_err = |e: molbench_collapse::CollapseError| CliError::Config(e.to_string());
    let (landscape, partition, policy0) = cfg.setup().map_err(collapse_err)?;
    let (best, _) = reward_gap(&policy0, &landscape).map_err(collapse_err)?;
    let other = (0..landscape.len())
        .filter(|&i| i != best && policy0.probs[i] > 0.0)
        .max_by(|&a, &b| landscape.reward[a].total_cmp(&landscape.reward[b]).then(b.cmp(&a)))
        .ok_or_else(|| CliError::Config("ratio check needs two answers with positive mass".into()))?;
    let (last, run) = run_collapse(&policy0, &landscape, &partition, cfg.params.eta, cfg.params.steps).map_err(collapse_err)?;
    let measured = (last.probs[best].ln() - last.probs[other].ln()).exp();
    let predicted = ((policy0.probs[best].ln() - policy0.probs[other].ln())
        + cfg.params.eta * (landscape.reward[best] - landscape.reward[other]) * cfg.params.steps as f64)
        .exp();
    Ok(RatioCheck {
        best,
        other,
        steps: cfg.params.steps,
        measured,
        predicted,
        max_rel_err: run.max_ratio_rel_err,
        pass: run.max_ratio_rel_err <= RATIO_TOLERANCE,
    })
}

#[derive(Serialize)]
struct SimulateOutput<'a> {
    #[serde(flatten)]
    result: &'a experiment::ExperimentResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    ratio_check: Option<RatioCheck>,
}

pub fn cmd_simulate(a: &SimulateArgs) -> Result<(), CliError> {
    let mut cfg: ExperimentConfig = files::read_json(&a.config)?;
    if let Some(seed) = a.seed {
        cfg.seed = seed;
    }
    let result = experiment::run_experiment(&cfg).map_err(|e| CliError::Config(e.to_string()))?;
    let check = match cfg.mode {
        Mode::Exact => Some(ratio_check(&cfg)?),
        _ => None,
    };
    let mut csv = Vec::new();
    experiment::write_trajectory_csv(&result, &mut csv).map_err(|e| CliError::Config(e.to_string()))?;
    let mut prov = Provenance::new("simulate", &(a, &cfg));
    prov.input("config", &a.config)?;
    files::create_dir(&a.out)?;
    files::write(&a.out.join("trajectories.csv"), &csv)?;
    let body = SimulateOutput { result: &result, ratio_check: check.clone() };
    files::write_json(&a.out.join("result.json"), &WithProvenance { body: &body, provenance: prov.finish() })?;
    if let Some(c) = check {
        println!(
            "{} ratio identity: answer {} over {} after {} steps: measured {:.12e} predicted {:.12e} max rel err {:.3e} (tol {:e})",
            if c.pass { "PASS" } else { "FAIL" },
            c.best,
            c.other,
            c.steps,
            c.measured,
            c.predicted,
            c.max_rel_err,
            RATIO_TOLERANCE
        );
    }
    println!("{} runs of {} written", result.runs.len(), result.name);
    Ok(())
}
