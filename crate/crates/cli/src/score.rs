//! Scoring completions and turning scored lines into metric reports.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use molbench_core::chem::{parse_smiles, CanonicalKey};
use molbench_core::descriptors::{DockingTable, NormalizationSpec, ParameterTables};
use molbench_core::metrics::{
    assemble_report, prompt_metrics, MetricConfig, MetricReport, PredictionKind, PredictionRecord, RolloutItem,
    RolloutSet, ValidityHistogram,
};
use molbench_core::scoring::{
    score_answer, ObjectiveKind, Prompt, Reference, RewardReport, Rho, Task, Validity, SCHEMA_VERSION,
};
use molbench_core::scoring::{Evaluators, TaskLabels};
use molbench_core::simfp::{ecfp, DEFAULT_BITS, DEFAULT_RADIUS};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::files;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Completion {
    pub prompt_id: String,
    pub rollout_index: usize,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionTag {
    pub task: String,
    pub kind: PredictionKind,
}

/// One line of rewards.jsonl.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredLine {
    pub schema_version: u32,
    pub prompt_id: String,
    pub rollout_index: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prediction: Option<PredictionTag>,
    #[serde(flatten)]
    pub report: RewardReport,
}

pub struct Inputs<'a> {
    pub prompts: &'a Path,
    pub completions: &'a Path,
    pub tables: Option<&'a Path>,
    pub norm_spec: Option<&'a Path>,
    pub docking: Option<&'a Path>,
    pub labels: Option<&'a Path>,
}

pub struct Loaded {
    pub prompts: Vec<Prompt>,
    pub completions: Vec<Completion>,
    pub tables: ParameterTablesRef,
    pub norm: Vec<NormalizationSpec>,
    pub docking: Option<DockingTable>,
    pub labels: Option<TaskLabels>,
}

pub enum ParameterTablesRef {
    Bundled(&'static ParameterTables),
    Owned(Box<ParameterTables>),
}

impl ParameterTablesRef {
    pub fn get(&self) -> &ParameterTables {
        match self {
            ParameterTablesRef::Bundled(t) => t,
            ParameterTablesRef::Owned(t) => t,
        }
    }
}

/// Reads and validates every input before any scoring starts.
pub fn load(inputs: &Inputs) -> Result<Loaded, CliError> {
    let prompts: Vec<Prompt> = files::read_jsonl(inputs.prompts)?;
    let mut ids = HashMap::new();
    for (i, p) in prompts.iter().enumerate() {
        p.validate().map_err(|e| CliError::schema(inputs.prompts, i + 1, format!("prompt {}: {e}", p.id)))?;
        if p.schema_version != SCHEMA_VERSION {
            return Err(CliError::schema(inputs.prompts, i + 1, format!("unsupported schema_version {}", p.schema_version)));
        }
        if ids.insert(p.id.clone(), i).is_some() {
            return Err(CliError::schema(inputs.prompts, i + 1, format!("duplicate prompt id {}", p.id)));
        }
    }
    let completions: Vec<Completion> = files::read_jsonl(inputs.completions)?;
    for (i, c) in completions.iter().enumerate() {
        if !ids.contains_key(&c.prompt_id) {
            return Err(CliError::schema(inputs.completions, i + 1, format!("unknown prompt_id {}", c.prompt_id)));
        }
    }
    let tables = match inputs.tables {
        Some(dir) => ParameterTablesRef::Owned(Box::new(
            ParameterTables::load_dir(dir).map_err(|e| CliError::Config(format!("{}: {e}", dir.display())))?,
        )),
        None => ParameterTablesRef::Bundled(ParameterTables::bundled()),
    };
    let norm = match inputs.norm_spec {
        Some(p) => files::read_json::<Vec<NormalizationSpec>>(p)?,
        None => Vec::new(),
    };
    let docking = match inputs.docking {
        Some(p) => Some(
            DockingTable::read_jsonl(files::read(p)?.as_slice()).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?,
        ),
        None => None,
    };
    let labels = match inputs.labels {
        Some(p) => Some(
            TaskLabels::read_jsonl(files::read(p)?.as_slice()).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?,
        ),
        None => None,
    };
    for p in &prompts {
        for o in &p.objectives {
            match &o.rho {
                Rho::Docking { target } if docking.is_none() => {
                    return Err(CliError::MissingData(format!("prompt {} needs docking scores for {target} (--docking-scores)", p.id)))
                }
                Rho::Task(task) if labels.is_none() => {
                    return Err(CliError::MissingData(format!("prompt {} needs labels for task {task} (--labels)", p.id)))
                }
                _ => {}
            }
        }
    }
    Ok(Loaded { prompts, completions, tables, norm, docking, labels })
}

fn prediction_tag(prompt: &Prompt) -> Option<PredictionTag> {
    let o = prompt.objectives.first()?;
    let kind = match o.nu {
        ObjectiveKind::Regression => PredictionKind::Regression,
        ObjectiveKind::Classification => PredictionKind::Classification,
        _ => return None,
    };
    Some(PredictionTag { task: o.rho.to_string(), kind })
}

/// Scores completions in parallel; output order is input order.
pub fn score_all(loaded: &Loaded) -> Vec<ScoredLine> {
    let mut eval = Evaluators::new(loaded.tables.get()).with_normalization(&loaded.norm);
    if let Some(d) = &loaded.docking {
        eval = eval.with_docking(d);
    }
    if let Some(l) = &loaded.labels {
        eval = eval.with_labels(l);
    }
    let by_id: HashMap<&str, &Prompt> = loaded.prompts.iter().map(|p| (p.id.as_str(), p)).collect();
    loaded
        .completions
        .par_iter()
        .map(|c| {
            let prompt = by_id[c.prompt_id.as_str()];
            let (_, report) = score_answer(prompt, &c.text, &eval);
            ScoredLine {
                schema_version: SCHEMA_VERSION,
                prompt_id: c.prompt_id.clone(),
                rollout_index: c.rollout_index,
                prediction: (prompt.task == Task::Prediction).then(|| prediction_tag(prompt)).flatten(),
                report,
            }
        })
        .collect()
}

fn rollout_item(line: &ScoredLine) -> RolloutItem {
    match (line.report.validity, &line.report.answer) {
        (Validity::Invalid(c), _) => RolloutItem::invalid(c),
        (Validity::Valid, Some(smiles)) => {
            let fp = parse_smiles(smiles).ok().and_then(|m| ecfp(&m, DEFAULT_RADIUS, DEFAULT_BITS).ok());
            match fp {
                Some(fp) => RolloutItem::molecule(CanonicalKey(smiles.clone()), fp, line.report.aggregate),
                None => RolloutItem { validity: Validity::Valid, reward: line.report.aggregate, key: None, fp: None },
            }
        }
        (Validity::Valid, None) => RolloutItem { validity: Validity::Valid, reward: line.report.aggregate, key: None, fp: None },
    }
}

fn prediction_record(line: &ScoredLine, tag: &PredictionTag) -> PredictionRecord {
    let prediction = match (line.report.validity, &line.report.answer) {
        (Validity::Valid, Some(a)) => match tag.kind {
            PredictionKind::Regression => a.parse::<f64>().ok().map(Reference::Value),
            // the reward already compared labels through the synonym table
            PredictionKind::Classification => match (&line.report.reference, line.report.aggregate == 1.0) {
                (Some(r), true) => Some(r.clone()),
                _ => Some(Reference::Label(a.clone())),
            },
        },
        _ => None,
    };
    PredictionRecord { task: tag.task.clone(), kind: tag.kind, prediction, reference: line.report.reference.clone() }
}

/// Generation prompts become rollout sets (in order of first appearance,
/// rollouts sorted by index); prediction lines become prediction records.
pub fn metric_report(lines: &[ScoredLine], config: &MetricConfig) -> Result<MetricReport, CliError> {
    let mut order: Vec<&str> = Vec::new();
    let mut groups: HashMap<&str, Vec<&ScoredLine>> = HashMap::new();
    let mut predictions = Vec::new();
    let mut validity = ValidityHistogram::default();
    for l in lines {
        validity.add(l.report.validity);
        match &l.prediction {
            Some(tag) => predictions.push(prediction_record(l, tag)),
            None => {
                let g = groups.entry(l.prompt_id.as_str()).or_default();
                if g.is_empty() {
                    order.push(l.prompt_id.as_str());
                }
                g.push(l);
            }
        }
    }
    let sets: Vec<RolloutSet> = order
        .iter()
        .map(|id| {
            let mut g = groups[id].clone();
            g.sort_by_key(|l| l.rollout_index);
            RolloutSet { prompt_id: id.to_string(), items: g.into_iter().map(rollout_item).collect() }
        })
        .collect();
    if let Some(&need) = config.n_rs.iter().max() {
        if let Some(short) = sets.iter().find(|s| s.n_r() < need) {
            return Err(CliError::MissingData(format!(
                "insufficient rollouts: prompt {} has {} but n_r = {need} was requested",
                short.prompt_id,
                short.n_r()
            )));
        }
    }
    let per_prompt = sets.par_iter().map(|rs| prompt_metrics(rs, config)).collect();
    Ok(assemble_report(per_prompt, &sets, &predictions, validity, config))
}

/// Provenance entries for the descriptor tables in use.
pub fn table_provenance(tables: &ParameterTables) -> BTreeMap<String, String> {
    tables.checksums.iter().map(|(k, v)| (format!("table:{k}"), v.clone())).collect()
}
