use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{
    accuracy, diversity_top_k, internal_diversity, normalized_spearman, occurrences, top_k_score, unique_fraction,
    RolloutSet, ValidityHistogram,
};
use crate::scoring::{Reference, SCHEMA_VERSION};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricConfig {
    pub ks: Vec<usize>,
    /// Rollout counts to evaluate; each set is cut to its first `n_r` items.
    /// Empty means all rollouts.
    #[serde(default)]
    pub n_rs: Vec<usize>,
    pub s_max: Vec<f64>,
}

impl Default for MetricConfig {
    fn default() -> Self {
        MetricConfig { ks: vec![1, 10], n_rs: Vec::new(), s_max: vec![0.7] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMetric {
    TopK,
    DiversityTopK,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub metric: SweepMetric,
    pub k: usize,
    pub n_r: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_max: Option<f64>,
    pub value: f64,
    /// Across-prompt standard deviation, corpus rows only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub std: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PromptMetrics {
    pub prompt_id: String,
    pub n_r: usize,
    pub mean_reward: f64,
    pub unique_fraction: f64,
    pub internal_diversity: f64,
    pub sweep: Vec<SweepRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PredictionKind {
    Regression,
    Classification,
}

/// One scored prediction completion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub task: String,
    pub kind: PredictionKind,
    pub prediction: Option<Reference>,
    pub reference: Option<Reference>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskMetric {
    pub task: String,
    pub kind: PredictionKind,
    pub n_total: usize,
    pub n_valid: usize,
    /// Normalized Spearman for regression, accuracy for classification.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusMetrics {
    pub n_prompts: usize,
    pub validity: ValidityHistogram,
    pub mean_reward: f64,
    pub mean_unique_fraction: f64,
    pub mean_internal_diversity: f64,
    pub mean_occurrence: f64,
    pub sweep: Vec<SweepRow>,
    pub prediction: Vec<TaskMetric>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub schema_version: u32,
    pub config: MetricConfig,
    pub per_prompt: Vec<PromptMetrics>,
    pub corpus: CorpusMetrics,
    #[serde(default)]
    pub provenance: BTreeMap<String, String>,
}

fn n_rs(config: &MetricConfig, rs: &RolloutSet) -> Vec<usize> {
    if config.n_rs.is_empty() {
        vec![rs.n_r()]
    } else {
        config.n_rs.clone()
    }
}

pub fn prompt_metrics(rs: &RolloutSet, config: &MetricConfig) -> PromptMetrics {
    let mut sweep = Vec::new();
    for n_r in n_rs(config, rs) {
        let cut = rs.truncated(n_r);
        for &k in &config.ks {
            sweep.push(SweepRow { metric: SweepMetric::TopK, k, n_r, s_max: None, value: top_k_score(&cut, k), std: None });
            for &s in &config.s_max {
                let value = diversity_top_k(&cut, k, s).score;
                sweep.push(SweepRow { metric: SweepMetric::DiversityTopK, k, n_r, s_max: Some(s), value, std: None });
            }
        }
    }
    let n = rs.n_r();
    PromptMetrics {
        prompt_id: rs.prompt_id.clone(),
        n_r: n,
        mean_reward: if n == 0 { 0.0 } else { rs.items.iter().map(|i| i.reward).sum::<f64>() / n as f64 },
        unique_fraction: unique_fraction(rs),
        internal_diversity: internal_diversity(rs),
        sweep,
    }
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (0.0, 0.0);
    }
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (m, 0.0);
    }
    let var = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
    (m, var.sqrt())
}

fn sweep_key(r: &SweepRow) -> (SweepMetric, usize, usize, Option<u64>) {
    (r.metric, r.k, r.n_r, r.s_max.map(f64::to_bits))
}

fn corpus_sweep(per_prompt: &[PromptMetrics]) -> Vec<SweepRow> {
    let mut groups: BTreeMap<(SweepMetric, usize, usize, Option<u64>), (SweepRow, Vec<f64>)> = BTreeMap::new();
    for p in per_prompt {
        for r in &p.sweep {
            groups.entry(sweep_key(r)).or_insert_with(|| (r.clone(), Vec::new())).1.push(r.value);
        }
    }
    groups
        .into_values()
        .map(|(row, values)| {
            let (m, s) = mean_std(&values);
            SweepRow { value: m, std: Some(s), ..row }
        })
        .collect()
}

fn as_number(r: &Reference) -> Option<f64> {
    match r {
        Reference::Value(v) => Some(*v),
        Reference::Label(l) => l.parse().ok(),
    }
}

fn as_label(r: &Reference) -> String {
    match r {
        Reference::Value(v) if v.fract() == 0.0 => format!("{}", *v as i64),
        Reference::Value(v) => format!("{v}"),
        Reference::Label(l) => l.clone(),
    }
}

pub fn prediction_metrics(records: &[PredictionRecord]) -> Vec<TaskMetric> {
    let mut by_task: BTreeMap<(String, PredictionKind), Vec<&PredictionRecord>> = BTreeMap::new();
    for r in records {
        by_task.entry((r.task.clone(), r.kind)).or_default().push(r);
    }
    by_task
        .into_iter()
        .map(|((task, kind), recs)| {
            let known: Vec<&&PredictionRecord> = recs.iter().filter(|r| r.reference.is_some()).collect();
            let n_total = known.len();
            let (n_valid, value) = match kind {
                PredictionKind::Regression => {
                    let (preds, labels): (Vec<f64>, Vec<f64>) = known
                        .iter()
                        .filter_map(|r| Some((as_number(r.prediction.as_ref()?)?, as_number(r.reference.as_ref()?)?)))
                        .unzip();
                    (preds.len(), if n_total == 0 { 0.0 } else { normalized_spearman(&preds, &labels, n_total) })
                }
                PredictionKind::Classification => {
                    let preds: Vec<Option<String>> = known.iter().map(|r| r.prediction.as_ref().map(as_label)).collect();
                    let labels: Vec<String> = known.iter().filter_map(|r| r.reference.as_ref().map(as_label)).collect();
                    (preds.iter().filter(|p| p.is_some()).count(), accuracy(&preds, &labels))
                }
            };
            TaskMetric { task, kind, n_total, n_valid, value }
        })
        .collect()
}

/// Assembles corpus-level values from per-prompt metrics computed
/// (possibly in parallel) with [`prompt_metrics`].
pub fn assemble_report(
    per_prompt: Vec<PromptMetrics>,
    sets: &[RolloutSet],
    predictions: &[PredictionRecord],
    validity: ValidityHistogram,
    config: &MetricConfig,
) -> MetricReport {
    let occ = occurrences(sets);
    let avg = |f: &dyn Fn(&PromptMetrics) -> f64| mean_std(&per_prompt.iter().map(f).collect::<Vec<_>>()).0;
    let corpus = CorpusMetrics {
        n_prompts: per_prompt.len(),
        validity,
        mean_reward: avg(&|p| p.mean_reward),
        mean_unique_fraction: avg(&|p| p.unique_fraction),
        mean_internal_diversity: avg(&|p| p.internal_diversity),
        mean_occurrence: mean_std(&occ.values().map(|&n| n as f64).collect::<Vec<_>>()).0,
        sweep: corpus_sweep(&per_prompt),
        prediction: prediction_metrics(predictions),
    };
    MetricReport { schema_version: SCHEMA_VERSION, config: config.clone(), per_prompt, corpus, provenance: BTreeMap::new() }
}

pub fn build_report(
    sets: &[RolloutSet],
    predictions: &[PredictionRecord],
    validity: ValidityHistogram,
    config: &MetricConfig,
) -> MetricReport {
    let per_prompt = sets.iter().map(|rs| prompt_metrics(rs, config)).collect();
    assemble_report(per_prompt, sets, predictions, validity, config)
}

/// One CSV row per sweep value: corpus rows first, then per prompt.
pub fn write_sweep_csv<W: Write>(report: &MetricReport, out: W) -> Result<(), csv::Error> {
    #[derive(Serialize)]
    struct Row<'a> {
        scope: &'a str,
        metric: SweepMetric,
        k: usize,
        n_r: usize,
        s_max: Option<f64>,
        value: f64,
        std: Option<f64>,
    }
    let mut w = csv::Writer::from_writer(out);
    let rows = report
        .corpus
        .sweep
        .iter()
        .map(|r| ("corpus", r))
        .chain(report.per_prompt.iter().flat_map(|p| p.sweep.iter().map(move |r| (p.prompt_id.as_str(), r))));
    for (scope, r) in rows {
        w.serialize(Row { scope, metric: r.metric, k: r.k, n_r: r.n_r, s_max: r.s_max, value: r.value, std: r.std })?;
    }
    w.flush()?;
    Ok(())
}
