//! Rollout-set metrics: top-k, similarity-constrained top-k, greedy
//! clusters, rank correlation, accuracy and validity/uniqueness statistics.

mod report;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::chem::CanonicalKey;
use crate::scoring::{ExtractedAnswer, InvalidCategory, Validity};
use crate::simfp::{ecfp, tanimoto, Fingerprint, DEFAULT_BITS, DEFAULT_RADIUS};

pub use report::{
    assemble_report, build_report, prediction_metrics, prompt_metrics, write_sweep_csv, CorpusMetrics, MetricConfig,
    MetricReport, PredictionKind, PredictionRecord, PromptMetrics, SweepMetric, SweepRow, TaskMetric,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RolloutItem {
    pub validity: Validity,
    pub reward: f64,
    pub key: Option<CanonicalKey>,
    #[serde(skip)]
    pub fp: Option<Fingerprint>,
}

impl RolloutItem {
    pub fn invalid(category: InvalidCategory) -> RolloutItem {
        RolloutItem { validity: Validity::Invalid(category), reward: 0.0, key: None, fp: None }
    }

    pub fn molecule(key: CanonicalKey, fp: Fingerprint, reward: f64) -> RolloutItem {
        RolloutItem { validity: Validity::Valid, reward, key: Some(key), fp: Some(fp) }
    }

    /// Builds an item from a scored answer, fingerprinting molecules.
    pub fn from_answer(answer: &ExtractedAnswer, reward: f64) -> RolloutItem {
        match answer {
            ExtractedAnswer::Invalid(c) => RolloutItem::invalid(*c),
            ExtractedAnswer::Smiles { molecule, key } => RolloutItem {
                validity: Validity::Valid,
                reward,
                key: Some(key.clone()),
                fp: ecfp(molecule, DEFAULT_RADIUS, DEFAULT_BITS).ok(),
            },
            _ => RolloutItem { validity: Validity::Valid, reward, key: None, fp: None },
        }
    }

    fn is_molecule(&self) -> bool {
        self.key.is_some() && self.fp.is_some()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RolloutSet {
    pub prompt_id: String,
    pub items: Vec<RolloutItem>,
}

impl RolloutSet {
    pub fn n_r(&self) -> usize {
        self.items.len()
    }

    /// The first `n` rollouts.
    pub fn truncated(&self, n: usize) -> RolloutSet {
        RolloutSet { prompt_id: self.prompt_id.clone(), items: self.items.iter().take(n).cloned().collect() }
    }

    /// Similarity of two molecule items; identical keys are always 1.
    pub fn sim(&self, a: usize, b: usize) -> f64 {
        let (x, y) = (&self.items[a], &self.items[b]);
        if x.key.is_some() && x.key == y.key {
            return 1.0;
        }
        match (&x.fp, &y.fp) {
            (Some(f), Some(g)) => tanimoto(f, g).unwrap_or(0.0),
            _ => 0.0,
        }
    }

    /// Molecule items by decreasing reward, ties by canonical key then index.
    fn ranked_molecules(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.items.len()).filter(|&i| self.items[i].is_molecule()).collect();
        idx.sort_by(|&a, &b| {
            let (x, y) = (&self.items[a], &self.items[b]);
            y.reward.total_cmp(&x.reward).then_with(|| x.key.cmp(&y.key)).then(a.cmp(&b))
        });
        idx
    }
}

/// Mean of the `k` best rewards over distinct molecules, zero-padded.
pub fn top_k_score(rs: &RolloutSet, k: usize) -> f64 {
    assert!(k >= 1, "k must be at least 1");
    let mut best: HashMap<&CanonicalKey, f64> = HashMap::new();
    for item in &rs.items {
        if let Some(key) = &item.key {
            let e = best.entry(key).or_insert(item.reward);
            *e = e.max(item.reward);
        }
    }
    let mut rewards: Vec<f64> = best.into_values().collect();
    rewards.sort_by(|a, b| b.total_cmp(a));
    rewards.iter().take(k).sum::<f64>() / k as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionResult {
    pub chosen: Vec<usize>,
    pub padded_zeros: usize,
    pub score: f64,
}

/// Greedy top-k where every pick must stay strictly below `s_max`
/// similarity to all earlier picks.
pub fn diversity_top_k(rs: &RolloutSet, k: usize, s_max: f64) -> SelectionResult {
    assert!(k >= 1, "k must be at least 1");
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    for i in rs.ranked_molecules() {
        if chosen.len() == k {
            break;
        }
        if chosen.iter().all(|&c| rs.sim(i, c) < s_max) {
            chosen.push(i);
        }
    }
    let score = chosen.iter().map(|&i| rs.items[i].reward).sum::<f64>() / k as f64;
    SelectionResult { padded_zeros: k - chosen.len(), chosen, score }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterPartition {
    pub clusters: Vec<Vec<usize>>,
    pub representatives: Vec<usize>,
}

impl ClusterPartition {
    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }
}

/// Repeatedly take the best remaining molecule and absorb everything at
/// similarity `>= s_max` to it.
pub fn greedy_clusters(rs: &RolloutSet, s_max: f64) -> ClusterPartition {
    let mut remaining = rs.ranked_molecules();
    let mut out = ClusterPartition { clusters: Vec::new(), representatives: Vec::new() };
    while let Some(&rep) = remaining.first() {
        let (members, rest): (Vec<usize>, Vec<usize>) = remaining.iter().partition(|&&i| i == rep || rs.sim(i, rep) >= s_max);
        out.representatives.push(rep);
        out.clusters.push(members);
        remaining = rest;
    }
    out
}

/// Ranks starting at 1, ties sharing their average rank.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]].total_cmp(&values[order[start]]) == Ordering::Equal {
            end += 1;
        }
        let rank = (start + end + 1) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    ranks
}

fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Spearman correlation with average ranks; None below two points or when
/// either side is constant.
pub fn spearman(preds: &[f64], labels: &[f64]) -> Option<f64> {
    assert_eq!(preds.len(), labels.len(), "prediction and label counts differ");
    if preds.len() < 2 {
        return None;
    }
    pearson(&average_ranks(preds), &average_ranks(labels))
}

/// `(ρ_s + 1) / 2` scaled by the valid fraction `preds.len() / n_total`.
pub fn normalized_spearman(preds: &[f64], labels: &[f64], n_total: usize) -> f64 {
    assert!(preds.len() <= n_total, "more valid predictions than completions");
    if preds.len() < 2 {
        return 0.0;
    }
    let rho = spearman(preds, labels).unwrap_or(0.0);
    (rho + 1.0) / 2.0 * preds.len() as f64 / n_total as f64
}

/// Fraction of correct predictions; `None` predictions count as wrong.
pub fn accuracy<T: PartialEq>(preds: &[Option<T>], labels: &[T]) -> f64 {
    assert_eq!(preds.len(), labels.len(), "prediction and label counts differ");
    if labels.is_empty() {
        return 0.0;
    }
    let correct = preds.iter().zip(labels).filter(|(p, l)| p.as_ref() == Some(*l)).count();
    correct as f64 / labels.len() as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidityHistogram {
    pub total: usize,
    pub valid: usize,
    pub invalid: BTreeMap<InvalidCategory, usize>,
}

impl Default for ValidityHistogram {
    fn default() -> Self {
        ValidityHistogram { total: 0, valid: 0, invalid: InvalidCategory::ALL.iter().map(|&c| (c, 0)).collect() }
    }
}

impl ValidityHistogram {
    pub fn add(&mut self, v: Validity) {
        self.total += 1;
        match v {
            Validity::Valid => self.valid += 1,
            Validity::Invalid(c) => *self.invalid.entry(c).or_default() += 1,
        }
    }

    pub fn merge(&mut self, other: &ValidityHistogram) {
        self.total += other.total;
        self.valid += other.valid;
        for (c, n) in &other.invalid {
            *self.invalid.entry(*c).or_default() += n;
        }
    }

    pub fn count(&self, v: Validity) -> usize {
        match v {
            Validity::Valid => self.valid,
            Validity::Invalid(c) => self.invalid.get(&c).copied().unwrap_or(0),
        }
    }
}

pub fn validity_breakdown<I: IntoIterator<Item = Validity>>(completions: I) -> ValidityHistogram {
    let mut h = ValidityHistogram::default();
    for v in completions {
        h.add(v);
    }
    h
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PromptDiversity {
    pub prompt_id: String,
    pub unique_fraction: f64,
    pub internal_diversity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiversityStats {
    pub per_prompt: Vec<PromptDiversity>,
    pub mean_unique_fraction: f64,
    pub mean_internal_diversity: f64,
    /// Average number of prompts each distinct molecule appears in.
    pub mean_occurrence: f64,
}

/// Distinct valid molecules over `n_r`.
pub fn unique_fraction(rs: &RolloutSet) -> f64 {
    if rs.items.is_empty() {
        return 0.0;
    }
    let keys: BTreeSet<&CanonicalKey> = rs.items.iter().filter_map(|i| i.key.as_ref()).collect();
    keys.len() as f64 / rs.items.len() as f64
}

/// Mean pairwise `1 - tanimoto` over distinct valid molecules; 0 below two.
pub fn internal_diversity(rs: &RolloutSet) -> f64 {
    let mut seen = BTreeSet::new();
    let fps: Vec<&Fingerprint> = rs
        .items
        .iter()
        .filter(|i| i.is_molecule() && seen.insert(i.key.as_ref()))
        .filter_map(|i| i.fp.as_ref())
        .collect();
    if fps.len() < 2 {
        return 0.0;
    }
    let mut total = 0.0;
    let mut pairs = 0usize;
    for a in 0..fps.len() {
        for b in a + 1..fps.len() {
            total += 1.0 - tanimoto(fps[a], fps[b]).unwrap_or(0.0);
            pairs += 1;
        }
    }
    total / pairs as f64
}

/// Number of prompts each distinct molecule appears in.
pub fn occurrences(sets: &[RolloutSet]) -> BTreeMap<CanonicalKey, usize> {
    let mut out: BTreeMap<CanonicalKey, usize> = BTreeMap::new();
    for rs in sets {
        let keys: BTreeSet<&CanonicalKey> = rs.items.iter().filter_map(|i| i.key.as_ref()).collect();
        for k in keys {
            *out.entry(k.clone()).or_default() += 1;
        }
    }
    out
}

fn mean(xs: impl ExactSizeIterator<Item = f64>) -> f64 {
    let n = xs.len();
    if n == 0 {
        0.0
    } else {
        xs.sum::<f64>() / n as f64
    }
}

pub fn uniqueness_and_diversity(sets: &[RolloutSet]) -> DiversityStats {
    let per_prompt: Vec<PromptDiversity> = sets
        .iter()
        .map(|rs| PromptDiversity {
            prompt_id: rs.prompt_id.clone(),
            unique_fraction: unique_fraction(rs),
            internal_diversity: internal_diversity(rs),
        })
        .collect();
    let occ = occurrences(sets);
    DiversityStats {
        mean_unique_fraction: mean(per_prompt.iter().map(|p| p.unique_fraction)),
        mean_internal_diversity: mean(per_prompt.iter().map(|p| p.internal_diversity)),
        mean_occurrence: mean(occ.values().map(|&n| n as f64)),
        per_prompt,
    }
}
