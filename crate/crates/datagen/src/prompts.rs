//! Rule-checked sampling of multi-objective generation prompts.

use std::collections::BTreeMap;

use molbench_core::scoring::{Objective, ObjectiveKind, Prompt, Rho, Task, SCHEMA_VERSION};
use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::DatagenError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveChoice {
    pub kind: ObjectiveKind,
    pub prob: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyEntry {
    /// Property name as it appears in prompts (`QED`, `DockingLookup:<target>`, ...).
    pub property: String,
    pub objectives: Vec<ObjectiveChoice>,
    pub frequency: f64,
}

/// Normalized thresholds drawn uniformly for `above` / `below` objectives.
pub const DEFAULT_THRESHOLDS: [f64; 7] = [0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyCatalog {
    pub properties: Vec<PropertyEntry>,
    #[serde(default = "default_thresholds")]
    pub thresholds: Vec<f64>,
}

fn default_thresholds() -> Vec<f64> {
    DEFAULT_THRESHOLDS.to_vec()
}

fn entry(property: &str, objectives: &[(ObjectiveKind, f64)], frequency: f64) -> PropertyEntry {
    PropertyEntry {
        property: property.to_string(),
        objectives: objectives.iter().map(|&(kind, prob)| ObjectiveChoice { kind, prob }).collect(),
        frequency,
    }
}

impl PropertyCatalog {
    /// Allowed objectives, their probabilities and the property selection weights.
    pub fn standard() -> PropertyCatalog {
        use ObjectiveKind::*;
        PropertyCatalog {
            properties: vec![
                entry("SA", &[(Minimize, 0.5), (Below, 0.5)], 3.0),
                entry("QED", &[(Maximize, 0.7), (Above, 0.3)], 7.0),
                entry("ExactMolWt", &[(Above, 0.3), (Below, 0.7)], 0.8),
                entry("NumAromaticRings", &[(Above, 0.2), (Below, 0.5), (Minimize, 0.3)], 0.5),
                entry("NumHBA", &[(Maximize, 0.5), (Above, 0.5)], 0.5),
                entry("NumHBD", &[(Above, 0.5), (Below, 0.5)], 0.5),
                entry("NumRotatableBonds", &[(Above, 0.5), (Below, 0.5)], 0.3),
                entry("FractionCSP3", &[(Above, 0.5), (Below, 0.5)], 0.5),
                entry("TPSA", &[(Above, 0.3), (Below, 0.7)], 0.6),
                entry("HallKierAlpha", &[(Above, 0.5), (Maximize, 0.5)], 0.3),
                entry("Phi", &[(Maximize, 0.4), (Above, 0.4), (Below, 0.1), (Minimize, 0.1)], 0.5),
                entry("logP", &[(Maximize, 0.1), (Above, 0.1), (Below, 0.4), (Minimize, 0.4)], 2.0),
            ],
            thresholds: default_thresholds(),
        }
    }

    pub fn validate(&self) -> Result<(), DatagenError> {
        if self.properties.is_empty() {
            return Err(DatagenError::Config("catalog is empty".into()));
        }
        if self.thresholds.is_empty() || self.thresholds.iter().any(|t| !(0.0..=1.0).contains(t)) {
            return Err(DatagenError::Config("thresholds must be a non-empty list in [0, 1]".into()));
        }
        for p in &self.properties {
            validate_entry(p)?;
            if !p.objectives.iter().all(|o| o.kind.is_generation()) {
                return Err(DatagenError::Config(format!("{}: only generation objectives are allowed", p.property)));
            }
        }
        let mut names: Vec<&str> = self.properties.iter().map(|p| p.property.as_str()).collect();
        names.sort();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return Err(DatagenError::Config("duplicate property in catalog".into()));
        }
        Ok(())
    }
}

fn validate_entry(p: &PropertyEntry) -> Result<(), DatagenError> {
    let total: f64 = p.objectives.iter().map(|o| o.prob).sum();
    if p.objectives.is_empty() || (total - 1.0).abs() > 1e-9 || p.objectives.iter().any(|o| o.prob < 0.0) {
        return Err(DatagenError::Config(format!("{}: objective probabilities must sum to 1", p.property)));
    }
    if !(p.frequency > 0.0) {
        return Err(DatagenError::Config(format!("{}: frequency must be positive", p.property)));
    }
    p.property.parse::<Rho>().map_err(|e| DatagenError::Config(format!("{}: {e}", p.property)))?;
    Ok(())
}

/// Docking targets and their objective distribution. No defaults: every
/// field must come from the config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DockingConfig {
    pub targets: Vec<String>,
    pub objectives: Vec<ObjectiveChoice>,
    /// Selection weight of each target, on the same scale as catalog frequencies.
    pub frequency: f64,
    pub thresholds: Vec<f64>,
}

impl DockingConfig {
    fn entries(&self) -> Vec<PropertyEntry> {
        self.targets
            .iter()
            .map(|t| PropertyEntry { property: format!("DockingLookup:{t}"), objectives: self.objectives.clone(), frequency: self.frequency })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NPropsDist {
    pub probs: [f64; 3],
}

impl Default for NPropsDist {
    fn default() -> Self {
        NPropsDist { probs: [0.29, 0.36, 0.35] }
    }
}

pub fn sample_n_props<R: Rng>(rng: &mut R, dist: &NPropsDist) -> usize {
    let u: f64 = rng.gen::<f64>() * dist.probs.iter().sum::<f64>();
    if u < dist.probs[0] {
        1
    } else if u < dist.probs[0] + dist.probs[1] {
        2
    } else {
        3
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleSet {
    /// Per-shard cap on prompts mentioning a property; `None` disables caps.
    pub max_occurrences: Option<usize>,
    /// Allow the same property twice within one prompt.
    #[serde(default)]
    pub allow_duplicates: bool,
    /// Every prompt must carry at least one docking objective.
    #[serde(default)]
    pub docking_required: bool,
}

impl Default for RuleSet {
    fn default() -> Self {
        RuleSet { max_occurrences: Some(4), allow_duplicates: false, docking_required: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Veto {
    Duplicate,
    CapExceeded,
    MissingDocking,
}

impl RuleSet {
    pub fn validate(&self) -> Result<(), DatagenError> {
        if self.max_occurrences == Some(0) {
            return Err(DatagenError::Config("max_occurrences must be >= 1".into()));
        }
        Ok(())
    }

    pub fn check(&self, properties: &[&str], counts: &BTreeMap<String, usize>) -> Result<(), Veto> {
        if !self.allow_duplicates && (1..properties.len()).any(|i| properties[..i].contains(&properties[i])) {
            return Err(Veto::Duplicate);
        }
        if let Some(cap) = self.max_occurrences {
            if properties.iter().any(|p| counts.get(*p).copied().unwrap_or(0) >= cap) {
                return Err(Veto::CapExceeded);
            }
        }
        if self.docking_required && !properties.iter().any(|p| p.starts_with("DockingLookup:")) {
            return Err(Veto::MissingDocking);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub catalog: PropertyCatalog,
    #[serde(default)]
    pub ruleset: RuleSet,
    #[serde(default)]
    pub docking: Option<DockingConfig>,
    #[serde(default)]
    pub n_props: NPropsDist,
    /// Rejections allowed per prompt before giving up.
    #[serde(default = "default_attempts")]
    pub max_attempts: usize,
}

fn default_attempts() -> usize {
    10_000
}

impl GeneratorConfig {
    pub fn standard(ruleset: RuleSet) -> GeneratorConfig {
        GeneratorConfig { catalog: PropertyCatalog::standard(), ruleset, docking: None, n_props: NPropsDist::default(), max_attempts: default_attempts() }
    }

    pub fn validate(&self) -> Result<(), DatagenError> {
        self.catalog.validate()?;
        self.ruleset.validate()?;
        if let Some(d) = &self.docking {
            if d.targets.is_empty() || d.thresholds.is_empty() {
                return Err(DatagenError::Config("docking block needs targets and thresholds".into()));
            }
            for e in d.entries() {
                validate_entry(&e)?;
            }
        } else if self.ruleset.docking_required {
            return Err(DatagenError::Config("docking_required without a docking block".into()));
        }
        if self.n_props.probs.iter().any(|p| *p < 0.0) || !(self.n_props.probs.iter().sum::<f64>() > 0.0) {
            return Err(DatagenError::Config("n_props probabilities must be non-negative with a positive sum".into()));
        }
        Ok(())
    }
}

/// Sequential prompt sampler for one shard; occurrence counters live here.
#[derive(Debug, Clone)]
pub struct ShardGenerator<'a> {
    config: &'a GeneratorConfig,
    standard: Vec<PropertyEntry>,
    docking: Vec<PropertyEntry>,
    counts: BTreeMap<String, usize>,
}

/// A sampled prompt with the properties in draw order.
#[derive(Debug, Clone, PartialEq)]
pub struct Sampled {
    pub prompt: Prompt,
    pub properties: Vec<String>,
}

impl<'a> ShardGenerator<'a> {
    pub fn new(config: &'a GeneratorConfig) -> Result<ShardGenerator<'a>, DatagenError> {
        config.validate()?;
        Ok(ShardGenerator {
            config,
            standard: config.catalog.properties.clone(),
            docking: config.docking.as_ref().map(|d| d.entries()).unwrap_or_default(),
            counts: BTreeMap::new(),
        })
    }

    pub fn counts(&self) -> &BTreeMap<String, usize> {
        &self.counts
    }

    fn admissible(&self, e: &PropertyEntry) -> bool {
        self.config.ruleset.max_occurrences.is_none_or(|cap| self.counts.get(&e.property).copied().unwrap_or(0) < cap)
    }

    pub fn sample_prompt<R: Rng>(&mut self, rng: &mut R, id: String) -> Result<Sampled, DatagenError> {
        let rules = &self.config.ruleset;
        let live_docking = self.docking.iter().any(|e| self.admissible(e));
        let live = self.standard.iter().chain(&self.docking).any(|e| self.admissible(e));
        if !live || (rules.docking_required && !live_docking) {
            return Err(DatagenError::Exhausted);
        }
        for _ in 0..self.config.max_attempts {
            let picks = self.draw_properties(rng);
            let names: Vec<&str> = picks.iter().map(|e| e.property.as_str()).collect();
            if rules.check(&names, &self.counts).is_err() {
                continue;
            }
            let objectives = picks.iter().map(|e| self.draw_objective(e, rng)).collect::<Result<Vec<_>, _>>()?;
            let properties: Vec<String> = names.iter().map(|s| s.to_string()).collect();
            for p in &properties {
                *self.counts.entry(p.clone()).or_default() += 1;
            }
            let prompt = Prompt { schema_version: SCHEMA_VERSION, id, task: Task::Generation, objectives };
            return Ok(Sampled { prompt, properties });
        }
        Err(DatagenError::Exhausted)
    }

    /// Docking first when required, then weighted draws without replacement
    /// (with replacement if duplicates are allowed) until n_props is reached.
    fn draw_properties<R: Rng>(&self, rng: &mut R) -> Vec<&PropertyEntry> {
        let mut pool: Vec<&PropertyEntry> = self.standard.iter().chain(&self.docking).collect();
        let distinct = pool.len();
        let mut n = sample_n_props(rng, &self.config.n_props);
        if !self.config.ruleset.allow_duplicates {
            n = n.min(distinct);
        }
        let mut picks = Vec::with_capacity(n);
        if self.config.ruleset.docking_required {
            let d = self.docking[rng.gen_range(0..self.docking.len())].property.as_str();
            let i = pool.iter().position(|e| e.property == d).unwrap();
            picks.push(pool.remove(i));
        }
        while picks.len() < n && !pool.is_empty() {
            let i = weighted_pick(pool.iter().map(|e| e.frequency), rng);
            if self.config.ruleset.allow_duplicates {
                picks.push(pool[i]);
            } else {
                picks.push(pool.remove(i));
            }
        }
        picks
    }

    fn draw_objective<R: Rng>(&self, e: &PropertyEntry, rng: &mut R) -> Result<Objective, DatagenError> {
        let i = weighted_pick(e.objectives.iter().map(|o| o.prob), rng);
        let nu = e.objectives[i].kind;
        let rho: Rho = e.property.parse().map_err(|err| DatagenError::Config(format!("{}: {err}", e.property)))?;
        let thresholds = match (&rho, &self.config.docking) {
            (Rho::Docking { .. }, Some(d)) => &d.thresholds,
            _ => &self.config.catalog.thresholds,
        };
        let sigma = matches!(nu, ObjectiveKind::Above | ObjectiveKind::Below).then(|| thresholds[rng.gen_range(0..thresholds.len())]);
        Ok(Objective { nu, rho, x: None, sigma })
    }
}

fn weighted_pick<R: Rng>(weights: impl Iterator<Item = f64>, rng: &mut R) -> usize {
    WeightedIndex::new(weights).expect("validated weights").sample(rng)
}

/// `n` prompts for one shard, with ids `<shard>-<i>`.
pub fn generate_shard<R: Rng>(config: &GeneratorConfig, shard: &str, n: usize, rng: &mut R) -> Result<Vec<Sampled>, DatagenError> {
    let mut g = ShardGenerator::new(config)?;
    (0..n).map(|i| g.sample_prompt(rng, format!("{shard}-{i}"))).collect()
}

/// Re-checks a finished shard against the rule set from empty counters.
pub fn audit_shard(ruleset: &RuleSet, shard: &[Sampled]) -> Result<(), (usize, Veto)> {
    let mut counts = BTreeMap::new();
    for (i, s) in shard.iter().enumerate() {
        let names: Vec<&str> = s.properties.iter().map(|p| p.as_str()).collect();
        ruleset.check(&names, &counts).map_err(|v| (i, v))?;
        for p in &s.properties {
            *counts.entry(p.clone()).or_insert(0) += 1;
        }
    }
    Ok(())
}
