use std::collections::{BTreeMap, HashMap};
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use super::{EvalFlag, Rho};
use crate::chem::{parse_smiles, CanonicalKey, Molecule};
use crate::descriptors::{compute, normalize, DockingTable, NormalizationSpec, ParameterTables, PropertyId};

/// Ground truth for an objective's reference molecule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Reference {
    Value(f64),
    Label(String),
}

/// Property values needed by the reward formulas.
pub trait PropertyEvaluator: Sync {
    /// Normalized ρ of a candidate molecule.
    fn normalized(&self, rho: &Rho, mol: &Molecule, key: &CanonicalKey) -> Result<f64, EvalFlag>;
    /// ρ(x) for a reference molecule given as SMILES.
    fn reference(&self, rho: &Rho, x: &str) -> Result<Reference, EvalFlag>;
    /// Maps a classification answer onto the label vocabulary of `task`.
    fn canonical_label(&self, task: &str, label: &str) -> String {
        let _ = task;
        label.trim().to_lowercase()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LabelValue {
    Number(f64),
    Text(String),
}

#[derive(Debug, Deserialize)]
struct LabelRecord {
    task: String,
    smiles: String,
    value: LabelValue,
}

#[derive(Debug, thiserror::Error)]
pub enum LabelError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
}

/// Dataset labels for named prediction tasks, keyed by canonical SMILES.
#[derive(Debug, Clone, Default)]
pub struct TaskLabels {
    labels: HashMap<(String, CanonicalKey), LabelValue>,
}

impl TaskLabels {
    /// Reads `{task, smiles, value}` lines.
    pub fn read_jsonl<R: BufRead>(reader: R) -> Result<TaskLabels, LabelError> {
        let mut out = TaskLabels::default();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let err = |message: String| LabelError::Line { line: i + 1, message };
            let rec: LabelRecord = serde_json::from_str(&line).map_err(|e| err(e.to_string()))?;
            let mol = parse_smiles(&rec.smiles).map_err(|e| err(e.to_string()))?;
            let key = crate::chem::canonical_key(&mol).map_err(|e| err(e.to_string()))?;
            out.labels.insert((rec.task, key), rec.value);
        }
        Ok(out)
    }

    pub fn insert(&mut self, task: &str, key: CanonicalKey, value: LabelValue) {
        self.labels.insert((task.to_string(), key), value);
    }

    pub fn get(&self, task: &str, key: &CanonicalKey) -> Option<&LabelValue> {
        self.labels.get(&(task.to_string(), key.clone()))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// Case-insensitive label synonyms; a per-task map overrides the default.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LabelSynonyms {
    pub default: BTreeMap<String, String>,
    #[serde(default)]
    pub per_task: BTreeMap<String, BTreeMap<String, String>>,
}

impl Default for LabelSynonyms {
    fn default() -> Self {
        let positive = ["1", "1.0", "yes", "true", "active", "positive"];
        let negative = ["0", "0.0", "no", "false", "inactive", "negative"];
        let mut default = BTreeMap::new();
        for p in positive {
            default.insert(p.to_string(), "1".to_string());
        }
        for n in negative {
            default.insert(n.to_string(), "0".to_string());
        }
        LabelSynonyms { default, per_task: BTreeMap::new() }
    }
}

impl LabelSynonyms {
    pub fn canonical(&self, task: &str, label: &str) -> String {
        let l = label.trim().to_lowercase();
        let map = self.per_task.get(task).unwrap_or(&self.default);
        map.get(&l).cloned().unwrap_or(l)
    }
}

/// The standard evaluator: descriptor tables, optional docking scores and
/// prediction-task labels.
pub struct Evaluators<'a> {
    pub tables: &'a ParameterTables,
    pub normalization: Vec<NormalizationSpec>,
    pub docking: Option<&'a DockingTable>,
    pub labels: Option<&'a TaskLabels>,
    pub synonyms: LabelSynonyms,
}

impl<'a> Evaluators<'a> {
    pub fn new(tables: &'a ParameterTables) -> Evaluators<'a> {
        Evaluators {
            tables,
            normalization: tables.normalization.clone(),
            docking: None,
            labels: None,
            synonyms: LabelSynonyms::default(),
        }
    }

    pub fn with_docking(mut self, docking: &'a DockingTable) -> Self {
        self.docking = Some(docking);
        self
    }

    pub fn with_labels(mut self, labels: &'a TaskLabels) -> Self {
        self.labels = Some(labels);
        self
    }

    /// Replaces the normalization entries for the properties in `specs`.
    pub fn with_normalization(mut self, specs: &[NormalizationSpec]) -> Self {
        for s in specs {
            self.normalization.retain(|n| n.property != s.property);
            self.normalization.push(s.clone());
        }
        self
    }

    fn spec(&self, prop: PropertyId) -> Result<&NormalizationSpec, EvalFlag> {
        self.normalization
            .iter()
            .find(|s| s.property == prop)
            .ok_or_else(|| EvalFlag::EvaluatorFailure { message: format!("no normalization for {prop}") })
    }

    fn docking_score(&self, target: &str, key: &CanonicalKey) -> Result<f64, EvalFlag> {
        let raw = self
            .docking
            .and_then(|d| d.lookup(target, key))
            .ok_or_else(|| EvalFlag::MissingScore { target: target.to_string(), key: key.clone() })?;
        Ok(normalize(raw, self.spec(PropertyId::DockingLookup)?))
    }
}

fn reference_molecule(x: &str) -> Result<(Molecule, CanonicalKey), EvalFlag> {
    let fail = |e: crate::chem::ChemError| EvalFlag::BadReference { x: x.to_string(), message: e.to_string() };
    let mol = parse_smiles(x).map_err(fail)?;
    let key = crate::chem::canonical_key(&mol).map_err(fail)?;
    Ok((mol, key))
}

impl PropertyEvaluator for Evaluators<'_> {
    fn normalized(&self, rho: &Rho, mol: &Molecule, key: &CanonicalKey) -> Result<f64, EvalFlag> {
        match rho {
            Rho::Property(PropertyId::DockingLookup) => {
                Err(EvalFlag::EvaluatorFailure { message: "docking objective needs a target".into() })
            }
            Rho::Property(p) => {
                let raw = compute(mol, *p, self.tables)
                    .map_err(|e| EvalFlag::EvaluatorFailure { message: format!("{p}: {e}") })?;
                Ok(normalize(raw, self.spec(*p)?))
            }
            Rho::Docking { target } => self.docking_score(target, key),
            Rho::Task(name) => {
                Err(EvalFlag::EvaluatorFailure { message: format!("task {name} is not a molecular property") })
            }
        }
    }

    fn reference(&self, rho: &Rho, x: &str) -> Result<Reference, EvalFlag> {
        let (mol, key) = reference_molecule(x)?;
        match rho {
            Rho::Task(name) => {
                let value = self
                    .labels
                    .and_then(|l| l.get(name, &key))
                    .ok_or_else(|| EvalFlag::MissingLabel { task: name.clone(), key: key.clone() })?;
                Ok(match value {
                    LabelValue::Number(v) => Reference::Value(*v),
                    LabelValue::Text(t) => Reference::Label(self.synonyms.canonical(name, t)),
                })
            }
            _ => self.normalized(rho, &mol, &key).map(Reference::Value),
        }
    }

    fn canonical_label(&self, task: &str, label: &str) -> String {
        self.synonyms.canonical(task, label)
    }
}
