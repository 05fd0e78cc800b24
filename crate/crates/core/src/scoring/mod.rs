//! Answer extraction, per-objective rewards and their geometric-mean
//! aggregate.

mod evaluator;
mod extract;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::chem::{CanonicalKey, Molecule};
use crate::descriptors::PropertyId;

pub use evaluator::{Evaluators, LabelError, LabelSynonyms, LabelValue, PropertyEvaluator, Reference, TaskLabels};
pub use extract::{extract_answer, last_answer_span, numbers_in};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectiveKind {
    Maximize,
    Minimize,
    Below,
    Above,
    Regression,
    Classification,
}

impl ObjectiveKind {
    pub fn is_generation(self) -> bool {
        matches!(self, ObjectiveKind::Maximize | ObjectiveKind::Minimize | ObjectiveKind::Below | ObjectiveKind::Above)
    }
}

/// What an objective measures. Serialized as a string: a property name,
/// `DockingLookup:<target>`, or any other name for a prediction task.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rho {
    Property(PropertyId),
    Docking { target: String },
    Task(String),
}

impl fmt::Display for Rho {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rho::Property(p) => write!(f, "{p}"),
            Rho::Docking { target } => write!(f, "DockingLookup:{target}"),
            Rho::Task(t) => f.write_str(t),
        }
    }
}

impl FromStr for Rho {
    type Err = String;
    fn from_str(s: &str) -> Result<Rho, String> {
        if s.is_empty() {
            return Err("empty rho".into());
        }
        if let Some(target) = s.strip_prefix("DockingLookup:") {
            if target.is_empty() {
                return Err("docking rho without a target".into());
            }
            return Ok(Rho::Docking { target: target.to_string() });
        }
        Ok(match PropertyId::from_name(s) {
            Some(p) => Rho::Property(p),
            None => Rho::Task(s.to_string()),
        })
    }
}

impl Serialize for Rho {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rho {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Rho, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Objective {
    pub nu: ObjectiveKind,
    pub rho: Rho,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Generation,
    Prediction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prompt {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    pub id: String,
    pub task: Task,
    pub objectives: Vec<Objective>,
}

fn schema_version() -> u32 {
    SCHEMA_VERSION
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PromptError {
    #[error("prompt {0} has no objectives")]
    NoObjectives(String),
    #[error("prompt {id}: objective {index} ({nu:?}) not allowed for a {task:?} prompt")]
    KindMismatch { id: String, index: usize, nu: ObjectiveKind, task: Task },
    #[error("prediction prompt {0} must have exactly one objective")]
    PredictionArity(String),
    #[error("prompt {id}: objective {index} is missing {field}")]
    MissingField { id: String, index: usize, field: &'static str },
    #[error("prompt {id}: objective {index} needs sigma > 0, got {sigma}")]
    BadSigma { id: String, index: usize, sigma: f64 },
}

impl Prompt {
    pub fn n_props(&self) -> usize {
        self.objectives.len()
    }

    pub fn answer_kind(&self) -> AnswerKind {
        match (self.task, self.objectives.first().map(|o| o.nu)) {
            (Task::Generation, _) => AnswerKind::Smiles,
            (Task::Prediction, Some(ObjectiveKind::Classification)) => AnswerKind::ClassLabel,
            (Task::Prediction, _) => AnswerKind::Number,
        }
    }

    pub fn validate(&self) -> Result<(), PromptError> {
        let id = || self.id.clone();
        if self.objectives.is_empty() {
            return Err(PromptError::NoObjectives(id()));
        }
        if self.task == Task::Prediction && self.objectives.len() != 1 {
            return Err(PromptError::PredictionArity(id()));
        }
        for (index, o) in self.objectives.iter().enumerate() {
            if o.nu.is_generation() != (self.task == Task::Generation) {
                return Err(PromptError::KindMismatch { id: id(), index, nu: o.nu, task: self.task });
            }
            let missing = |field| PromptError::MissingField { id: id(), index, field };
            match o.nu {
                ObjectiveKind::Below | ObjectiveKind::Above => {
                    let sigma = o.sigma.ok_or_else(|| missing("sigma"))?;
                    if !sigma.is_finite() {
                        return Err(PromptError::BadSigma { id: id(), index, sigma });
                    }
                }
                ObjectiveKind::Regression => {
                    o.x.as_ref().ok_or_else(|| missing("x"))?;
                    let sigma = o.sigma.ok_or_else(|| missing("sigma"))?;
                    if !(sigma > 0.0 && sigma.is_finite()) {
                        return Err(PromptError::BadSigma { id: id(), index, sigma });
                    }
                }
                ObjectiveKind::Classification => {
                    o.x.as_ref().ok_or_else(|| missing("x"))?;
                }
                ObjectiveKind::Maximize | ObjectiveKind::Minimize => {}
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnswerKind {
    Smiles,
    Number,
    ClassLabel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum InvalidCategory {
    NoAnswerTags,
    NoSmilesInAnswer,
    InvalidSmiles,
    MultipleSmiles,
    NoNumber,
    AmbiguousNumber,
}

impl InvalidCategory {
    pub const ALL: [InvalidCategory; 6] = [
        InvalidCategory::NoAnswerTags,
        InvalidCategory::NoSmilesInAnswer,
        InvalidCategory::InvalidSmiles,
        InvalidCategory::MultipleSmiles,
        InvalidCategory::NoNumber,
        InvalidCategory::AmbiguousNumber,
    ];
}

#[derive(Debug, Clone)]
pub enum ExtractedAnswer {
    Smiles { molecule: Box<Molecule>, key: CanonicalKey },
    Number(f64),
    ClassLabel(String),
    Invalid(InvalidCategory),
}

impl PartialEq for ExtractedAnswer {
    fn eq(&self, other: &Self) -> bool {
        use ExtractedAnswer::*;
        match (self, other) {
            (Smiles { key: a, .. }, Smiles { key: b, .. }) => a == b,
            (Number(a), Number(b)) => a == b,
            (ClassLabel(a), ClassLabel(b)) => a == b,
            (Invalid(a), Invalid(b)) => a == b,
            _ => false,
        }
    }
}

impl ExtractedAnswer {
    pub fn validity(&self) -> Validity {
        match self {
            ExtractedAnswer::Invalid(c) => Validity::Invalid(*c),
            _ => Validity::Valid,
        }
    }

    pub fn key(&self) -> Option<&CanonicalKey> {
        match self {
            ExtractedAnswer::Smiles { key, .. } => Some(key),
            _ => None,
        }
    }

    pub fn molecule(&self) -> Option<&Molecule> {
        match self {
            ExtractedAnswer::Smiles { molecule, .. } => Some(molecule),
            _ => None,
        }
    }

    /// Text form for reports: canonical SMILES, the number, or the label.
    pub fn display_value(&self) -> Option<String> {
        match self {
            ExtractedAnswer::Smiles { key, .. } => Some(key.0.clone()),
            ExtractedAnswer::Number(v) => Some(format!("{v}")),
            ExtractedAnswer::ClassLabel(l) => Some(l.clone()),
            ExtractedAnswer::Invalid(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Validity {
    Valid,
    Invalid(InvalidCategory),
}

/// Why a reward was forced to zero although the answer was well formed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "flag", rename_all = "snake_case")]
pub enum EvalFlag {
    MissingScore { target: String, key: CanonicalKey },
    MissingLabel { task: String, key: CanonicalKey },
    BadReference { x: String, message: String },
    EvaluatorFailure { message: String },
    AnswerKindMismatch,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyReward {
    pub value: f64,
    pub flag: Option<EvalFlag>,
}

impl PropertyReward {
    fn ok(value: f64) -> PropertyReward {
        PropertyReward { value, flag: None }
    }

    fn failed(flag: EvalFlag) -> PropertyReward {
        PropertyReward { value: 0.0, flag: Some(flag) }
    }
}

fn indicator(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

/// Label text for a numeric class label: integral values print without a
/// fractional part so `1.0` and `"1"` agree.
fn label_of_value(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

pub fn per_property_reward(obj: &Objective, ans: &ExtractedAnswer, eval: &dyn PropertyEvaluator) -> PropertyReward {
    let result = match (obj.nu, ans) {
        (_, ExtractedAnswer::Invalid(_)) => return PropertyReward::ok(0.0),
        (nu, ExtractedAnswer::Smiles { molecule, key }) if nu.is_generation() => {
            eval.normalized(&obj.rho, molecule, key).map(|r| match nu {
                ObjectiveKind::Maximize => r,
                ObjectiveKind::Minimize => 1.0 - r,
                ObjectiveKind::Below => indicator(r <= obj.sigma.unwrap_or(f64::NAN)),
                _ => indicator(r >= obj.sigma.unwrap_or(f64::NAN)),
            })
        }
        (ObjectiveKind::Regression, ExtractedAnswer::Number(o)) => {
            let x = obj.x.as_deref().unwrap_or_default();
            eval.reference(&obj.rho, x).and_then(|reference| match reference {
                Reference::Value(target) => {
                    let sigma = obj.sigma.unwrap_or(f64::NAN);
                    Ok((1.0 - (o - target).powi(2) / (sigma * sigma)).clamp(0.0, 1.0))
                }
                Reference::Label(l) => {
                    Err(EvalFlag::EvaluatorFailure { message: format!("regression target is a class label {l:?}") })
                }
            })
        }
        (ObjectiveKind::Classification, ExtractedAnswer::ClassLabel(label)) => {
            let x = obj.x.as_deref().unwrap_or_default();
            let task = obj.rho.to_string();
            eval.reference(&obj.rho, x).map(|reference| {
                let truth = match reference {
                    Reference::Label(l) => l,
                    Reference::Value(v) => eval.canonical_label(&task, &label_of_value(v)),
                };
                indicator(eval.canonical_label(&task, label) == truth)
            })
        }
        _ => Err(EvalFlag::AnswerKindMismatch),
    };
    match result {
        Ok(v) if v.is_finite() => PropertyReward::ok(v.clamp(0.0, 1.0)),
        Ok(v) => PropertyReward::failed(EvalFlag::EvaluatorFailure { message: format!("non-finite reward {v}") }),
        Err(flag) => PropertyReward::failed(flag),
    }
}

/// Geometric mean of the per-property rewards; exactly 0 when any is 0.
pub fn aggregate_reward(per_prop: &[f64]) -> f64 {
    if per_prop.is_empty() || per_prop.iter().any(|&r| r <= 0.0) {
        return 0.0;
    }
    if let [r] = per_prop {
        return *r;
    }
    let product: f64 = per_prop.iter().product();
    product.powf(1.0 / per_prop.len() as f64).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RewardReport {
    pub per_property: Vec<f64>,
    pub aggregate: f64,
    pub validity: Validity,
    /// Canonical SMILES, number or label that was scored.
    pub answer: Option<String>,
    /// ρ(x) for prediction prompts, kept for rank and accuracy metrics.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<Reference>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<EvalFlag>,
}

/// Scores one completion and keeps the extracted answer alongside.
pub fn score_answer(prompt: &Prompt, text: &str, eval: &dyn PropertyEvaluator) -> (ExtractedAnswer, RewardReport) {
    let answer = extract_answer(text, prompt.answer_kind());
    let mut flags = Vec::new();
    let per_property: Vec<f64> = prompt
        .objectives
        .iter()
        .map(|o| {
            let r = per_property_reward(o, &answer, eval);
            flags.extend(r.flag);
            r.value
        })
        .collect();
    let reference = match (prompt.task, prompt.objectives.first()) {
        (Task::Prediction, Some(Objective { rho, x: Some(x), .. })) => eval.reference(rho, x).ok(),
        _ => None,
    };
    let report = RewardReport {
        aggregate: aggregate_reward(&per_property),
        per_property,
        validity: answer.validity(),
        answer: answer.display_value(),
        reference,
        flags,
    };
    (answer, report)
}

pub fn score_completion(prompt: &Prompt, text: &str, eval: &dyn PropertyEvaluator) -> RewardReport {
    score_answer(prompt, text, eval).1
}
