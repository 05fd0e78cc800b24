//! Direct evaluation of the reward table from raw descriptor values, kept
//! apart from the scoring module: its own normalization arithmetic, its own
//! score lookups keyed by the SMILES text the answer was written with, and
//! no answer extraction (the intended answer is known up front).

#![allow(dead_code)]

use std::collections::BTreeMap;

use molbench_core::chem::{canonical_key, parse_smiles};
use molbench_core::descriptors::{compute, DockingTable, ParameterTables, PropertyId};
use molbench_core::scoring::{LabelValue, Objective, ObjectiveKind, Prompt, Rho, Task, TaskLabels};
use rand::seq::SliceRandom;
use rand::Rng;

pub const TARGET: &str = "T1";
pub const TASK: &str = "tox";

#[derive(Debug, Clone)]
pub enum Intended {
    Molecule(String),
    Number(f64),
    Label(&'static str),
    Invalid,
}

/// External scores as plain maps keyed by the corpus text.
pub struct World {
    pub corpus: Vec<String>,
    pub docking: BTreeMap<String, f64>,
    pub labels: BTreeMap<String, bool>,
}

impl World {
    pub fn new<R: Rng>(corpus: Vec<String>, rng: &mut R) -> World {
        let mut docking = BTreeMap::new();
        let mut labels = BTreeMap::new();
        for s in &corpus {
            if rng.gen_bool(0.8) {
                docking.insert(s.clone(), rng.gen_range(-16.0..2.0));
            }
            labels.insert(s.clone(), rng.gen_bool(0.5));
        }
        World { corpus, docking, labels }
    }

    /// The same data in the scoring module's keyed tables.
    pub fn tables(&self) -> (DockingTable, TaskLabels) {
        let mut dock = DockingTable::new();
        let mut labels = TaskLabels::default();
        for s in &self.corpus {
            let Ok(mol) = parse_smiles(s) else { continue };
            let Ok(key) = canonical_key(&mol) else { continue };
            if let Some(v) = self.docking.get(s) {
                dock.insert(TARGET, &key, *v);
            }
            let value = if self.labels[s] { LabelValue::Text("active".into()) } else { LabelValue::Number(0.0) };
            labels.insert(TASK, key, value);
        }
        (dock, labels)
    }
}

fn unit(raw: f64, lower: f64, upper: f64, reversed: bool) -> f64 {
    let (from, span) = if reversed { (upper, lower - upper) } else { (lower, upper - lower) };
    let t = (raw - from) / span;
    t.max(0.0).min(1.0)
}

/// Normalized ρ of the molecule written as `smiles`; None when the
/// property cannot be evaluated.
pub fn rho_of(world: &World, tables: &ParameterTables, rho: &Rho, smiles: &str) -> Option<f64> {
    let (prop, raw) = match rho {
        Rho::Property(p) => {
            let mol = parse_smiles(smiles).ok()?;
            (*p, compute(&mol, *p, tables).ok()?)
        }
        Rho::Docking { .. } => (PropertyId::DockingLookup, *world.docking.get(smiles)?),
        Rho::Task(_) => return None,
    };
    let spec = tables.normalization.iter().find(|s| s.property == prop)?;
    Some(unit(raw, spec.lower, spec.upper, spec.reversed))
}

pub fn reward(world: &World, tables: &ParameterTables, o: &Objective, answer: &Intended) -> f64 {
    let r = match (o.nu, answer) {
        (_, Intended::Invalid) => None,
        (ObjectiveKind::Maximize, Intended::Molecule(s)) => rho_of(world, tables, &o.rho, s),
        (ObjectiveKind::Minimize, Intended::Molecule(s)) => rho_of(world, tables, &o.rho, s).map(|v| 1.0 - v),
        (ObjectiveKind::Below, Intended::Molecule(s)) => {
            rho_of(world, tables, &o.rho, s).map(|v| if v <= o.sigma.unwrap() { 1.0 } else { 0.0 })
        }
        (ObjectiveKind::Above, Intended::Molecule(s)) => {
            rho_of(world, tables, &o.rho, s).map(|v| if v >= o.sigma.unwrap() { 1.0 } else { 0.0 })
        }
        (ObjectiveKind::Regression, Intended::Number(v)) => {
            rho_of(world, tables, &o.rho, o.x.as_ref().unwrap()).map(|target| {
                let s = o.sigma.unwrap();
                let d = v - target;
                (1.0 - d * d / (s * s)).max(0.0)
            })
        }
        (ObjectiveKind::Classification, Intended::Label(l)) => {
            let truth = world.labels[o.x.as_ref().unwrap()];
            let said = matches!(*l, "yes" | "1" | "True" | "active");
            Some(if said == truth { 1.0 } else { 0.0 })
        }
        _ => None,
    };
    r.unwrap_or(0.0)
}

pub fn aggregate(rs: &[f64]) -> f64 {
    if rs.contains(&0.0) {
        return 0.0;
    }
    (rs.iter().map(|r| r.ln()).sum::<f64>() / rs.len() as f64).exp()
}

const GENERATION_PROPS: [PropertyId; 12] = [
    PropertyId::ExactMolWt,
    PropertyId::LogP,
    PropertyId::TPSA,
    PropertyId::NumHBA,
    PropertyId::NumHBD,
    PropertyId::NumRotatableBonds,
    PropertyId::NumAromaticRings,
    PropertyId::FractionCSP3,
    PropertyId::QED,
    PropertyId::SA,
    PropertyId::HallKierAlpha,
    PropertyId::Phi,
];

fn random_rho<R: Rng>(rng: &mut R) -> Rho {
    if rng.gen_bool(0.15) {
        Rho::Docking { target: TARGET.into() }
    } else {
        Rho::Property(*GENERATION_PROPS.choose(rng).unwrap())
    }
}

fn threshold<R: Rng>(rng: &mut R) -> f64 {
    // grid values make exact ties at the inclusive boundary likely
    if rng.gen_bool(0.3) {
        *[0.0, 0.25, 0.5, 0.75, 1.0].choose(rng).unwrap()
    } else {
        rng.gen_range(0.0..1.0)
    }
}

const JUNK: [&str; 6] = ["no tags here", "<answer>C1CC</answer>", "<answer>CCO and CCN</answer>", "<answer></answer>", "<answer>hello</answer>", "<answer>CC(C)(C)(C)(C)C</answer>"];

/// One random prompt, the completion text, and the answer it encodes.
pub fn random_case<R: Rng>(world: &World, id: usize, rng: &mut R) -> (Prompt, String, Intended) {
    let roll: f64 = rng.gen();
    let pick = |rng: &mut R| world.corpus.choose(rng).unwrap().clone();
    let (task, objectives, text, intended) = if roll < 0.7 {
        let n = rng.gen_range(1..=3);
        let objectives: Vec<Objective> = (0..n)
            .map(|_| {
                let nu = *[ObjectiveKind::Maximize, ObjectiveKind::Minimize, ObjectiveKind::Below, ObjectiveKind::Above]
                    .choose(rng)
                    .unwrap();
                let sigma = matches!(nu, ObjectiveKind::Below | ObjectiveKind::Above).then(|| threshold(rng));
                Objective { nu, rho: random_rho(rng), x: None, sigma }
            })
            .collect();
        let (text, intended) = if rng.gen_bool(0.85) {
            let s = pick(rng);
            let intended = if s.contains('.') { Intended::Invalid } else { Intended::Molecule(s.clone()) };
            (format!("Let me think.\n<answer>{s}</answer>"), intended)
        } else {
            (JUNK.choose(rng).unwrap().to_string(), Intended::Invalid)
        };
        (Task::Generation, objectives, text, intended)
    } else if roll < 0.9 {
        let x = loop {
            let s = pick(rng);
            if !s.contains('.') {
                break s;
            }
        };
        let rho = Rho::Property(*GENERATION_PROPS.choose(rng).unwrap());
        let sigma = rng.gen_range(0.05..0.5);
        let (text, intended) = match rho_of(world, molbench_core::descriptors::ParameterTables::bundled(), &rho, &x) {
            Some(target) if rng.gen_bool(0.9) => {
                let v = if rng.gen_bool(0.1) { target } else { target + rng.gen_range(-1.5..1.5) * sigma };
                (format!("<answer>{v}</answer>"), Intended::Number(v))
            }
            _ => ("<answer>between 1 and 2</answer>".to_string(), Intended::Invalid),
        };
        (Task::Prediction, vec![Objective { nu: ObjectiveKind::Regression, rho, x: Some(x), sigma: Some(sigma) }], text, intended)
    } else {
        let x = pick(rng);
        let label = *["yes", "no", "1", "0", "True", "inactive", "active"].choose(rng).unwrap();
        let objective = Objective { nu: ObjectiveKind::Classification, rho: Rho::Task(TASK.into()), x: Some(x), sigma: None };
        (Task::Prediction, vec![objective], format!("<answer>{label}</answer>"), Intended::Label(label))
    };
    (Prompt { schema_version: 1, id: format!("q{id}"), task, objectives }, text, intended)
}
