//! Precomputed docking scores keyed by (target id, canonical SMILES).

use std::collections::HashMap;
use std::io::BufRead;

use serde::Deserialize;

use crate::chem::{canonical_key, parse_smiles, CanonicalKey};

#[derive(Debug, thiserror::Error)]
pub enum DockingError {
    #[error("reading docking scores: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
}

#[derive(Debug, Clone, Default)]
pub struct DockingTable {
    scores: HashMap<(String, String), f64>,
}

#[derive(Deserialize)]
struct Record {
    target: String,
    smiles: String,
    score: f64,
}

impl DockingTable {
    pub fn new() -> DockingTable {
        DockingTable::default()
    }

    /// Later lines overwrite earlier ones for the same key.
    pub fn read_jsonl<R: BufRead>(reader: R) -> Result<DockingTable, DockingError> {
        let mut table = DockingTable::new();
        for (n, line) in reader.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let bad = |message: String| DockingError::Line { line: n + 1, message };
            let r: Record = serde_json::from_str(&line).map_err(|e| bad(e.to_string()))?;
            let mol = parse_smiles(&r.smiles).map_err(|e| bad(format!("{}: {e}", r.smiles)))?;
            let key = canonical_key(&mol).map_err(|e| bad(format!("{}: {e}", r.smiles)))?;
            table.insert(&r.target, &key, r.score);
        }
        Ok(table)
    }

    pub fn insert(&mut self, target: &str, key: &CanonicalKey, score: f64) {
        self.scores.insert((target.to_string(), key.as_str().to_string()), score);
    }

    pub fn lookup(&self, target: &str, key: &CanonicalKey) -> Option<f64> {
        self.scores.get(&(target.to_string(), key.as_str().to_string())).copied()
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }
}
