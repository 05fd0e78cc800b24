//! Fingerprint cache keyed by canonical SMILES, persisted as hex JSONL.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::Fingerprint;

#[derive(Serialize, Deserialize)]
struct Line {
    smiles: String,
    radius: u32,
    bits: String,
}

#[derive(Debug, Default, Clone)]
pub struct FingerprintCache {
    entries: HashMap<String, Fingerprint>,
}

impl FingerprintCache {
    pub fn new() -> FingerprintCache {
        FingerprintCache::default()
    }

    pub fn get(&self, canonical: &str) -> Option<&Fingerprint> {
        self.entries.get(canonical)
    }

    pub fn insert(&mut self, canonical: String, fp: Fingerprint) {
        self.entries.insert(canonical, fp);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn read_jsonl(reader: impl BufRead) -> std::io::Result<FingerprintCache> {
        let mut cache = FingerprintCache::new();
        for (n, line) in reader.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: Line = serde_json::from_str(&line)
                .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, format!("line {}: {e}", n + 1)))?;
            let fp = Fingerprint::from_hex(&rec.bits, rec.radius).ok_or_else(|| {
                std::io::Error::new(std::io::ErrorKind::InvalidData, format!("line {}: bad hex bitset", n + 1))
            })?;
            cache.insert(rec.smiles, fp);
        }
        Ok(cache)
    }

    /// Writes entries sorted by key so the file is reproducible.
    pub fn write_jsonl(&self, mut out: impl Write) -> std::io::Result<()> {
        let mut keys: Vec<&String> = self.entries.keys().collect();
        keys.sort();
        for k in keys {
            let fp = &self.entries[k];
            let line = Line { smiles: k.clone(), radius: fp.radius(), bits: fp.to_hex() };
            writeln!(out, "{}", serde_json::to_string(&line).expect("serializable"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jsonl_round_trip() {
        let mut c = FingerprintCache::new();
        c.insert("CCO".into(), Fingerprint::from_bits(2048, &[3, 700, 2047]).unwrap());
        c.insert("C".into(), Fingerprint::from_bits(2048, &[5]).unwrap());
        let mut buf = Vec::new();
        c.write_jsonl(&mut buf).unwrap();
        let back = FingerprintCache::read_jsonl(buf.as_slice()).unwrap();
        assert_eq!(back.get("CCO"), c.get("CCO"));
        assert_eq!(back.len(), 2);
        assert!(FingerprintCache::read_jsonl("{\"smiles\":1}\n".as_bytes()).is_err());
    }
}
