//! Versioned, checksummed parameter tables.
//!
//! A table directory holds `manifest.json` (sha256 per file) plus any of the
//! table files. Missing files leave the corresponding table unset, so only
//! properties that need it fail with `TableMissing`.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::OnceLock;

use serde::Deserialize;
use sha2::{Digest, Sha256};

use super::normalize::NormalizationSpec;
use super::tpsa::TpsaTable;
use crate::chem::smarts::{Smarts, SmartsError};
use crate::chem::Element;

#[derive(Debug, thiserror::Error)]
pub enum TableError {
    #[error("reading {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{file}: checksum mismatch (manifest {expected}, file {actual})")]
    Checksum { file: String, expected: String, actual: String },
    #[error("{file}: {message}")]
    Format { file: String, message: String },
    #[error("{file}: {source}")]
    Smarts { file: String, source: SmartsError },
}

pub struct CrippenTable {
    pub rules: Vec<(String, Smarts, f64)>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub struct AdsParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
    pub dmax: f64,
}

pub struct QedTable {
    /// (property name, weight, desirability parameters) in QED order
    pub terms: Vec<(String, f64, AdsParams)>,
    pub acceptors: Vec<Smarts>,
    pub donors: Smarts,
    pub rotatable: Smarts,
    pub aliphatic_ring_exit: Smarts,
    pub alerts: Vec<Smarts>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct HallKierTable {
    pub alphas: BTreeMap<String, HybridAlphas>,
    pub covalent_radii: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
pub struct HybridAlphas {
    pub sp: Option<f64>,
    pub sp2: Option<f64>,
    pub sp3: Option<f64>,
}

impl HallKierTable {
    pub fn radius(&self, e: Element) -> Option<f64> {
        self.covalent_radii.get(e.symbol()).copied()
    }
}

pub struct SaTable {
    pub missing_score: f64,
    pub min_raw: f64,
    pub max_raw: f64,
    pub macrocycle_size: usize,
    /// Sorted fragment ids with their scores; `None` scores the fragment term as zero.
    pub fragments: Option<FragmentScores>,
}

pub struct FragmentScores {
    ids: Vec<u32>,
    score_index: Vec<u16>,
    scores: Vec<f64>,
}

impl FragmentScores {
    pub fn get(&self, id: u32) -> Option<f64> {
        self.ids.binary_search(&id).ok().map(|i| self.scores[self.score_index[i] as usize])
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }
}

pub struct ParameterTables {
    pub crippen: Option<CrippenTable>,
    pub tpsa: Option<TpsaTable>,
    pub qed: Option<QedTable>,
    pub hall_kier: Option<HallKierTable>,
    pub sa: Option<SaTable>,
    pub normalization: Vec<NormalizationSpec>,
    /// file name -> sha256, for report provenance
    pub checksums: BTreeMap<String, String>,
}

const BUNDLED: [(&str, &[u8]); 8] = [
    ("manifest.json", include_bytes!("../../data/manifest.json")),
    ("crippen.json", include_bytes!("../../data/crippen.json")),
    ("tpsa.json", include_bytes!("../../data/tpsa.json")),
    ("qed.json", include_bytes!("../../data/qed.json")),
    ("hall_kier.json", include_bytes!("../../data/hall_kier.json")),
    ("sa.json", include_bytes!("../../data/sa.json")),
    ("sa_fragments.bin", include_bytes!("../../data/sa_fragments.bin")),
    ("normalization.json", include_bytes!("../../data/normalization.json")),
];

impl ParameterTables {
    /// The tables compiled into the crate, loaded once per process.
    pub fn bundled() -> &'static ParameterTables {
        static TABLES: OnceLock<ParameterTables> = OnceLock::new();
        TABLES.get_or_init(|| {
            let files: BTreeMap<String, Vec<u8>> = BUNDLED.iter().map(|(n, b)| (n.to_string(), b.to_vec())).collect();
            ParameterTables::from_files(&files).expect("bundled tables are consistent")
        })
    }

    /// Load every table present in `dir`; each must match `manifest.json`.
    pub fn load_dir(dir: &Path) -> Result<ParameterTables, TableError> {
        let mut files = BTreeMap::new();
        for (name, _) in BUNDLED {
            let path = dir.join(name);
            match std::fs::read(&path) {
                Ok(bytes) => {
                    files.insert(name.to_string(), bytes);
                }
                Err(e) if e.kind() == std::io::ErrorKind::NotFound && name != "manifest.json" => {}
                Err(source) => return Err(TableError::Io { path: path.display().to_string(), source }),
            }
        }
        ParameterTables::from_files(&files)
    }

    pub fn from_files(files: &BTreeMap<String, Vec<u8>>) -> Result<ParameterTables, TableError> {
        #[derive(Deserialize)]
        struct Manifest {
            sha256: BTreeMap<String, String>,
        }
        let manifest: Manifest = parse_json("manifest.json", files.get("manifest.json").map(Vec::as_slice).unwrap_or(b""))?;
        let mut checksums = BTreeMap::new();
        for (name, bytes) in files {
            if name == "manifest.json" {
                continue;
            }
            let actual = hex::encode(Sha256::digest(bytes));
            let expected = manifest.sha256.get(name).cloned().unwrap_or_default();
            if actual != expected {
                return Err(TableError::Checksum { file: name.clone(), expected, actual });
            }
            checksums.insert(name.clone(), actual);
        }
        let get = |n: &str| files.get(n).map(Vec::as_slice);

        let crippen = get("crippen.json").map(load_crippen).transpose()?;
        let tpsa = get("tpsa.json").map(|b| parse_json::<TpsaTable>("tpsa.json", b)).transpose()?;
        let qed = get("qed.json").map(load_qed).transpose()?;
        let hall_kier = get("hall_kier.json").map(|b| parse_json::<HallKierTable>("hall_kier.json", b)).transpose()?;
        let sa = get("sa.json").map(|b| load_sa(b, get("sa_fragments.bin"))).transpose()?;
        let normalization = match get("normalization.json") {
            Some(b) => {
                #[derive(Deserialize)]
                struct Norm {
                    maps: Vec<NormalizationSpec>,
                }
                parse_json::<Norm>("normalization.json", b)?.maps
            }
            None => Vec::new(),
        };
        Ok(ParameterTables { crippen, tpsa, qed, hall_kier, sa, normalization, checksums })
    }

    pub fn normalization_for(&self, property: super::PropertyId) -> Option<&NormalizationSpec> {
        self.normalization.iter().find(|s| s.property == property)
    }
}

fn parse_json<T: serde::de::DeserializeOwned>(file: &str, bytes: &[u8]) -> Result<T, TableError> {
    serde_json::from_slice(bytes).map_err(|e| TableError::Format { file: file.into(), message: e.to_string() })
}

fn smarts(file: &str, text: &str) -> Result<Smarts, TableError> {
    Smarts::parse(text).map_err(|source| TableError::Smarts { file: file.into(), source })
}

fn load_crippen(bytes: &[u8]) -> Result<CrippenTable, TableError> {
    #[derive(Deserialize)]
    struct Rule {
        #[serde(rename = "type")]
        kind: String,
        smarts: String,
        logp: f64,
    }
    #[derive(Deserialize)]
    struct File {
        rules: Vec<Rule>,
    }
    let f: File = parse_json("crippen.json", bytes)?;
    let rules = f
        .rules
        .into_iter()
        .map(|r| Ok((r.kind, smarts("crippen.json", &r.smarts)?, r.logp)))
        .collect::<Result<_, TableError>>()?;
    Ok(CrippenTable { rules })
}

fn load_qed(bytes: &[u8]) -> Result<QedTable, TableError> {
    #[derive(Deserialize)]
    struct File {
        properties: Vec<String>,
        weights: Vec<f64>,
        ads: BTreeMap<String, AdsParams>,
        acceptors: Vec<String>,
        donors: String,
        rotatable: String,
        aliphatic_ring_exit: String,
        alerts: Vec<String>,
    }
    let f: File = parse_json("qed.json", bytes)?;
    if f.properties.len() != f.weights.len() {
        return Err(TableError::Format { file: "qed.json".into(), message: "properties and weights differ in length".into() });
    }
    let terms = f
        .properties
        .iter()
        .zip(&f.weights)
        .map(|(p, &w)| {
            let ads = f.ads.get(p).copied().ok_or_else(|| TableError::Format {
                file: "qed.json".into(),
                message: format!("no desirability parameters for {p}"),
            })?;
            Ok((p.clone(), w, ads))
        })
        .collect::<Result<_, TableError>>()?;
    let many = |v: &[String]| v.iter().map(|s| smarts("qed.json", s)).collect::<Result<Vec<_>, _>>();
    Ok(QedTable {
        terms,
        acceptors: many(&f.acceptors)?,
        donors: smarts("qed.json", &f.donors)?,
        rotatable: smarts("qed.json", &f.rotatable)?,
        aliphatic_ring_exit: smarts("qed.json", &f.aliphatic_ring_exit)?,
        alerts: many(&f.alerts)?,
    })
}

fn load_sa(meta: &[u8], blob: Option<&[u8]>) -> Result<SaTable, TableError> {
    #[derive(Deserialize)]
    struct File {
        missing_score: f64,
        min_raw: f64,
        max_raw: f64,
        macrocycle_size: usize,
        groups: Vec<(f64, usize)>,
    }
    let f: File = parse_json("sa.json", meta)?;
    let fragments = blob.map(|b| decode_fragments(&f.groups, b)).transpose()?;
    Ok(SaTable { missing_score: f.missing_score, min_raw: f.min_raw, max_raw: f.max_raw, macrocycle_size: f.macrocycle_size, fragments })
}

fn decode_fragments(groups: &[(f64, usize)], blob: &[u8]) -> Result<FragmentScores, TableError> {
    let bad = |m: &str| TableError::Format { file: "sa_fragments.bin".into(), message: m.into() };
    if groups.len() > u16::MAX as usize {
        return Err(bad("too many score groups"));
    }
    let total: usize = groups.iter().map(|g| g.1).sum();
    let mut pairs: Vec<(u32, u16)> = Vec::with_capacity(total);
    let mut pos = 0;
    for (g, &(_, count)) in groups.iter().enumerate() {
        let mut prev = 0u64;
        for _ in 0..count {
            let mut value = 0u64;
            let mut shift = 0;
            loop {
                let byte = *blob.get(pos).ok_or_else(|| bad("truncated"))?;
                pos += 1;
                value |= ((byte & 0x7f) as u64) << shift;
                if byte & 0x80 == 0 {
                    break;
                }
                shift += 7;
                if shift > 35 {
                    return Err(bad("varint overflow"));
                }
            }
            prev += value;
            let id = u32::try_from(prev).map_err(|_| bad("id exceeds 32 bits"))?;
            pairs.push((id, g as u16));
        }
    }
    if pos != blob.len() {
        return Err(bad("trailing bytes"));
    }
    pairs.sort_unstable();
    Ok(FragmentScores {
        ids: pairs.iter().map(|p| p.0).collect(),
        score_index: pairs.iter().map(|p| p.1).collect(),
        scores: groups.iter().map(|g| g.0).collect(),
    })
}
