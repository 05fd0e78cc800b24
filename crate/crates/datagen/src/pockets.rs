//! Ligand-contact pockets aggregated across structures of one sequence.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::{Matrix3, Vector3};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::DatagenError;

pub const SCHEMA_VERSION: u32 = 1;

pub type Point = [f64; 3];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Residue {
    pub id: String,
    pub atoms: Vec<Point>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructureRecord {
    pub sequence_id: String,
    pub structure_id: String,
    pub residues: Vec<Residue>,
    pub ligand: Vec<Point>,
    /// pIC50
    pub potency: f64,
    pub confidence: f64,
}

impl StructureRecord {
    pub fn validate(&self) -> Result<(), DatagenError> {
        let bad = |msg: String| Err(DatagenError::Structure { structure: self.structure_id.clone(), message: msg });
        let finite = |p: &Point| p.iter().all(|c| c.is_finite());
        if !self.ligand.iter().all(finite) || !self.residues.iter().flat_map(|r| &r.atoms).all(finite) {
            return bad("non-finite coordinate".into());
        }
        if !(self.potency.is_finite() && self.confidence.is_finite()) {
            return bad("non-finite potency or confidence".into());
        }
        let mut ids = BTreeSet::new();
        for r in &self.residues {
            if !ids.insert(r.id.as_str()) {
                return bad(format!("residue id {} repeated", r.id));
            }
        }
        Ok(())
    }

    pub fn residue(&self, id: &str) -> Option<&Residue> {
        self.residues.iter().find(|r| r.id == id)
    }
}

pub fn read_structures_jsonl(text: &str) -> Result<Vec<StructureRecord>, DatagenError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let rec: StructureRecord =
            serde_json::from_str(line).map_err(|e| DatagenError::Schema { line: i + 1, message: e.to_string() })?;
        rec.validate()?;
        out.push(rec);
    }
    Ok(out)
}

/// Keeps values at or above the median (mean of the middle pair for even n).
fn keep_upper_half(records: Vec<&StructureRecord>, key: fn(&StructureRecord) -> f64) -> Vec<&StructureRecord> {
    if records.len() <= 1 {
        return records;
    }
    let mut v: Vec<f64> = records.iter().map(|r| key(r)).collect();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    let median = if n % 2 == 1 { v[n / 2] } else { (v[n / 2 - 1] + v[n / 2]) / 2.0 };
    records.into_iter().filter(|r| key(r) >= median).collect()
}

/// Potency filter, then confidence filter over the potency survivors.
pub fn filter_structures(group: &[StructureRecord]) -> Vec<&StructureRecord> {
    let potent = keep_upper_half(group.iter().collect(), |r| r.potency);
    keep_upper_half(potent, |r| r.confidence)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pocket {
    pub structure_id: String,
    pub residues: BTreeSet<String>,
}

fn dist2(a: &Point, b: &Point) -> f64 {
    (0..3).map(|i| (a[i] - b[i]).powi(2)).sum()
}

/// Union over ligand atoms of the `k` residues nearest to that atom, where a
/// residue's distance is its closest atom. Equal distances go to the smaller id.
pub fn contact_pocket(record: &StructureRecord, k: usize) -> Result<Pocket, DatagenError> {
    if record.ligand.is_empty() {
        return Err(DatagenError::Structure { structure: record.structure_id.clone(), message: "no ligand atoms".into() });
    }
    let mut residues = BTreeSet::new();
    for l in &record.ligand {
        let mut d: Vec<(f64, &str)> = record
            .residues
            .iter()
            .filter(|r| !r.atoms.is_empty())
            .map(|r| (r.atoms.iter().map(|a| dist2(a, l)).fold(f64::INFINITY, f64::min), r.id.as_str()))
            .collect();
        d.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(b.1)));
        residues.extend(d.into_iter().take(k).map(|(_, id)| id.to_string()));
    }
    Ok(Pocket { structure_id: record.structure_id.clone(), residues })
}

pub fn iou(a: &BTreeSet<String>, b: &BTreeSet<String>) -> f64 {
    let inter = a.intersection(b).count();
    let union = a.len() + b.len() - inter;
    if union == 0 {
        return 1.0;
    }
    inter as f64 / union as f64
}

/// Single-linkage clusters at distance `1 - iou` cut at `1 - cutoff`: the
/// connected components of the graph with an edge wherever IoU >= cutoff.
/// Labels follow the first member in input order.
pub fn single_linkage_clusters(pockets: &[Pocket], cutoff: f64) -> Vec<usize> {
    let n = pockets.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in 0..i {
            if iou(&pockets[i].residues, &pockets[j].residues) >= cutoff {
                let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut label = BTreeMap::new();
    (0..n)
        .map(|i| {
            let r = root(&mut parent, i);
            let next = label.len();
            *label.entry(r).or_insert(next)
        })
        .collect()
}

/// Residues present in at least `threshold` of the member pockets.
pub fn consensus_residues(members: &[&Pocket], threshold: f64) -> BTreeSet<String> {
    let need = (threshold * members.len() as f64 - 1e-9).ceil().max(1.0) as usize;
    let mut count: BTreeMap<&str, usize> = BTreeMap::new();
    for p in members {
        for r in &p.residues {
            *count.entry(r.as_str()).or_default() += 1;
        }
    }
    count.into_iter().filter(|(_, c)| *c >= need).map(|(r, _)| r.to_string()).collect()
}

/// Minimum RMSD between matched point sets over rigid motions.
pub fn kabsch_rmsd(a: &[Point], b: &[Point]) -> Result<f64, DatagenError> {
    if a.len() != b.len() {
        return Err(DatagenError::Geometry(format!("point counts differ: {} vs {}", a.len(), b.len())));
    }
    if a.len() < 3 {
        return Err(DatagenError::Geometry("need at least 3 points".into()));
    }
    let to_v = |p: &Point| Vector3::new(p[0], p[1], p[2]);
    let n = a.len() as f64;
    let ca = a.iter().map(to_v).sum::<Vector3<f64>>() / n;
    let cb = b.iter().map(to_v).sum::<Vector3<f64>>() / n;
    let xs: Vec<Vector3<f64>> = a.iter().map(|p| to_v(p) - ca).collect();
    let ys: Vec<Vector3<f64>> = b.iter().map(|q| to_v(q) - cb).collect();
    let h: Matrix3<f64> = xs.iter().zip(&ys).map(|(x, y)| x * y.transpose()).sum();
    let svd = h.svd(true, true);
    let (u, v_t) = (svd.u.unwrap(), svd.v_t.unwrap());
    // flip the weakest axis when the best orthogonal map is a reflection
    let sign = if (u * v_t).determinant() < 0.0 { -1.0 } else { 1.0 };
    let r = v_t.transpose() * Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, sign)) * u.transpose();
    let sum: f64 = xs.iter().zip(&ys).map(|(x, y)| (r * x - y).norm_squared()).sum();
    Ok((sum / n).sqrt())
}

fn consensus_coords(record: &StructureRecord, residues: &BTreeSet<String>) -> Result<Vec<Point>, DatagenError> {
    let mut out = Vec::new();
    for id in residues {
        let r = record.residue(id).filter(|r| !r.atoms.is_empty()).ok_or_else(|| DatagenError::MissingResidueCoordinates {
            structure: record.structure_id.clone(),
            residue: id.clone(),
        })?;
        out.extend(&r.atoms);
    }
    Ok(out)
}

/// Member with the smallest mean Kabsch RMSD to the others over the
/// consensus residues' atoms; ties go to the smaller structure id.
pub fn representative_structure(members: &[&StructureRecord], consensus: &BTreeSet<String>) -> Result<String, DatagenError> {
    let mut members: Vec<&StructureRecord> = members.to_vec();
    members.sort_by(|a, b| a.structure_id.cmp(&b.structure_id));
    if members.len() == 1 {
        return Ok(members[0].structure_id.clone());
    }
    let coords = members.iter().map(|m| consensus_coords(m, consensus)).collect::<Result<Vec<_>, _>>()?;
    let n = members.len();
    let mut total = vec![0.0; n];
    for i in 0..n {
        for j in 0..i {
            let d = kabsch_rmsd(&coords[i], &coords[j])?;
            total[i] += d;
            total[j] += d;
        }
    }
    let best = (0..n).min_by(|&a, &b| total[a].total_cmp(&total[b]).then(a.cmp(&b))).unwrap();
    Ok(members[best].structure_id.clone())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PocketConfig {
    #[serde(default = "default_k")]
    pub k: usize,
    /// Required: no default cutoff.
    pub iou_cutoff: f64,
    #[serde(default = "default_consensus")]
    pub consensus: f64,
}

fn default_k() -> usize {
    3
}

fn default_consensus() -> f64 {
    0.7
}

impl PocketConfig {
    pub fn validate(&self) -> Result<(), DatagenError> {
        if self.k == 0 || !(0.0..=1.0).contains(&self.iou_cutoff) || !(self.consensus > 0.0 && self.consensus <= 1.0) {
            return Err(DatagenError::Config("need k >= 1, iou_cutoff in [0, 1], consensus in (0, 1]".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PocketEntry {
    pub sequence: String,
    pub cluster: usize,
    pub members: Vec<String>,
    pub consensus_residues: Vec<String>,
    pub representative: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IgnoredCluster {
    pub sequence: String,
    pub cluster: usize,
    pub members: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PocketManifest {
    pub schema_version: u32,
    pub config: PocketConfig,
    pub pockets: Vec<PocketEntry>,
    pub ignored: Vec<IgnoredCluster>,
}

/// Filters, contacts, clustering, consensus and representatives for every
/// sequence. Structures are ordered by id first, so input order never matters.
pub fn run_pipeline(records: &[StructureRecord], config: &PocketConfig) -> Result<PocketManifest, DatagenError> {
    config.validate()?;
    let mut groups: BTreeMap<&str, Vec<StructureRecord>> = BTreeMap::new();
    for r in records {
        groups.entry(r.sequence_id.as_str()).or_default().push(r.clone());
    }
    let per_seq = groups
        .into_par_iter()
        .map(|(seq, mut group)| {
            group.sort_by(|a, b| a.structure_id.cmp(&b.structure_id));
            sequence_pockets(seq, &group, config)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut manifest = PocketManifest { schema_version: SCHEMA_VERSION, config: config.clone(), pockets: Vec::new(), ignored: Vec::new() };
    for (entries, ignored) in per_seq {
        manifest.pockets.extend(entries);
        manifest.ignored.extend(ignored);
    }
    Ok(manifest)
}

fn sequence_pockets(
    seq: &str,
    group: &[StructureRecord],
    config: &PocketConfig,
) -> Result<(Vec<PocketEntry>, Vec<IgnoredCluster>), DatagenError> {
    let kept = filter_structures(group);
    let pockets = kept.iter().map(|r| contact_pocket(r, config.k)).collect::<Result<Vec<_>, _>>()?;
    let labels = single_linkage_clusters(&pockets, config.iou_cutoff);
    let n_clusters = labels.iter().max().map_or(0, |m| m + 1);
    let (mut entries, mut ignored) = (Vec::new(), Vec::new());
    for c in 0..n_clusters {
        let idx: Vec<usize> = (0..pockets.len()).filter(|&i| labels[i] == c).collect();
        let member_pockets: Vec<&Pocket> = idx.iter().map(|&i| &pockets[i]).collect();
        let members: Vec<String> = idx.iter().map(|&i| kept[i].structure_id.clone()).collect();
        let consensus = consensus_residues(&member_pockets, config.consensus);
        if consensus.is_empty() {
            ignored.push(IgnoredCluster { sequence: seq.to_string(), cluster: c, members });
            continue;
        }
        let recs: Vec<&StructureRecord> = idx.iter().map(|&i| kept[i]).collect();
        let representative = representative_structure(&recs, &consensus)?;
        entries.push(PocketEntry {
            sequence: seq.to_string(),
            cluster: c,
            members,
            consensus_residues: consensus.into_iter().collect(),
            representative,
        });
    }
    Ok((entries, ignored))
}
