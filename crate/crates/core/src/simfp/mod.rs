//! Circular (ECFP-style) fingerprints and Tanimoto similarity.
//!
//! Atom identifiers start from connectivity invariants (element, total
//! degree, hydrogens, charge, isotope shift, ring membership) and are
//! refined once per radius from the sorted (bond type, neighbour id) list.
//! An environment whose bond set duplicates one already seen is dropped and
//! its atom stops growing. Identifiers are 64-bit (splitmix64 finalizer
//! over a hash_combine chain) and folded into the bitset by masking.

mod cache;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::chem::{BondOrder, Molecule};

pub use cache::FingerprintCache;

pub const DEFAULT_RADIUS: u32 = 2;
pub const DEFAULT_BITS: usize = 2048;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FingerprintError {
    #[error("molecule is not valid")]
    InvalidMolecule,
    #[error("fingerprint sizes differ: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("n_bits must be a power of two, got {0}")]
    BadSize(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fingerprint {
    words: Vec<u64>,
    n_bits: usize,
    radius: u32,
}

impl Fingerprint {
    pub fn empty(n_bits: usize, radius: u32) -> Result<Fingerprint, FingerprintError> {
        if !n_bits.is_power_of_two() {
            return Err(FingerprintError::BadSize(n_bits));
        }
        Ok(Fingerprint { words: vec![0; n_bits.div_ceil(64)], n_bits, radius })
    }

    pub fn from_bits(n_bits: usize, bits: &[usize]) -> Result<Fingerprint, FingerprintError> {
        let mut fp = Fingerprint::empty(n_bits, DEFAULT_RADIUS)?;
        for &b in bits {
            fp.set(b % n_bits);
        }
        Ok(fp)
    }

    pub fn n_bits(&self) -> usize {
        self.n_bits
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn set(&mut self, bit: usize) {
        self.words[bit / 64] |= 1 << (bit % 64);
    }

    pub fn get(&self, bit: usize) -> bool {
        self.words[bit / 64] >> (bit % 64) & 1 == 1
    }

    pub fn count_ones(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    pub fn on_bits(&self) -> Vec<usize> {
        (0..self.n_bits).filter(|&b| self.get(b)).collect()
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn to_hex(&self) -> String {
        self.words.iter().map(|w| format!("{w:016x}")).collect()
    }

    pub fn from_hex(hex: &str, radius: u32) -> Option<Fingerprint> {
        if !hex.len().is_multiple_of(16) || hex.is_empty() {
            return None;
        }
        let words = (0..hex.len() / 16)
            .map(|i| u64::from_str_radix(hex.get(i * 16..i * 16 + 16)?, 16).ok())
            .collect::<Option<Vec<u64>>>()?;
        let n_bits = words.len() * 64;
        Some(Fingerprint { words, n_bits, radius })
    }
}

/// Combines identifier components into a running hash.
pub(crate) trait IdHash {
    type Id: Copy + Ord;
    fn combine(seed: Self::Id, value: Self::Id) -> Self::Id;
    fn from_u32(v: u32) -> Self::Id;

    fn hash_slice(values: &[Self::Id]) -> Self::Id {
        values.iter().fold(Self::from_u32(0), |s, &v| Self::combine(s, v))
    }
}

/// 32-bit boost-style `hash_combine`; reproduces the widely used Morgan
/// identifiers that published fragment-score tables are keyed by.
pub(crate) struct Boost32;

impl IdHash for Boost32 {
    type Id = u32;
    fn combine(seed: u32, value: u32) -> u32 {
        seed ^ value.wrapping_add(0x9e37_79b9).wrapping_add(seed << 6).wrapping_add(seed >> 2)
    }
    fn from_u32(v: u32) -> u32 {
        v
    }
}

/// 64-bit mix: `hash_combine` with the golden-ratio constant, then a
/// splitmix64 finalizer on every step.
pub(crate) struct Mix64;

fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl IdHash for Mix64 {
    type Id = u64;
    fn combine(seed: u64, value: u64) -> u64 {
        splitmix64(seed ^ value.wrapping_add(0x9e37_79b9_7f4a_7c15).wrapping_add(seed << 6).wrapping_add(seed >> 2))
    }
    fn from_u32(v: u32) -> u64 {
        v as u64
    }
}

fn bond_type_code(order: BondOrder) -> u32 {
    match order {
        BondOrder::Single => 1,
        BondOrder::Double => 2,
        BondOrder::Triple => 3,
        BondOrder::Aromatic => 12,
    }
}

fn atom_invariant<H: IdHash>(mol: &Molecule, i: usize) -> H::Id {
    let atom = mol.atom(i);
    let h = mol.h_count(i) as u32;
    let delta_mass = match atom.isotope {
        Some(m) => (atom.element.isotope_mass(m) - atom.element.average_mass()) as i32,
        None => 0,
    };
    let mut parts = vec![
        H::from_u32(atom.element.atomic_number() as u32),
        H::from_u32(mol.degree(i) as u32 + h),
        H::from_u32(h),
        H::from_u32(atom.charge as i32 as u32),
        H::from_u32(delta_mass as u32),
    ];
    if mol.atom_in_ring(i) {
        parts.push(H::from_u32(1));
    }
    H::hash_slice(&parts)
}

/// Identifier counts of every retained circular environment up to `radius`.
pub(crate) fn environment_counts<H: IdHash>(mol: &Molecule, radius: u32) -> BTreeMap<H::Id, u32> {
    let n = mol.num_atoms();
    let words = mol.num_bonds().div_ceil(64).max(1);
    let mut counts: BTreeMap<H::Id, u32> = BTreeMap::new();
    let mut current: Vec<H::Id> = (0..n).map(|i| atom_invariant::<H>(mol, i)).collect();
    for &id in &current {
        *counts.entry(id).or_default() += 1;
    }
    let mut neighborhoods: Vec<Vec<u64>> = vec![vec![0; words]; n];
    let mut dead = vec![false; n];
    let mut seen: Vec<Vec<u64>> = Vec::new();
    for layer in 0..radius {
        let previous = current.clone();
        let mut next_hoods = neighborhoods.clone();
        let mut round: Vec<(Vec<u64>, H::Id, usize)> = Vec::new();
        for i in 0..n {
            if dead[i] || mol.degree(i) == 0 {
                dead[i] = true;
                continue;
            }
            let mut hood = neighborhoods[i].clone();
            let mut nbrs: Vec<(u32, H::Id)> = Vec::new();
            for &(w, b) in mol.neighbors(i) {
                for (x, y) in hood.iter_mut().zip(&neighborhoods[w]) {
                    *x |= y;
                }
                hood[b / 64] |= 1 << (b % 64);
                nbrs.push((bond_type_code(mol.bonds()[b].order), previous[w]));
            }
            nbrs.sort();
            let mut id = H::combine(H::from_u32(layer), previous[i]);
            for (bt, nid) in nbrs {
                let pair = H::combine(H::combine(H::from_u32(0), H::from_u32(bt)), nid);
                id = H::combine(id, pair);
            }
            current[i] = id;
            next_hoods[i] = hood.clone();
            round.push((hood, id, i));
        }
        round.sort();
        for (hood, id, i) in round {
            if seen.contains(&hood) {
                dead[i] = true;
            } else {
                *counts.entry(id).or_default() += 1;
                seen.push(hood);
            }
        }
        neighborhoods = next_hoods;
    }
    counts
}

pub fn ecfp(mol: &Molecule, radius: u32, n_bits: usize) -> Result<Fingerprint, FingerprintError> {
    if !mol.is_valid() {
        return Err(FingerprintError::InvalidMolecule);
    }
    let mut fp = Fingerprint::empty(n_bits, radius)?;
    for id in environment_counts::<Mix64>(mol, radius).keys() {
        fp.set((*id as usize) & (n_bits - 1));
    }
    Ok(fp)
}

pub fn tanimoto(a: &Fingerprint, b: &Fingerprint) -> Result<f64, FingerprintError> {
    if a.n_bits != b.n_bits {
        return Err(FingerprintError::SizeMismatch(a.n_bits, b.n_bits));
    }
    let (mut both, mut either) = (0u32, 0u32);
    for (x, y) in a.words.iter().zip(&b.words) {
        both += (x & y).count_ones();
        either += (x | y).count_ones();
    }
    if either == 0 {
        return Ok(1.0);
    }
    Ok(both as f64 / either as f64)
}
