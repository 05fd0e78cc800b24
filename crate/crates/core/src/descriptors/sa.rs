//! Synthetic accessibility: mean fragment score minus size, stereo, ring
//! complexity and macrocycle penalties, rescaled onto [1, 10].

use super::tables::SaTable;
use super::topology;
use crate::chem::Molecule;
use crate::simfp::{environment_counts, Boost32};

pub(crate) fn sa_score(mol: &Molecule, table: &SaTable) -> f64 {
    let counts = environment_counts::<Boost32>(mol, 2);
    let fragment = match &table.fragments {
        Some(scores) => {
            let (mut sum, mut n) = (0.0, 0u32);
            for (&id, &c) in &counts {
                sum += scores.get(id).unwrap_or(table.missing_score) * c as f64;
                n += c;
            }
            if n == 0 {
                0.0
            } else {
                sum / n as f64
            }
        }
        None => 0.0,
    };

    let n_atoms = mol.num_atoms() as f64;
    let log_plus_one = |k: usize| (k as f64 + 1.0).log10();
    let macrocycle = mol.rings().iter().any(|r| r.len() > table.macrocycle_size);
    let complexity = -(n_atoms.powf(1.005) - n_atoms)
        - log_plus_one(topology::stereocentre_count(mol))
        - log_plus_one(topology::spiro_count(mol))
        - log_plus_one(topology::bridgehead_count(mol))
        - if macrocycle { 2f64.log10() } else { 0.0 };
    let distinct = counts.len() as f64;
    let symmetry = if n_atoms > distinct && distinct > 0.0 { 0.5 * (n_atoms / distinct).ln() } else { 0.0 };

    let raw = fragment + complexity + symmetry;
    let mut s = 11.0 - (raw - table.min_raw + 1.0) / (table.max_raw - table.min_raw) * 9.0;
    if s > 8.0 {
        s = 8.0 + (s + 1.0 - 9.0).ln();
    }
    s.clamp(1.0, 10.0)
}
