//! Weighted geometric mean of eight asymmetric-sigmoid desirabilities.

use super::tables::{AdsParams, QedTable};
use super::tpsa::TpsaTable;
use super::{crippen, tables::CrippenTable, topology, tpsa, DescriptorError};
use crate::chem::smarts::Target;
use crate::chem::Molecule;

pub(crate) fn desirability(x: f64, p: &AdsParams) -> f64 {
    let exp1 = 1.0 + (-(x - p.c + p.d / 2.0) / p.e).exp();
    let exp2 = 1.0 + (-(x - p.c - p.d / 2.0) / p.f).exp();
    (p.a + p.b / exp1 * (1.0 - 1.0 / exp2)) / p.dmax
}

/// Rings left after deleting aliphatic ring atoms that carry a non-aromatic
/// neighbour: a cheap count of aromatic ring systems.
fn aromatic_ring_estimate(mol: &Molecule, table: &QedTable) -> usize {
    let target = Target::new(mol, false);
    let keep: Vec<bool> = (0..mol.num_atoms()).map(|i| !table.aliphatic_ring_exit.matches_at(&target, i)).collect();
    let atoms = keep.iter().filter(|k| **k).count();
    let bonds = mol.bonds().iter().filter(|b| keep[b.a] && keep[b.b]).count();
    let mut parent: Vec<usize> = (0..mol.num_atoms()).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut components = atoms;
    for b in mol.bonds().iter().filter(|b| keep[b.a] && keep[b.b]) {
        let (x, y) = (root(&mut parent, b.a), root(&mut parent, b.b));
        if x != y {
            parent[x] = y;
            components -= 1;
        }
    }
    (bonds + components).saturating_sub(atoms)
}

/// Raw inputs in table order: MW, ALOGP, HBA, HBD, PSA, ROTB, AROM, ALERTS.
pub(crate) fn properties(
    mol: &Molecule,
    table: &QedTable,
    crippen_table: &CrippenTable,
    tpsa_table: &TpsaTable,
) -> Result<[f64; 8], DescriptorError> {
    let target = Target::new(mol, false);
    let hba: usize = table.acceptors.iter().map(|p| p.count_unique_matches(&target)).sum();
    Ok([
        topology::average_mol_wt(mol),
        crippen::log_p(mol, crippen_table)?,
        hba as f64,
        table.donors.count_unique_matches(&target) as f64,
        tpsa::tpsa(mol, tpsa_table)?,
        table.rotatable.count_unique_matches(&target) as f64,
        aromatic_ring_estimate(mol, table) as f64,
        table.alerts.iter().filter(|a| a.has_match(&target)).count() as f64,
    ])
}

pub(crate) fn qed(
    mol: &Molecule,
    table: &QedTable,
    crippen_table: &CrippenTable,
    tpsa_table: &TpsaTable,
) -> Result<f64, DescriptorError> {
    let values = properties(mol, table, crippen_table, tpsa_table)?;
    let mut weighted = 0.0;
    let mut total_weight = 0.0;
    for ((_, w, params), x) in table.terms.iter().zip(values) {
        weighted += w * desirability(x, params).ln();
        total_weight += w;
    }
    Ok((weighted / total_weight).exp().clamp(0.0, 1.0))
}
