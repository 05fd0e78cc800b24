//! Atom-typed logP: every atom, hydrogens included, takes the contribution
//! of the first pattern in table order that matches it.

use super::tables::CrippenTable;
use super::DescriptorError;
use crate::chem::smarts::Target;
use crate::chem::Molecule;

pub(crate) fn log_p(mol: &Molecule, table: &CrippenTable) -> Result<f64, DescriptorError> {
    let target = Target::new(mol, true);
    let mut total = 0.0;
    for atom in 0..target.num_atoms() {
        let (_, _, value) = table
            .rules
            .iter()
            .find(|(_, p, _)| p.matches_at(&target, atom))
            .ok_or(DescriptorError::UnsupportedAtomType { property: "logP", atom: atom.min(mol.num_atoms()) })?;
        total += value;
    }
    Ok(total)
}
