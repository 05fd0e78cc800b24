//! Topological polar surface area from N/O environment contributions.

use serde::Deserialize;

use super::DescriptorError;
use crate::chem::{BondOrder, Element, Molecule};

#[derive(Debug, Clone, Deserialize)]
pub struct TpsaRule {
    pub element: String,
    pub charge: i8,
    pub degree: usize,
    pub h: u8,
    pub single: usize,
    pub double: usize,
    pub triple: usize,
    pub aromatic: usize,
    /// `None` matches either way
    pub in_3ring: Option<bool>,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
pub struct TpsaFallback {
    pub base: f64,
    pub per_neighbor: f64,
    pub per_h: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct TpsaTable {
    pub rules: Vec<TpsaRule>,
    pub fallback: std::collections::BTreeMap<String, TpsaFallback>,
}

pub(crate) fn tpsa(mol: &Molecule, table: &TpsaTable) -> Result<f64, DescriptorError> {
    let mut total = 0.0;
    for i in 0..mol.num_atoms() {
        let atom = mol.atom(i);
        if !matches!(atom.element, Element::N | Element::O) {
            continue;
        }
        let symbol = atom.element.symbol();
        let mut counts = [0usize; 4];
        for &(_, b) in mol.neighbors(i) {
            let k = match mol.bonds()[b].order {
                BondOrder::Single => 0,
                BondOrder::Double => 1,
                BondOrder::Triple => 2,
                BondOrder::Aromatic => 3,
            };
            counts[k] += 1;
        }
        let degree = mol.degree(i);
        let h = mol.h_count(i);
        let in_3ring = mol.rings().iter().any(|r| r.len() == 3 && r.contains(&i));
        let rule = table.rules.iter().find(|r| {
            r.element == symbol
                && r.charge == atom.charge
                && r.degree == degree
                && r.h == h
                && [r.single, r.double, r.triple, r.aromatic] == counts
                && r.in_3ring.is_none_or(|x| x == in_3ring)
        });
        total += match rule {
            Some(r) => r.value,
            None => {
                let f = table
                    .fallback
                    .get(symbol)
                    .ok_or(DescriptorError::UnsupportedAtomType { property: "TPSA", atom: i })?;
                (f.base - f.per_neighbor * degree as f64 + f.per_h * h as f64).max(0.0)
            }
        };
    }
    Ok(total)
}
