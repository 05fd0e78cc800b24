//! Physicochemical window filter for generated drug-like molecules.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{compute, DescriptorError, ParameterTables, PropertyId};
use crate::chem::Molecule;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterRow {
    pub property: PropertyId,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterLimits {
    pub rows: Vec<FilterRow>,
}

impl Default for FilterLimits {
    fn default() -> FilterLimits {
        let row = |property, min, max| FilterRow { property, min, max };
        FilterLimits {
            rows: vec![
                row(PropertyId::QED, 0.30, 1.00),
                row(PropertyId::ExactMolWt, 0.0, 600.0),
                row(PropertyId::TPSA, 0.0, 160.0),
                row(PropertyId::NumHBA, 0.0, 10.0),
                row(PropertyId::NumHBD, 0.0, 10.0),
                row(PropertyId::NumRotatableBonds, 1.0, 10.0),
                row(PropertyId::NumAromaticRings, 0.0, 6.0),
            ],
        }
    }
}

pub type FilterValues = BTreeMap<PropertyId, f64>;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FilterFailure {
    pub property: PropertyId,
    pub value: f64,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FilterVerdict {
    pub passes: bool,
    pub failures: Vec<FilterFailure>,
}

impl FilterLimits {
    pub fn row_passes(row: &FilterRow, value: f64) -> bool {
        value >= row.min && value <= row.max
    }

    /// Evaluate every row against precomputed values; a row whose value is
    /// absent counts as failed with NaN.
    pub fn check(&self, values: &FilterValues) -> FilterVerdict {
        let failures: Vec<FilterFailure> = self
            .rows
            .iter()
            .filter_map(|row| {
                let value = values.get(&row.property).copied().unwrap_or(f64::NAN);
                (!FilterLimits::row_passes(row, value)).then_some(FilterFailure {
                    property: row.property,
                    value,
                    min: row.min,
                    max: row.max,
                })
            })
            .collect();
        FilterVerdict { passes: failures.is_empty(), failures }
    }
}

pub fn passes_filters(
    mol: &Molecule,
    limits: &FilterLimits,
    tables: &ParameterTables,
) -> Result<FilterVerdict, DescriptorError> {
    let mut values = FilterValues::new();
    for row in &limits.rows {
        if let std::collections::btree_map::Entry::Vacant(e) = values.entry(row.property) {
            e.insert(compute(mol, row.property, tables)?);
        }
    }
    Ok(limits.check(&values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chem::parse_smiles;

    #[test]
    fn benzene_fails_rotatable_bonds_only() {
        let m = parse_smiles("c1ccccc1").unwrap();
        let v = passes_filters(&m, &FilterLimits::default(), ParameterTables::bundled()).unwrap();
        assert!(!v.passes);
        assert_eq!(v.failures.len(), 1);
        assert_eq!(v.failures[0].property, PropertyId::NumRotatableBonds);
    }

    #[test]
    fn heavy_molecule_fails_mass_row() {
        let limits = FilterLimits::default();
        let mut values: FilterValues = limits.rows.iter().map(|r| (r.property, r.min.max(0.5))).collect();
        assert!(limits.check(&values).passes);
        values.insert(PropertyId::ExactMolWt, 601.0);
        let v = limits.check(&values);
        assert_eq!(v.failures.iter().map(|f| f.property).collect::<Vec<_>>(), vec![PropertyId::ExactMolWt]);
    }

    #[test]
    fn drug_like_molecule_passes() {
        // paracetamol
        let m = parse_smiles("CC(=O)Nc1ccc(O)cc1").unwrap();
        let v = passes_filters(&m, &FilterLimits::default(), ParameterTables::bundled()).unwrap();
        assert!(v.passes, "{v:?}");
    }
}
