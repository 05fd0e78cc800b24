//! Classical molecular properties, their [0, 1] normalization, the
//! drug-likeness filter and the Beta log-density score.

mod beta;
mod crippen;
mod docking;
mod filters;
mod hybrid;
mod normalize;
mod qed;
mod sa;
pub mod tables;
mod topology;
mod tpsa;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use beta::{beta_log_prob, BetaShape, DomainError};
pub use docking::{DockingError, DockingTable};
pub use filters::{passes_filters, FilterFailure, FilterLimits, FilterRow, FilterValues, FilterVerdict};
pub use hybrid::Hybridization;
pub use normalize::{normalize, NormalizationSpec};
pub use tables::{ParameterTables, TableError};
pub use tpsa::{TpsaFallback, TpsaRule, TpsaTable};

use crate::chem::Molecule;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PropertyId {
    SA,
    QED,
    ExactMolWt,
    NumAromaticRings,
    NumHBA,
    NumHBD,
    NumRotatableBonds,
    FractionCSP3,
    TPSA,
    HallKierAlpha,
    Phi,
    #[serde(rename = "logP")]
    LogP,
    DockingLookup,
}

impl PropertyId {
    pub const ALL: [PropertyId; 13] = [
        PropertyId::SA,
        PropertyId::QED,
        PropertyId::ExactMolWt,
        PropertyId::NumAromaticRings,
        PropertyId::NumHBA,
        PropertyId::NumHBD,
        PropertyId::NumRotatableBonds,
        PropertyId::FractionCSP3,
        PropertyId::TPSA,
        PropertyId::HallKierAlpha,
        PropertyId::Phi,
        PropertyId::LogP,
        PropertyId::DockingLookup,
    ];

    /// The twelve properties computed from the structure alone.
    pub const COMPUTED: [PropertyId; 12] = [
        PropertyId::SA,
        PropertyId::QED,
        PropertyId::ExactMolWt,
        PropertyId::NumAromaticRings,
        PropertyId::NumHBA,
        PropertyId::NumHBD,
        PropertyId::NumRotatableBonds,
        PropertyId::FractionCSP3,
        PropertyId::TPSA,
        PropertyId::HallKierAlpha,
        PropertyId::Phi,
        PropertyId::LogP,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PropertyId::SA => "SA",
            PropertyId::QED => "QED",
            PropertyId::ExactMolWt => "ExactMolWt",
            PropertyId::NumAromaticRings => "NumAromaticRings",
            PropertyId::NumHBA => "NumHBA",
            PropertyId::NumHBD => "NumHBD",
            PropertyId::NumRotatableBonds => "NumRotatableBonds",
            PropertyId::FractionCSP3 => "FractionCSP3",
            PropertyId::TPSA => "TPSA",
            PropertyId::HallKierAlpha => "HallKierAlpha",
            PropertyId::Phi => "Phi",
            PropertyId::LogP => "logP",
            PropertyId::DockingLookup => "DockingLookup",
        }
    }

    pub fn from_name(name: &str) -> Option<PropertyId> {
        PropertyId::ALL.into_iter().find(|p| p.name() == name)
    }

    pub fn is_count(self) -> bool {
        matches!(
            self,
            PropertyId::NumAromaticRings | PropertyId::NumHBA | PropertyId::NumHBD | PropertyId::NumRotatableBonds
        )
    }
}

impl fmt::Display for PropertyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DescriptorError {
    #[error("molecule is not chemically valid")]
    InvalidMolecule,
    #[error("{property}: no contribution entry for atom {atom}")]
    UnsupportedAtomType { property: &'static str, atom: usize },
    #[error("parameter table {0} is not loaded")]
    TableMissing(&'static str),
    #[error("DockingLookup is externally valued; use a DockingTable")]
    ExternalProperty,
}

pub fn compute(mol: &Molecule, prop: PropertyId, tables: &ParameterTables) -> Result<f64, DescriptorError> {
    if !mol.is_valid() {
        return Err(DescriptorError::InvalidMolecule);
    }
    Ok(match prop {
        PropertyId::ExactMolWt => topology::exact_mol_wt(mol),
        PropertyId::NumAromaticRings => topology::num_aromatic_rings(mol) as f64,
        PropertyId::NumHBA => topology::num_hba(mol) as f64,
        PropertyId::NumHBD => topology::num_hbd(mol) as f64,
        PropertyId::NumRotatableBonds => topology::num_rotatable_bonds(mol) as f64,
        PropertyId::FractionCSP3 => topology::fraction_csp3(mol),
        PropertyId::TPSA => tpsa::tpsa(mol, tables.tpsa.as_ref().ok_or(DescriptorError::TableMissing("tpsa"))?)?,
        PropertyId::HallKierAlpha => {
            topology::hall_kier_alpha(mol, tables.hall_kier.as_ref().ok_or(DescriptorError::TableMissing("hall_kier"))?)?
        }
        PropertyId::Phi => topology::phi(mol, tables.hall_kier.as_ref().ok_or(DescriptorError::TableMissing("hall_kier"))?)?,
        PropertyId::LogP => crippen::log_p(mol, tables.crippen.as_ref().ok_or(DescriptorError::TableMissing("crippen"))?)?,
        PropertyId::QED => qed::qed(
            mol,
            tables.qed.as_ref().ok_or(DescriptorError::TableMissing("qed"))?,
            tables.crippen.as_ref().ok_or(DescriptorError::TableMissing("crippen"))?,
            tables.tpsa.as_ref().ok_or(DescriptorError::TableMissing("tpsa"))?,
        )?,
        PropertyId::SA => sa::sa_score(mol, tables.sa.as_ref().ok_or(DescriptorError::TableMissing("sa"))?),
        PropertyId::DockingLookup => return Err(DescriptorError::ExternalProperty),
    })
}

/// Raw value and its normalized image under the tables' map for `prop`.
pub fn compute_normalized(
    mol: &Molecule,
    prop: PropertyId,
    tables: &ParameterTables,
) -> Result<(f64, f64), DescriptorError> {
    let raw = compute(mol, prop, tables)?;
    let spec = tables.normalization_for(prop).ok_or(DescriptorError::TableMissing("normalization"))?;
    Ok((raw, normalize(raw, spec)))
}
