//! Counting descriptors, masses and the Hall-Kier shape indices.

use std::collections::{BTreeMap, BTreeSet};

use super::hybrid::{hybridizations, Hybridization};
use super::tables::HallKierTable;
use super::DescriptorError;
use crate::chem::{BondOrder, Element, Molecule};

const H_MONOISOTOPIC: f64 = 1.007_825_032;
const H_AVERAGE: f64 = 1.008;
const CARBON_RADIUS: f64 = 0.77;

pub(crate) fn exact_mol_wt(mol: &Molecule) -> f64 {
    (0..mol.num_atoms())
        .map(|i| {
            let a = mol.atom(i);
            let own = match a.isotope {
                Some(m) => a.element.isotope_mass(m),
                None => a.element.monoisotopic_mass(),
            };
            own + mol.h_count(i) as f64 * H_MONOISOTOPIC
        })
        .sum()
}

pub(crate) fn average_mol_wt(mol: &Molecule) -> f64 {
    (0..mol.num_atoms())
        .map(|i| {
            let a = mol.atom(i);
            let own = match a.isotope {
                Some(m) => a.element.isotope_mass(m),
                None => a.element.average_mass(),
            };
            own + mol.h_count(i) as f64 * H_AVERAGE
        })
        .sum()
}

fn is_n_or_o(mol: &Molecule, i: usize) -> bool {
    matches!(mol.atom(i).element, Element::N | Element::O)
}

pub(crate) fn num_hba(mol: &Molecule) -> usize {
    (0..mol.num_atoms()).filter(|&i| is_n_or_o(mol, i)).count()
}

pub(crate) fn num_hbd(mol: &Molecule) -> usize {
    (0..mol.num_atoms()).filter(|&i| is_n_or_o(mol, i) && mol.h_count(i) > 0).count()
}

fn heavy_degree(mol: &Molecule, i: usize) -> usize {
    mol.neighbors(i).iter().filter(|&&(w, _)| mol.atom(w).element != Element::H).count()
}

fn is_amide_cn(mol: &Molecule, c: usize, n: usize) -> bool {
    mol.atom(c).element == Element::C
        && mol.atom(n).element == Element::N
        && mol.neighbors(c).iter().any(|&(w, b)| {
            mol.atom(w).element == Element::O && mol.bonds()[b].order == BondOrder::Double
        })
}

pub(crate) fn num_rotatable_bonds(mol: &Molecule) -> usize {
    (0..mol.num_bonds())
        .filter(|&b| {
            let bond = mol.bonds()[b];
            let (x, y) = (bond.a, bond.b);
            bond.order == BondOrder::Single
                && !mol.bond_in_ring(b)
                && mol.atom(x).element != Element::H
                && mol.atom(y).element != Element::H
                && heavy_degree(mol, x) >= 2
                && heavy_degree(mol, y) >= 2
                && !is_amide_cn(mol, x, y)
                && !is_amide_cn(mol, y, x)
        })
        .count()
}

/// Bonds of a ring given as a cyclic atom sequence.
pub(crate) fn ring_bonds(mol: &Molecule, ring: &[usize]) -> Vec<usize> {
    (0..ring.len())
        .filter_map(|k| mol.bond_between(ring[k], ring[(k + 1) % ring.len()]))
        .collect()
}

pub(crate) fn num_aromatic_rings(mol: &Molecule) -> usize {
    mol.rings()
        .iter()
        .filter(|r| ring_bonds(mol, r).iter().all(|&b| mol.bonds()[b].order == BondOrder::Aromatic))
        .count()
}

pub(crate) fn fraction_csp3(mol: &Molecule) -> f64 {
    let hyb = hybridizations(mol);
    let carbons: Vec<usize> = (0..mol.num_atoms()).filter(|&i| mol.atom(i).element == Element::C).collect();
    if carbons.is_empty() {
        return 0.0;
    }
    let sp3 = carbons.iter().filter(|&&i| hyb[i] == Hybridization::Sp3).count();
    sp3 as f64 / carbons.len() as f64
}

fn heavy_atoms(mol: &Molecule) -> Vec<usize> {
    (0..mol.num_atoms()).filter(|&i| mol.atom(i).element != Element::H).collect()
}

pub(crate) fn hall_kier_alpha(mol: &Molecule, table: &HallKierTable) -> Result<f64, DescriptorError> {
    let hyb = hybridizations(mol);
    let mut alpha = 0.0;
    for i in heavy_atoms(mol) {
        let e = mol.atom(i).element;
        let tabled = table.alphas.get(e.symbol()).and_then(|a| {
            let last = a.sp3.or(a.sp2).or(a.sp);
            match hyb[i] {
                Hybridization::Sp => a.sp.or(last),
                Hybridization::Sp2 => a.sp2.or(last),
                _ => last,
            }
        });
        alpha += match tabled {
            Some(v) => v,
            None => {
                let r = table
                    .radius(e)
                    .ok_or(DescriptorError::UnsupportedAtomType { property: "HallKierAlpha", atom: i })?;
                r / CARBON_RADIUS - 1.0
            }
        };
    }
    Ok(alpha)
}

fn kappa(a: f64, paths: f64, alpha: f64, order: u32) -> f64 {
    let denom = paths + alpha;
    if denom == 0.0 {
        return 0.0;
    }
    let (x, y) = match order {
        1 => (a + alpha, a + alpha - 1.0),
        _ => (a + alpha - 1.0, a + alpha - 2.0),
    };
    x * y * y / (denom * denom)
}

pub(crate) fn phi(mol: &Molecule, table: &HallKierTable) -> Result<f64, DescriptorError> {
    let heavy = heavy_atoms(mol);
    if heavy.is_empty() {
        return Ok(0.0);
    }
    let alpha = hall_kier_alpha(mol, table)?;
    let a = heavy.len() as f64;
    let p1 = heavy.iter().map(|&i| heavy_degree(mol, i)).sum::<usize>() / 2;
    let p2: usize = heavy.iter().map(|&i| heavy_degree(mol, i)).map(|d| d * d.saturating_sub(1) / 2).sum();
    Ok(kappa(a, p1 as f64, alpha, 1) * kappa(a, p2 as f64, alpha, 2) / a)
}

/// Potential stereocentres: tetrahedral-capable atoms whose neighbours
/// (implicit H counted once) all fall in distinct symmetry classes.
pub(crate) fn stereocentre_count(mol: &Molecule) -> usize {
    let classes = mol.symmetry_classes();
    (0..mol.num_atoms())
        .filter(|&i| {
            let a = mol.atom(i);
            let h = mol.h_count(i) as usize;
            let connections = mol.degree(i) + h;
            let has_double = mol.neighbors(i).iter().any(|&(_, b)| mol.bonds()[b].order == BondOrder::Double);
            let shaped = match (a.element, a.charge) {
                (Element::C | Element::Si, 0) => connections == 4 && !has_double,
                (Element::N | Element::P, 1) => connections == 4 && !has_double,
                (Element::N, 0) => connections == 3 && h == 0 && mol.rings().iter().any(|r| r.len() == 3 && r.contains(&i)),
                (Element::P, 0) => (connections == 3 && h == 0) || connections == 4,
                (Element::S | Element::Se, 0) => connections == 3 && has_double,
                (Element::S | Element::Se, 1) => connections == 3 && !has_double,
                _ => false,
            };
            if !shaped || h > 1 || a.aromatic {
                return false;
            }
            let mut seen = BTreeSet::new();
            mol.neighbors(i).iter().all(|&(w, _)| seen.insert(classes[w]))
        })
        .count()
}

/// Atoms shared by exactly one atom between two smallest rings.
pub(crate) fn spiro_count(mol: &Molecule) -> usize {
    let rings = mol.rings();
    let mut spiro = BTreeSet::new();
    for (k, r) in rings.iter().enumerate() {
        for s in &rings[k + 1..] {
            let shared: Vec<usize> = r.iter().copied().filter(|x| s.contains(x)).collect();
            if shared.len() == 1 {
                spiro.insert(shared[0]);
            }
        }
    }
    spiro.len()
}

/// Ring pairs sharing more than one bond contribute the ends of their
/// shared path as bridgeheads.
pub(crate) fn bridgehead_count(mol: &Molecule) -> usize {
    let bond_rings: Vec<Vec<usize>> = mol.rings().iter().map(|r| ring_bonds(mol, r)).collect();
    let mut heads = BTreeSet::new();
    for (k, r) in bond_rings.iter().enumerate() {
        for s in &bond_rings[k + 1..] {
            let shared: Vec<usize> = r.iter().copied().filter(|x| s.contains(x)).collect();
            if shared.len() <= 1 {
                continue;
            }
            let mut occurrences: BTreeMap<usize, usize> = BTreeMap::new();
            for &b in &shared {
                let bond = mol.bonds()[b];
                *occurrences.entry(bond.a).or_default() += 1;
                *occurrences.entry(bond.b).or_default() += 1;
            }
            heads.extend(occurrences.into_iter().filter(|&(_, c)| c == 1).map(|(a, _)| a));
        }
    }
    heads.len()
}
