//! Bond conjugation and orbital hybridization from valence-shell counts.

use crate::chem::{BondOrder, Element, Molecule};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hybridization {
    S,
    Sp,
    Sp2,
    Sp3,
    Sp3d,
    Sp3d2,
    Other,
}

pub(crate) fn outer_electrons(e: Element) -> i32 {
    match e {
        Element::H | Element::Li | Element::Na | Element::K => 1,
        Element::Mg | Element::Ca | Element::Zn => 2,
        Element::B => 3,
        Element::C | Element::Si => 4,
        Element::N | Element::P => 5,
        Element::O | Element::S | Element::Se => 6,
        Element::F | Element::Cl | Element::Br | Element::I => 7,
        Element::Fe => 8,
    }
}

/// Second-row atoms that can carry a p orbital into a conjugated system.
fn conjugation_candidate(mol: &Molecule, i: usize) -> bool {
    let e = mol.atom(i).element;
    e.atomic_number() <= 10 && matches!(outer_electrons(e), 4..=6)
}

fn steric_count(mol: &Molecule, i: usize) -> usize {
    mol.degree(i) + mol.h_count(i) as usize
}

pub(crate) fn conjugated_bonds(mol: &Molecule) -> Vec<bool> {
    let mut conj: Vec<bool> = mol.bonds().iter().map(|b| b.order == BondOrder::Aromatic).collect();
    for i in 0..mol.num_atoms() {
        if !conjugation_candidate(mol, i) || !(2..=3).contains(&steric_count(mol, i)) {
            continue;
        }
        for &(_, b1) in mol.neighbors(i) {
            if mol.bonds()[b1].order == BondOrder::Single {
                continue;
            }
            for &(w, b2) in mol.neighbors(i) {
                if b2 != b1 && steric_count(mol, w) <= 3 && conjugation_candidate(mol, w) {
                    conj[b1] = true;
                    conj[b2] = true;
                }
            }
        }
    }
    conj
}

pub(crate) fn hybridizations(mol: &Molecule) -> Vec<Hybridization> {
    let conj = conjugated_bonds(mol);
    (0..mol.num_atoms())
        .map(|i| {
            let atom = mol.atom(i);
            let free = outer_electrons(atom.element) - (mol.valence(i) as i32 + atom.charge as i32);
            let lone_pairs = free / 2;
            let heavy = mol.degree(i);
            match steric_count(mol, i) as i32 + lone_pairs {
                0 | 1 => Hybridization::S,
                2 => Hybridization::Sp,
                3 => Hybridization::Sp2,
                4 => {
                    let conjugated = mol.neighbors(i).iter().any(|&(_, b)| conj[b]);
                    if conjugated && (1..=3).contains(&heavy) {
                        Hybridization::Sp2
                    } else {
                        Hybridization::Sp3
                    }
                }
                5 => Hybridization::Sp3d,
                6 => Hybridization::Sp3d2,
                _ => Hybridization::Other,
            }
        })
        .collect()
}
