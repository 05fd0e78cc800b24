//! Molecular graphs from SMILES: parsing, valence model, ring and
//! aromaticity perception, canonical serialization.

mod aromatic;
mod canon;
pub mod element;
mod parse;
mod rings;
pub mod smarts;

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

pub use canon::write_smiles;
pub use element::Element;
use parse::{RawGraph, RawOrder};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BondOrder {
    Single,
    Double,
    Triple,
    Aromatic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub element: Element,
    pub charge: i8,
    pub aromatic: bool,
    pub isotope: Option<u16>,
    /// Hydrogen count written inside brackets; `None` for organic-subset atoms.
    pub explicit_h: Option<u8>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bond {
    pub a: usize,
    pub b: usize,
    pub order: BondOrder,
}

impl Bond {
    pub fn other(&self, atom: usize) -> usize {
        if self.a == atom {
            self.b
        } else {
            self.a
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SyntaxKind {
    UnbalancedParenthesis,
    UnclosedRing,
    UnknownSymbol,
    UnsupportedElement,
    UnsupportedBond,
    InvalidBracketAtom,
    UnclosedBracket,
    ChargeOutOfRange,
    DanglingBond,
    EmptyBranch,
    MisplacedBranch,
    MisplacedRingClosure,
    ConflictingRingBond,
    SelfBond,
    DuplicateBond,
}

impl fmt::Display for SyntaxKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SyntaxKind::UnbalancedParenthesis => "unbalanced parenthesis",
            SyntaxKind::UnclosedRing => "unclosed ring",
            SyntaxKind::UnknownSymbol => "unknown symbol",
            SyntaxKind::UnsupportedElement => "unsupported element",
            SyntaxKind::UnsupportedBond => "unsupported bond symbol",
            SyntaxKind::InvalidBracketAtom => "invalid bracket atom",
            SyntaxKind::UnclosedBracket => "unclosed bracket",
            SyntaxKind::ChargeOutOfRange => "charge out of range",
            SyntaxKind::DanglingBond => "dangling bond",
            SyntaxKind::EmptyBranch => "empty branch",
            SyntaxKind::MisplacedBranch => "misplaced branch",
            SyntaxKind::MisplacedRingClosure => "misplaced ring closure",
            SyntaxKind::ConflictingRingBond => "conflicting ring-closure bond orders",
            SyntaxKind::SelfBond => "ring closure to the same atom",
            SyntaxKind::DuplicateBond => "duplicate bond",
        };
        f.write_str(s)
    }
}

/// Why a parsed molecule is chemically invalid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InvalidReason {
    Valence { atom: usize },
    AromaticOutsideRing { atom: usize },
    Kekulization { atom: usize },
    NotAromatic { atom: usize },
}

impl InvalidReason {
    pub fn is_valence(&self) -> bool {
        matches!(self, InvalidReason::Valence { .. })
    }

    pub fn is_aromaticity(&self) -> bool {
        !self.is_valence()
    }
}

impl fmt::Display for InvalidReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvalidReason::Valence { atom } => write!(f, "valence violation at atom {atom}"),
            InvalidReason::AromaticOutsideRing { atom } => write!(f, "aromatic atom {atom} outside any ring"),
            InvalidReason::Kekulization { atom } => write!(f, "aromatic system at atom {atom} cannot be kekulized"),
            InvalidReason::NotAromatic { atom } => write!(f, "atom {atom} written aromatic but its ring is not"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ValidityVerdict {
    Valid,
    Invalid(InvalidReason),
}

impl ValidityVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, ValidityVerdict::Valid)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ChemError {
    #[error("empty SMILES")]
    Empty,
    #[error("syntax error at position {position}: {kind}")]
    Syntax { position: usize, kind: SyntaxKind },
    #[error("atom {atom} ({element}) exceeds its allowed valence")]
    Valence { atom: usize, element: Element },
    #[error("invalid molecule: {0}")]
    InvalidMolecule(InvalidReason),
}

/// Order-independent identity of a molecule: its canonical SMILES.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CanonicalKey(pub String);

impl CanonicalKey {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A parsed molecular graph with hydrogens, rings and aromaticity assigned.
#[derive(Debug)]
pub struct Molecule {
    atoms: Vec<Atom>,
    bonds: Vec<Bond>,
    /// Kekulé bond orders (1, 2, 3), aligned with `bonds`.
    kekule: Vec<u8>,
    /// Total attached hydrogens per atom (bracket, implicit and folded `[H]`).
    hydrogens: Vec<u8>,
    adjacency: Vec<Vec<(usize, usize)>>,
    rings: Vec<Vec<usize>>,
    atom_in_ring: Vec<bool>,
    bond_in_ring: Vec<bool>,
    fragments: usize,
    issues: Vec<InvalidReason>,
    canonical: OnceLock<String>,
}

impl Clone for Molecule {
    fn clone(&self) -> Self {
        Molecule {
            atoms: self.atoms.clone(),
            bonds: self.bonds.clone(),
            kekule: self.kekule.clone(),
            hydrogens: self.hydrogens.clone(),
            adjacency: self.adjacency.clone(),
            rings: self.rings.clone(),
            atom_in_ring: self.atom_in_ring.clone(),
            bond_in_ring: self.bond_in_ring.clone(),
            fragments: self.fragments,
            issues: self.issues.clone(),
            canonical: self.canonical.clone(),
        }
    }
}

/// Parse SMILES, rejecting valence violations.
pub fn parse_smiles(text: &str) -> Result<Molecule, ChemError> {
    let mol = parse_smiles_lenient(text)?;
    if let Some(InvalidReason::Valence { atom }) = mol.issues.iter().find(|i| i.is_valence()) {
        return Err(ChemError::Valence { atom: *atom, element: mol.atoms[*atom].element });
    }
    Ok(mol)
}

/// Parse SMILES, keeping valence and aromaticity problems as diagnostics
/// for [`validate`].
pub fn parse_smiles_lenient(text: &str) -> Result<Molecule, ChemError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(ChemError::Empty);
    }
    Ok(Molecule::build(parse::parse(text)?))
}

pub fn validate(mol: &Molecule) -> ValidityVerdict {
    match mol.issues.first() {
        None => ValidityVerdict::Valid,
        Some(reason) => ValidityVerdict::Invalid(*reason),
    }
}

pub fn canonical_key(mol: &Molecule) -> Result<CanonicalKey, ChemError> {
    if let Some(reason) = mol.issues.first() {
        return Err(ChemError::InvalidMolecule(*reason));
    }
    Ok(CanonicalKey(mol.canonical_smiles().to_string()))
}

pub fn perceive_rings(mol: &Molecule) -> &[Vec<usize>] {
    mol.rings()
}

impl Molecule {
    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    pub fn atom(&self, i: usize) -> &Atom {
        &self.atoms[i]
    }

    pub fn num_atoms(&self) -> usize {
        self.atoms.len()
    }

    pub fn num_bonds(&self) -> usize {
        self.bonds.len()
    }

    /// `(neighbor, bond index)` pairs.
    pub fn neighbors(&self, atom: usize) -> &[(usize, usize)] {
        &self.adjacency[atom]
    }

    /// Number of graph neighbours (hydrogens excluded unless written as atoms).
    pub fn degree(&self, atom: usize) -> usize {
        self.adjacency[atom].len()
    }

    /// Hydrogens attached to each atom that are not graph atoms.
    pub fn implicit_h(&self) -> &[u8] {
        &self.hydrogens
    }

    pub fn h_count(&self, atom: usize) -> u8 {
        self.hydrogens[atom]
    }

    /// Kekulé order of a bond: 1, 2 or 3.
    pub fn kekule_order(&self, bond: usize) -> u8 {
        self.kekule[bond]
    }

    /// Sum of Kekulé bond orders plus attached hydrogens.
    pub fn valence(&self, atom: usize) -> u8 {
        self.adjacency[atom].iter().map(|&(_, b)| self.kekule[b]).sum::<u8>() + self.hydrogens[atom]
    }

    /// Smallest-set-of-smallest-rings, each as atoms in cyclic order.
    pub fn rings(&self) -> &[Vec<usize>] {
        &self.rings
    }

    pub fn ring_count(&self) -> usize {
        self.rings.len()
    }

    pub fn atom_in_ring(&self, atom: usize) -> bool {
        self.atom_in_ring[atom]
    }

    pub fn bond_in_ring(&self, bond: usize) -> bool {
        self.bond_in_ring[bond]
    }

    pub fn bond_between(&self, a: usize, b: usize) -> Option<usize> {
        self.adjacency[a].iter().find(|&&(n, _)| n == b).map(|&(_, bond)| bond)
    }

    pub fn fragment_count(&self) -> usize {
        self.fragments
    }

    pub fn is_multi_fragment(&self) -> bool {
        self.fragments > 1
    }

    pub fn issues(&self) -> &[InvalidReason] {
        &self.issues
    }

    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }

    /// Atoms sharing a class are indistinguishable by iterated neighbourhood labels.
    pub fn symmetry_classes(&self) -> Vec<usize> {
        canon::symmetry_classes(self)
    }

    /// Canonical SMILES; also the canonical key.
    pub fn canonical_smiles(&self) -> &str {
        self.canonical.get_or_init(|| canon::canonical_smiles(self))
    }

    fn build(raw: RawGraph) -> Molecule {
        let RawGraph { atoms: raw_atoms, bonds: raw_bonds } = raw;

        // fold plain [H] atoms into their heavy neighbour
        let mut raw_degree = vec![0usize; raw_atoms.len()];
        for b in &raw_bonds {
            raw_degree[b.a] += 1;
            raw_degree[b.b] += 1;
        }
        let foldable = |i: usize| {
            let a = &raw_atoms[i];
            a.element == Element::H && a.charge == 0 && a.isotope.is_none() && a.bracket_h == Some(0) && raw_degree[i] == 1
        };
        let mut folded = vec![0u8; raw_atoms.len()];
        let mut removed = vec![false; raw_atoms.len()];
        for b in &raw_bonds {
            for (h, other) in [(b.a, b.b), (b.b, b.a)] {
                if foldable(h)
                    && raw_atoms[other].element != Element::H
                    && matches!(b.order, RawOrder::Single | RawOrder::Unspecified)
                {
                    removed[h] = true;
                    folded[other] += 1;
                }
            }
        }
        let mut new_index = vec![usize::MAX; raw_atoms.len()];
        let mut atoms = Vec::new();
        let mut folded_h = Vec::new();
        for (i, a) in raw_atoms.iter().enumerate() {
            if removed[i] {
                continue;
            }
            new_index[i] = atoms.len();
            atoms.push(Atom {
                element: a.element,
                charge: a.charge,
                aromatic: a.aromatic,
                isotope: a.isotope,
                explicit_h: a.bracket_h,
            });
            folded_h.push(folded[i]);
        }
        let mut edges: Vec<(usize, usize, RawOrder)> = raw_bonds
            .iter()
            .filter(|b| !removed[b.a] && !removed[b.b])
            .map(|b| (new_index[b.a], new_index[b.b], b.order))
            .collect();
        for e in edges.iter_mut() {
            if e.0 > e.1 {
                std::mem::swap(&mut e.0, &mut e.1);
            }
        }
        let n = atoms.len();

        let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (i, &(a, b, _)) in edges.iter().enumerate() {
            adjacency[a].push((b, i));
            adjacency[b].push((a, i));
        }
        let fragments = count_components(n, &adjacency);
        let rings = rings::minimum_cycle_basis(n, edges.len(), &adjacency, fragments);
        let mut atom_in_ring = vec![false; n];
        let mut bond_in_ring = vec![false; edges.len()];
        for ring in &rings {
            for (k, &a) in ring.iter().enumerate() {
                atom_in_ring[a] = true;
                let b = ring[(k + 1) % ring.len()];
                if let Some(&(_, bond)) = adjacency[a].iter().find(|&&(x, _)| x == b) {
                    bond_in_ring[bond] = true;
                }
            }
        }

        let mut issues = Vec::new();
        let input_aromatic: Vec<bool> = atoms.iter().map(|a| a.aromatic).collect();
        for (i, atom) in atoms.iter_mut().enumerate() {
            if atom.aromatic && !atom_in_ring[i] {
                atom.aromatic = false;
                issues.push(InvalidReason::AromaticOutsideRing { atom: i });
            }
        }

        // resolve written orders; aromatic only between aromatic ring atoms
        let mut is_aromatic_bond = vec![false; edges.len()];
        let mut kekule = vec![1u8; edges.len()];
        for (i, &(a, b, order)) in edges.iter().enumerate() {
            let both = atoms[a].aromatic && atoms[b].aromatic && bond_in_ring[i];
            match order {
                RawOrder::Unspecified | RawOrder::Aromatic if both => is_aromatic_bond[i] = true,
                RawOrder::Double => kekule[i] = 2,
                RawOrder::Triple => kekule[i] = 3,
                _ => {}
            }
        }

        // which aromatic atoms still need a double bond
        let sum_single: Vec<u8> = (0..n)
            .map(|i| adjacency[i].iter().map(|&(_, b)| kekule[b]).sum::<u8>() + folded_h[i])
            .collect();
        let needs: Vec<bool> = (0..n)
            .map(|i| {
                let atom = &atoms[i];
                if !atom.aromatic || !adjacency[i].iter().any(|&(_, b)| is_aromatic_bond[b]) {
                    return false;
                }
                if adjacency[i].iter().any(|&(_, b)| kekule[b] >= 2) {
                    return false;
                }
                let allowed = atom.element.allowed_valences(atom.charge);
                match atom.explicit_h {
                    None => allowed.first().is_some_and(|&v| sum_single[i] < v),
                    Some(h) => {
                        let v = sum_single[i] + h;
                        !allowed.contains(&v) && allowed.contains(&(v + 1))
                    }
                }
            })
            .collect();
        let arom_list: Vec<usize> = (0..edges.len()).filter(|&b| is_aromatic_bond[b]).collect();
        let pairs: Vec<(usize, usize)> = arom_list.iter().map(|&b| (edges[b].0, edges[b].1)).collect();
        let (double, failed) = aromatic::kekulize(n, &needs, &pairs);
        for (k, &b) in arom_list.iter().enumerate() {
            if double[k] {
                kekule[b] = 2;
            }
        }
        let mut failed_atom = vec![false; n];
        if let Some(&first) = failed.iter().min() {
            issues.push(InvalidReason::Kekulization { atom: first });
        }
        for &a in &failed {
            failed_atom[a] = true;
        }

        // hydrogens
        let mut hydrogens = vec![0u8; n];
        for i in 0..n {
            let atom = &atoms[i];
            let sum = adjacency[i].iter().map(|&(_, b)| kekule[b]).sum::<u8>() + folded_h[i];
            hydrogens[i] = match atom.explicit_h {
                Some(h) => h + folded_h[i],
                None => {
                    let allowed = atom.element.allowed_valences(0);
                    let implicit = if failed_atom[i] {
                        // estimate as if the missing double bond were present
                        allowed.iter().find(|&&v| v > sum).map(|&v| v - sum - 1).unwrap_or(0)
                    } else {
                        allowed.iter().find(|&&v| v >= sum).map(|&v| v - sum).unwrap_or(0)
                    };
                    implicit + folded_h[i]
                }
            };
        }

        for i in 0..n {
            let atom = &atoms[i];
            let allowed = atom.element.allowed_valences(atom.charge);
            let Some(&max) = allowed.iter().max() else { continue };
            let mut v = adjacency[i].iter().map(|&(_, b)| kekule[b] as u32).sum::<u32>() + hydrogens[i] as u32;
            if failed_atom[i] {
                v += 1;
            }
            if v > max as u32 {
                issues.push(InvalidReason::Valence { atom: i });
            }
        }

        // aromaticity perception on the Kekulé structure
        let mut aromatic_atom = vec![false; n];
        let mut aromatic_bond = vec![false; edges.len()];
        let bond_of = |a: usize, b: usize| adjacency[a].iter().find(|&&(x, _)| x == b).map(|&(_, bond)| bond);
        let electrons: Vec<Option<u8>> = (0..n)
            .map(|i| {
                if failed_atom[i] || !atom_in_ring[i] {
                    return None;
                }
                let mut env = aromatic::AtomEnv {
                    element: atoms[i].element,
                    charge: atoms[i].charge,
                    connections: adjacency[i].len() + hydrogens[i] as usize,
                    ring_double: false,
                    exo_double: None,
                    has_triple: false,
                    double_count: 0,
                };
                for &(w, b) in &adjacency[i] {
                    match kekule[b] {
                        2 => {
                            env.double_count += 1;
                            if bond_in_ring[b] {
                                env.ring_double = true;
                            } else {
                                env.exo_double = Some(atoms[w].element);
                            }
                        }
                        3 => env.has_triple = true,
                        _ => {}
                    }
                }
                aromatic::pi_electrons(&env)
            })
            .collect();
        let ring_electrons = |ring: &[usize]| -> Option<u32> {
            ring.iter().map(|&a| electrons[a].map(u32::from)).sum::<Option<u32>>()
        };
        let mut ring_aromatic = vec![false; rings.len()];
        for (r, ring) in rings.iter().enumerate() {
            if ring_electrons(ring).is_some_and(aromatic::is_huckel) {
                ring_aromatic[r] = true;
            }
        }
        let ring_bonds: Vec<Vec<usize>> = rings
            .iter()
            .map(|ring| (0..ring.len()).filter_map(|k| bond_of(ring[k], ring[(k + 1) % ring.len()])).collect())
            .collect();
        // fused pairs whose envelope is aromatic although a member ring is not
        let mut envelope_aromatic = vec![false; rings.len()];
        let mut envelope_bonds: Vec<usize> = Vec::new();
        for r in 0..rings.len() {
            for s in (r + 1)..rings.len() {
                if ring_aromatic[r] && ring_aromatic[s] {
                    continue;
                }
                if !ring_bonds[r].iter().any(|b| ring_bonds[s].contains(b)) {
                    continue;
                }
                // envelope = symmetric difference of the two edge sets
                let outer_bonds: Vec<usize> = ring_bonds[r]
                    .iter()
                    .chain(&ring_bonds[s])
                    .copied()
                    .filter(|b| !(ring_bonds[r].contains(b) && ring_bonds[s].contains(b)))
                    .collect();
                let mut incidence: std::collections::BTreeMap<usize, usize> = Default::default();
                for &b in &outer_bonds {
                    *incidence.entry(edges[b].0).or_default() += 1;
                    *incidence.entry(edges[b].1).or_default() += 1;
                }
                if incidence.values().any(|&c| c != 2) {
                    continue;
                }
                let outer: Vec<usize> = incidence.keys().copied().collect();
                if ring_electrons(&outer).is_some_and(aromatic::is_huckel) {
                    envelope_aromatic[r] = true;
                    envelope_aromatic[s] = true;
                    envelope_bonds.extend(outer_bonds);
                }
            }
        }
        for r in 0..rings.len() {
            if ring_aromatic[r] || envelope_aromatic[r] {
                for &a in &rings[r] {
                    aromatic_atom[a] = true;
                }
            }
            if ring_aromatic[r] {
                for &b in &ring_bonds[r] {
                    aromatic_bond[b] = true;
                }
            }
        }
        // a fusion bond aromatic only through its envelope stays localized
        for b in envelope_bonds {
            aromatic_bond[b] = true;
        }

        for i in 0..n {
            if failed_atom[i] {
                continue;
            }
            if input_aromatic[i] && atom_in_ring[i] && !aromatic_atom[i] {
                issues.push(InvalidReason::NotAromatic { atom: i });
            }
            atoms[i].aromatic = aromatic_atom[i];
        }

        let bonds: Vec<Bond> = edges
            .iter()
            .enumerate()
            .map(|(i, &(a, b, _))| {
                let order = if aromatic_bond[i] || (is_aromatic_bond[i] && failed_atom[a] && failed_atom[b]) {
                    BondOrder::Aromatic
                } else {
                    match kekule[i] {
                        3 => BondOrder::Triple,
                        2 => BondOrder::Double,
                        _ => BondOrder::Single,
                    }
                };
                Bond { a, b, order }
            })
            .collect();
        // failed systems keep their written aromatic flags
        for i in 0..n {
            if failed_atom[i] {
                atoms[i].aromatic = true;
            }
        }
        issues.sort_by_key(issue_rank);

        Molecule {
            atoms,
            bonds,
            kekule,
            hydrogens,
            adjacency,
            rings,
            atom_in_ring,
            bond_in_ring,
            fragments,
            issues,
            canonical: OnceLock::new(),
        }
    }
}

fn issue_rank(issue: &InvalidReason) -> (u8, usize) {
    match *issue {
        InvalidReason::Valence { atom } => (0, atom),
        InvalidReason::AromaticOutsideRing { atom } => (1, atom),
        InvalidReason::Kekulization { atom } => (2, atom),
        InvalidReason::NotAromatic { atom } => (3, atom),
    }
}

fn count_components(n: usize, adjacency: &[Vec<(usize, usize)>]) -> usize {
    let mut seen = vec![false; n];
    let mut count = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        count += 1;
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(v) = stack.pop() {
            for &(w, _) in &adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    count
}
