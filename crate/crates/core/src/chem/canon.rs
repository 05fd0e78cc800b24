//! Canonical atom ranking and SMILES serialization.
//!
//! Ranks come from iterated neighbourhood-label refinement. Remaining ties
//! are broken by branching on each member of the first tied class and
//! keeping the SMILES with the fewest branches, then the lexicographically
//! smallest. Atoms with identical
//! neighbour sets are interchangeable, so only one of them is tried.

use super::{BondOrder, Molecule};

const LEAF_BUDGET: usize = 2000;

pub(crate) fn canonical_smiles(mol: &Molecule) -> String {
    if mol.num_atoms() == 0 {
        return String::new();
    }
    let labels = refine(mol, initial_labels(mol));
    let mut best: Option<String> = None;
    let mut leaves = 0;
    search(mol, labels, &mut best, &mut leaves);
    best.unwrap_or_default()
}

/// Graph-symmetry classes from label refinement without tie breaking.
pub(crate) fn symmetry_classes(mol: &Molecule) -> Vec<usize> {
    refine(mol, initial_labels(mol))
}

fn bond_code(order: BondOrder) -> u8 {
    match order {
        BondOrder::Single => 1,
        BondOrder::Double => 2,
        BondOrder::Triple => 3,
        BondOrder::Aromatic => 4,
    }
}

/// Dense "number of strictly smaller keys" labels.
fn rank_by<K: Ord + Clone>(keys: &[K]) -> Vec<usize> {
    let mut sorted: Vec<K> = keys.to_vec();
    sorted.sort();
    keys.iter().map(|k| sorted.partition_point(|x| x < k)).collect()
}

fn initial_labels(mol: &Molecule) -> Vec<usize> {
    let keys: Vec<_> = (0..mol.num_atoms())
        .map(|i| {
            let a = mol.atom(i);
            (
                mol.degree(i),
                a.element.atomic_number(),
                a.isotope.unwrap_or(0),
                a.charge,
                a.aromatic,
                mol.h_count(i),
                mol.atom_in_ring(i),
            )
        })
        .collect();
    rank_by(&keys)
}

fn refine(mol: &Molecule, mut labels: Vec<usize>) -> Vec<usize> {
    let mut classes = count_classes(&labels);
    loop {
        let keys: Vec<(usize, Vec<(usize, u8)>)> = (0..mol.num_atoms())
            .map(|i| {
                let mut nb: Vec<(usize, u8)> = mol
                    .neighbors(i)
                    .iter()
                    .map(|&(w, b)| (labels[w], bond_code(mol.bonds()[b].order)))
                    .collect();
                nb.sort_unstable();
                (labels[i], nb)
            })
            .collect();
        let next = rank_by(&keys);
        let next_classes = count_classes(&next);
        labels = next;
        if next_classes == classes {
            return labels;
        }
        classes = next_classes;
    }
}

fn count_classes(labels: &[usize]) -> usize {
    let mut v = labels.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

fn neighbour_signature(mol: &Molecule, i: usize) -> Vec<(usize, u8)> {
    let mut nb: Vec<(usize, u8)> =
        mol.neighbors(i).iter().map(|&(w, b)| (w, bond_code(mol.bonds()[b].order))).collect();
    nb.sort_unstable();
    nb
}

fn search(mol: &Molecule, labels: Vec<usize>, best: &mut Option<String>, leaves: &mut usize) {
    let n = labels.len();
    let mut counts = vec![0usize; n];
    for &l in &labels {
        counts[l] += 1;
    }
    let Some(tied) = (0..n).find(|&l| counts[l] > 1) else {
        *leaves += 1;
        let s = write_smiles(mol, &labels);
        let branches = |t: &str| t.bytes().filter(|&c| c == b'(').count();
        if best.as_ref().is_none_or(|b| (branches(&s), &s) < (branches(b), b)) {
            *best = Some(s);
        }
        return;
    };
    let members: Vec<usize> = (0..n).filter(|&i| labels[i] == tied).collect();
    let mut tried: Vec<Vec<(usize, u8)>> = Vec::new();
    for &m in &members {
        if *leaves >= LEAF_BUDGET && best.is_some() {
            return;
        }
        let sig = neighbour_signature(mol, m);
        if tried.contains(&sig) {
            continue;
        }
        tried.push(sig);
        let mut next = labels.clone();
        for &o in &members {
            if o != m {
                next[o] = tied + 1;
            }
        }
        let next = refine(mol, next);
        search(mol, next, best, leaves);
    }
}

/// Serialize with neighbours and roots visited in increasing `ranks` order
/// (ties broken by atom index). Any ranking gives a valid SMILES of the same
/// molecule, which makes this a permuted-SMILES generator as well.
pub fn write_smiles(mol: &Molecule, ranks: &[usize]) -> String {
    let n = mol.num_atoms();
    let key = |i: usize| (ranks[i], i);
    let sorted_neighbors: Vec<Vec<(usize, usize)>> = (0..n)
        .map(|i| {
            let mut nb = mol.neighbors(i).to_vec();
            nb.sort_by_key(|&(w, _)| key(w));
            nb
        })
        .collect();

    // pass 1: spanning forest and ring-closure bonds
    let mut visited = vec![false; n];
    let mut bond_seen = vec![false; mol.num_bonds()];
    let mut children: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut opens: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut closes: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut roots = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| key(i));
    for &root in &order {
        if visited[root] {
            continue;
        }
        roots.push(root);
        visited[root] = true;
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if *next >= sorted_neighbors[v].len() {
                stack.pop();
                continue;
            }
            let (w, b) = sorted_neighbors[v][*next];
            *next += 1;
            if bond_seen[b] {
                continue;
            }
            bond_seen[b] = true;
            if visited[w] {
                opens[w].push((v, b));
                closes[v].push(b);
            } else {
                visited[w] = true;
                children[v].push((w, b));
                stack.push((w, 0));
            }
        }
    }
    for o in opens.iter_mut() {
        o.sort_by_key(|&(v, _)| key(v));
    }

    // pass 2: emit
    enum Task {
        Atom(usize, Option<usize>),
        Text(&'static str),
    }
    let mut out = String::new();
    let mut digit_of_bond: std::collections::HashMap<usize, u32> = Default::default();
    let mut free_digits: Vec<bool> = vec![true; 100];
    for (f, &root) in roots.iter().enumerate() {
        if f > 0 {
            out.push('.');
        }
        let mut tasks = vec![Task::Atom(root, None)];
        while let Some(task) = tasks.pop() {
            let (v, incoming) = match task {
                Task::Text(t) => {
                    out.push_str(t);
                    continue;
                }
                Task::Atom(v, incoming) => (v, incoming),
            };
            if let Some(b) = incoming {
                out.push_str(bond_symbol(mol, b));
            }
            out.push_str(&atom_text(mol, v));
            for &b in &closes[v] {
                let d = digit_of_bond.remove(&b).expect("ring closure opened before close");
                free_digits[d as usize] = true;
                push_digit(&mut out, d);
            }
            for &(_, b) in &opens[v] {
                let d = (1..100).find(|&d| free_digits[d]).expect("fewer than 100 open rings") as u32;
                free_digits[d as usize] = false;
                digit_of_bond.insert(b, d);
                out.push_str(bond_symbol(mol, b));
                push_digit(&mut out, d);
            }
            let kids = &children[v];
            if let Some(&(last, lb)) = kids.last() {
                tasks.push(Task::Atom(last, Some(lb)));
                for &(c, cb) in kids[..kids.len() - 1].iter().rev() {
                    tasks.push(Task::Text(")"));
                    tasks.push(Task::Atom(c, Some(cb)));
                    tasks.push(Task::Text("("));
                }
            }
        }
    }
    out
}

fn push_digit(out: &mut String, d: u32) {
    if d < 10 {
        out.push(char::from_digit(d, 10).unwrap());
    } else {
        out.push('%');
        out.push_str(&d.to_string());
    }
}

fn bond_symbol(mol: &Molecule, b: usize) -> &'static str {
    let bond = mol.bonds()[b];
    match bond.order {
        BondOrder::Aromatic => "",
        BondOrder::Double => "=",
        BondOrder::Triple => "#",
        BondOrder::Single => {
            if mol.atom(bond.a).aromatic && mol.atom(bond.b).aromatic {
                "-"
            } else {
                ""
            }
        }
    }
}

/// Hydrogen count the parser would assign to a bare organic-subset symbol,
/// or `None` when a bare symbol would not reproduce this atom.
fn bare_hydrogens(mol: &Molecule, i: usize) -> Option<u8> {
    let atom = mol.atom(i);
    let allowed = atom.element.allowed_valences(0);
    let mut sum = 0u8;
    let mut aromatic_bonds = 0;
    let mut other_double = false;
    let mut aromatic_double = false;
    for &(_, b) in mol.neighbors(i) {
        if mol.bonds()[b].order == BondOrder::Aromatic {
            sum += 1;
            aromatic_bonds += 1;
            aromatic_double |= mol.kekule_order(b) == 2;
        } else {
            let k = mol.kekule_order(b);
            sum += k;
            other_double |= k >= 2;
        }
    }
    let fill = |s: u8| allowed.iter().find(|&&v| v >= s).map(|&v| v - s).unwrap_or(0);
    if !atom.aromatic || aromatic_bonds == 0 || other_double {
        return if aromatic_double { None } else { Some(fill(sum)) };
    }
    let v0 = *allowed.first()?;
    let needs = sum < v0;
    if needs != aromatic_double {
        return None;
    }
    Some(if needs { v0 - sum - 1 } else { fill(sum) })
}

fn atom_text(mol: &Molecule, i: usize) -> String {
    let atom = mol.atom(i);
    let h = mol.h_count(i);
    let symbol = if atom.aromatic { atom.element.symbol().to_lowercase() } else { atom.element.symbol().to_string() };
    if atom.element.is_organic_subset() && atom.charge == 0 && atom.isotope.is_none() && bare_hydrogens(mol, i) == Some(h) {
        return symbol;
    }
    let mut s = String::from("[");
    if let Some(iso) = atom.isotope {
        s.push_str(&iso.to_string());
    }
    s.push_str(&symbol);
    match h {
        0 => {}
        1 => s.push('H'),
        _ => {
            s.push('H');
            s.push_str(&h.to_string());
        }
    }
    match atom.charge {
        0 => {}
        1 => s.push('+'),
        -1 => s.push('-'),
        c if c > 0 => s.push_str(&format!("+{c}")),
        c => s.push_str(&format!("-{}", -c)),
    }
    s.push(']');
    s
}
