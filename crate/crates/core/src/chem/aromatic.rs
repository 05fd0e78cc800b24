//! Kekulization of lowercase input and Hückel aromaticity perception.

use super::Element;

const MATCH_STEP_LIMIT: usize = 200_000;

/// Assign double bonds among aromatic-input bonds so every atom in `needs`
/// gets exactly one. Works per connected aromatic system.
///
/// `bonds` holds `(a, b)` pairs of aromatic-input bonds. Returns one flag per
/// entry (true = double) and the atoms of systems with no perfect matching.
pub(crate) fn kekulize(n_atoms: usize, needs: &[bool], bonds: &[(usize, usize)]) -> (Vec<bool>, Vec<usize>) {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n_atoms];
    for (i, &(a, b)) in bonds.iter().enumerate() {
        adj[a].push((b, i));
        adj[b].push((a, i));
    }
    let mut double = vec![false; bonds.len()];
    let mut failed = Vec::new();
    let mut seen = vec![false; n_atoms];

    for start in 0..n_atoms {
        if seen[start] || adj[start].is_empty() {
            continue;
        }
        // collect the system
        let mut system = vec![start];
        seen[start] = true;
        let mut k = 0;
        while k < system.len() {
            let v = system[k];
            k += 1;
            for &(w, _) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    system.push(w);
                }
            }
        }
        let mut matched = vec![false; n_atoms];
        for &v in &system {
            matched[v] = !needs[v];
        }
        let mut chosen = Vec::new();
        let mut steps = 0;
        if match_all(&system, &adj, &mut matched, &mut chosen, &mut steps) {
            for e in chosen {
                double[e] = true;
            }
        } else {
            failed.extend(system.iter().copied().filter(|&v| needs[v]));
        }
    }
    (double, failed)
}

fn match_all(
    system: &[usize],
    adj: &[Vec<(usize, usize)>],
    matched: &mut [bool],
    chosen: &mut Vec<usize>,
    steps: &mut usize,
) -> bool {
    *steps += 1;
    if *steps > MATCH_STEP_LIMIT {
        return false;
    }
    // most constrained unmatched atom first
    let mut best: Option<(usize, usize)> = None;
    for &v in system {
        if matched[v] {
            continue;
        }
        let options = adj[v].iter().filter(|&&(w, _)| !matched[w]).count();
        if options == 0 {
            return false;
        }
        if best.is_none_or(|(_, o)| options < o) {
            best = Some((v, options));
        }
    }
    let Some((v, _)) = best else { return true };
    for &(w, e) in &adj[v] {
        if matched[w] {
            continue;
        }
        matched[v] = true;
        matched[w] = true;
        chosen.push(e);
        if match_all(system, adj, matched, chosen, steps) {
            return true;
        }
        chosen.pop();
        matched[v] = false;
        matched[w] = false;
    }
    false
}

/// Local environment of a ring atom in the Kekulé structure.
pub(crate) struct AtomEnv {
    pub element: Element,
    pub charge: i8,
    /// heavy neighbours plus hydrogens
    pub connections: usize,
    pub ring_double: bool,
    /// element of an exocyclic double-bond partner, if any
    pub exo_double: Option<Element>,
    pub has_triple: bool,
    pub double_count: usize,
}

/// Pi electrons an atom donates to an aromatic ring; `None` rules the ring out.
pub(crate) fn pi_electrons(env: &AtomEnv) -> Option<u8> {
    if env.has_triple || env.double_count > 1 {
        return None;
    }
    let no_double = env.double_count == 0;
    match (env.element, env.charge) {
        (Element::C, 0) => {
            if env.ring_double {
                Some(1)
            } else {
                match env.exo_double {
                    Some(Element::N | Element::O | Element::S) => Some(0),
                    _ => None,
                }
            }
        }
        (Element::C, -1) if no_double && env.connections == 3 => Some(2),
        (Element::C, 1) if no_double && env.connections == 3 => Some(0),
        (Element::C, _) if env.ring_double => Some(1),
        (Element::N | Element::P, 0) => {
            if env.ring_double && env.connections <= 3 {
                Some(1)
            } else if no_double && env.connections == 3 {
                Some(2)
            } else {
                None
            }
        }
        (Element::N | Element::P, 1) if env.ring_double => Some(1),
        (Element::N | Element::P, -1) if no_double && env.connections == 2 => Some(2),
        (Element::O | Element::S | Element::Se, 0) if no_double && env.connections == 2 => Some(2),
        (Element::O | Element::S | Element::Se, 1) if env.ring_double => Some(1),
        (Element::B, 0) if env.ring_double => Some(1),
        _ => None,
    }
}

pub(crate) fn is_huckel(electrons: u32) -> bool {
    electrons >= 2 && (electrons - 2).is_multiple_of(4)
}
