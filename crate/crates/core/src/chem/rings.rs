//! Minimum cycle basis (smallest set of smallest rings).
//!
//! Horton candidates (shortest-path cycles through every vertex/edge pair)
//! sorted by length, then greedy GF(2) elimination over edge-incidence
//! vectors until the basis reaches the cyclomatic number.

use std::collections::{HashSet, VecDeque};

/// `adjacency[v]` lists `(neighbor, bond index)`.
pub(crate) fn minimum_cycle_basis(n_atoms: usize, n_bonds: usize, adjacency: &[Vec<(usize, usize)>], components: usize) -> Vec<Vec<usize>> {
    let rank = (n_bonds + components).saturating_sub(n_atoms);
    if rank == 0 {
        return Vec::new();
    }
    let words = n_bonds.div_ceil(64);

    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut candidates: Vec<(usize, Vec<u64>, Vec<usize>)> = Vec::new();
    let mut edges: Vec<(usize, usize)> = vec![(0, 0); n_bonds];
    for (v, nbrs) in adjacency.iter().enumerate() {
        for &(w, b) in nbrs {
            edges[b] = (v.min(w), v.max(w));
        }
    }

    for root in 0..n_atoms {
        let (dist, parent) = bfs(root, n_atoms, adjacency);
        for (b, &(x, y)) in edges.iter().enumerate() {
            if dist[x] == usize::MAX || dist[y] == usize::MAX {
                continue;
            }
            if parent[x].map(|p| p.1) == Some(b) || parent[y].map(|p| p.1) == Some(b) {
                continue;
            }
            let px = path_to_root(x, &parent);
            let py = path_to_root(y, &parent);
            // paths must meet only at the root
            let set_x: HashSet<usize> = px.iter().map(|p| p.0).collect();
            if py.iter().any(|p| p.0 != root && set_x.contains(&p.0)) {
                continue;
            }
            let mut bits = vec![0u64; words];
            for &(_, e) in px.iter().chain(py.iter()) {
                if let Some(e) = e {
                    bits[e / 64] ^= 1 << (e % 64);
                }
            }
            bits[b / 64] ^= 1 << (b % 64);
            if !seen.insert(bits.clone()) {
                continue;
            }
            // atom cycle: root .. x, then y .. root
            let mut atoms: Vec<usize> = px.iter().rev().map(|p| p.0).collect();
            atoms.extend(py.iter().map(|p| p.0).filter(|&a| a != root));
            candidates.push((atoms.len(), bits, atoms));
        }
    }
    candidates.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.2.cmp(&b.2)));

    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new(); // (pivot bit, reduced row)
    let mut rings = Vec::new();
    for (_, bits, atoms) in candidates {
        let mut row = bits;
        for (pivot, b) in &basis {
            if row[pivot / 64] >> (pivot % 64) & 1 == 1 {
                for (r, x) in row.iter_mut().zip(b) {
                    *r ^= x;
                }
            }
        }
        if let Some(pivot) = first_bit(&row) {
            basis.push((pivot, row));
            rings.push(atoms);
            if rings.len() == rank {
                break;
            }
        }
    }
    rings
}

fn first_bit(row: &[u64]) -> Option<usize> {
    row.iter().enumerate().find(|(_, w)| **w != 0).map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

type Parent = Option<(usize, usize)>;

fn bfs(root: usize, n: usize, adjacency: &[Vec<(usize, usize)>]) -> (Vec<usize>, Vec<Parent>) {
    let mut dist = vec![usize::MAX; n];
    let mut parent: Vec<Parent> = vec![None; n];
    let mut queue = VecDeque::new();
    dist[root] = 0;
    queue.push_back(root);
    while let Some(v) = queue.pop_front() {
        for &(w, b) in &adjacency[v] {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                parent[w] = Some((v, b));
                queue.push_back(w);
            }
        }
    }
    (dist, parent)
}

/// Vertices from `v` back to the root, each with the bond leading toward the root.
fn path_to_root(v: usize, parent: &[Parent]) -> Vec<(usize, Option<usize>)> {
    let mut out = Vec::new();
    let mut cur = v;
    loop {
        match parent[cur] {
            Some((p, b)) => {
                out.push((cur, Some(b)));
                cur = p;
            }
            None => {
                out.push((cur, None));
                break;
            }
        }
    }
    out
}
