//! Textbook agglomerative single linkage: repeatedly merge the two closest
//! clusters while their distance is within the cut.

#![allow(dead_code)]

use std::collections::BTreeSet;

pub fn jaccard(a: &BTreeSet<String>, b: &BTreeSet<String>) -> f64 {
    let inter = a.iter().filter(|x| b.contains(*x)).count() as f64;
    let union = a.iter().chain(b.iter()).collect::<BTreeSet<_>>().len() as f64;
    inter / union
}

/// Clusters as sorted member index lists, sorted by first member.
pub fn agglomerate(sets: &[BTreeSet<String>], cut: f64) -> Vec<Vec<usize>> {
    let mut clusters: Vec<Vec<usize>> = (0..sets.len()).map(|i| vec![i]).collect();
    loop {
        let mut best: Option<(f64, usize, usize)> = None;
        for a in 0..clusters.len() {
            for b in a + 1..clusters.len() {
                let d = clusters[a]
                    .iter()
                    .flat_map(|&i| clusters[b].iter().map(move |&j| (i, j)))
                    .map(|(i, j)| 1.0 - jaccard(&sets[i], &sets[j]))
                    .fold(f64::INFINITY, f64::min);
                if best.is_none_or(|(bd, _, _)| d < bd) {
                    best = Some((d, a, b));
                }
            }
        }
        match best {
            Some((d, a, b)) if d <= cut + 1e-12 => {
                let moved = clusters.remove(b);
                clusters[a].extend(moved);
                clusters[a].sort();
            }
            _ => break,
        }
    }
    clusters.sort();
    clusters
}
