//! Exact property shares for successive weighted draws without
//! replacement, by enumerating every ordered sequence of draws.

#![allow(dead_code)]

/// Expected fraction of all property slots taken by each property, given
/// the distribution of prompt sizes over {1, 2, 3}.
pub fn slot_shares(weights: &[f64], n_probs: [f64; 3]) -> Vec<f64> {
    let m = weights.len();
    let mut expected = vec![0.0; m];
    let mut slots = 0.0;
    for (n_idx, pn) in n_probs.iter().enumerate() {
        let n = (n_idx + 1).min(m);
        slots += pn * n as f64;
        let mut visit = |seq: &[usize], prob: f64| {
            for &i in seq {
                expected[i] += pn * prob;
            }
        };
        walk(weights, n, &mut Vec::new(), 1.0, &mut visit);
    }
    expected.iter().map(|e| e / slots).collect()
}

fn walk(weights: &[f64], n: usize, seq: &mut Vec<usize>, prob: f64, visit: &mut impl FnMut(&[usize], f64)) {
    if seq.len() == n {
        visit(seq, prob);
        return;
    }
    let left: f64 = (0..weights.len()).filter(|i| !seq.contains(i)).map(|i| weights[i]).sum();
    for i in 0..weights.len() {
        if seq.contains(&i) {
            continue;
        }
        seq.push(i);
        walk(weights, n, seq, prob * weights[i] / left, visit);
        seq.pop();
    }
}

/// Probability of each property on the first draw.
pub fn first_draw(weights: &[f64]) -> Vec<f64> {
    let total: f64 = weights.iter().sum();
    weights.iter().map(|w| w / total).collect()
}
