//! Brute-force maximization of the coverage-regularized objective over the
//! 2-simplex: a coarse grid, then repeated local grids around the incumbent.

#![allow(dead_code)]

/// Objective for three answers, recomputed from scratch.
pub fn objective(pi: [f64; 3], old: [f64; 3], adv: [f64; 3], clusters: &[Vec<usize>], eta: f64, lambda: f64) -> f64 {
    let xlogy = |x: f64, y: f64| if x == 0.0 { 0.0 } else { x * (x / y).ln() };
    let gain: f64 = (0..3).map(|i| pi[i] * adv[i]).sum();
    let kl: f64 = (0..3).map(|i| xlogy(pi[i], old[i])).sum();
    let u = 1.0 / clusters.len() as f64;
    let kl_u: f64 = clusters.iter().map(|c| xlogy(c.iter().map(|&i| pi[i]).sum(), u)).sum();
    gain - kl / eta - lambda * kl_u
}

pub fn grid_argmax(old: [f64; 3], adv: [f64; 3], clusters: &[Vec<usize>], eta: f64, lambda: f64) -> ([f64; 3], f64) {
    let f = |a: f64, b: f64| objective([a, b, 1.0 - a - b], old, adv, clusters, eta, lambda);
    let n = 400;
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    for i in 0..=n {
        for j in 0..=(n - i) {
            let (a, b) = (i as f64 / n as f64, j as f64 / n as f64);
            let v = f(a, b);
            if v > best.0 {
                best = (v, a, b);
            }
        }
    }
    let mut h = 1.0 / n as f64;
    for _ in 0..60 {
        let (_, ca, cb) = best;
        for di in -20..=20 {
            for dj in -20..=20 {
                let a = ca + di as f64 * h / 10.0;
                let b = cb + dj as f64 * h / 10.0;
                if a < 0.0 || b < 0.0 || a + b > 1.0 {
                    continue;
                }
                let v = f(a, b);
                if v > best.0 {
                    best = (v, a, b);
                }
            }
        }
        h /= 2.0;
    }
    ([best.1, best.2, 1.0 - best.1 - best.2], best.0)
}
