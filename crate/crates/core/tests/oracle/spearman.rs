//! Brute-force rank correlation: quadratic rank counting and a one-pass
//! Pearson over the ranks.

#![allow(dead_code)]

pub fn ranks(v: &[f64]) -> Vec<f64> {
    v.iter()
        .map(|x| {
            let below = v.iter().filter(|y| *y < x).count() as f64;
            let equal = v.iter().filter(|y| *y == x).count() as f64;
            below + (equal + 1.0) / 2.0
        })
        .collect()
}

pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let (sx, sy): (f64, f64) = (x.iter().sum(), y.iter().sum());
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let sxx: f64 = x.iter().map(|a| a * a).sum();
    let syy: f64 = y.iter().map(|b| b * b).sum();
    let cov = n * sxy - sx * sy;
    let vx = n * sxx - sx * sx;
    let vy = n * syy - sy * sy;
    if vx <= 0.0 || vy <= 0.0 {
        return None;
    }
    Some(cov / (vx * vy).sqrt())
}

pub fn normalized(preds: &[f64], labels: &[f64], n_total: usize) -> f64 {
    if preds.len() < 2 {
        return 0.0;
    }
    let rho = pearson(&ranks(preds), &ranks(labels)).unwrap_or(0.0);
    (rho + 1.0) / 2.0 * (preds.len() as f64 / n_total as f64)
}
