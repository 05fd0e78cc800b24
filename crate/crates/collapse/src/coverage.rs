use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::landscape::{cluster_mass, FinitePolicy, Partition};
use crate::CollapseError;

/// Lower bound on the expected number of distinct clusters hit by `n_r`
/// independent draws when every cluster has mass at least `p_min`.
pub fn coverage_bound(m: usize, p_min: f64, n_r: usize) -> Result<f64, CollapseError> {
    if m == 0 || n_r == 0 || !(p_min > 0.0) || p_min > 1.0 / m as f64 + 1e-12 {
        return Err(CollapseError::Params(format!("need m >= 1, n_r >= 1 and 0 < p_min <= 1/m (got m={m}, p_min={p_min}, n_r={n_r})")));
    }
    Ok(m as f64 * (1.0 - (1.0 - p_min).powi(n_r as i32)))
}

/// Exact E[#distinct clusters] for independent draws from `masses`.
pub fn expected_coverage(masses: &[f64], n_r: usize) -> f64 {
    masses.iter().map(|p| 1.0 - (1.0 - p).powi(n_r as i32)).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverageEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub trials: usize,
}

/// Monte Carlo estimate of the number of distinct clusters among `n_r`
/// draws from `policy`.
pub fn mc_coverage<R: Rng>(
    policy: &FinitePolicy,
    partition: &Partition,
    n_r: usize,
    trials: usize,
    rng: &mut R,
) -> Result<CoverageEstimate, CollapseError> {
    let assign = partition.assignment(policy.len())?;
    let dist = WeightedIndex::new(&policy.probs).map_err(|e| CollapseError::NotAProbability(e.to_string()))?;
    let mut seen = vec![usize::MAX; partition.len()];
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for trial in 0..trials {
        let mut distinct = 0usize;
        for _ in 0..n_r {
            let c = assign[dist.sample(rng)];
            if seen[c] != trial {
                seen[c] = trial;
                distinct += 1;
            }
        }
        sum += distinct as f64;
        sum_sq += (distinct * distinct) as f64;
    }
    let n = trials as f64;
    let mean = sum / n;
    let var = if trials > 1 { (sum_sq - n * mean * mean).max(0.0) / (n - 1.0) } else { 0.0 };
    Ok(CoverageEstimate { mean, stderr: (var / n).sqrt(), trials })
}

/// Smallest cluster mass.
pub fn mass_floor(policy: &FinitePolicy, partition: &Partition) -> f64 {
    cluster_mass(policy, partition).into_iter().fold(f64::INFINITY, f64::min)
}
