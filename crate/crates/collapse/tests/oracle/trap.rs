//! Two-cluster trap: one cluster's rewards sit slightly above the other's,
//! so plain updates drain the lower cluster.

#![allow(dead_code)]

use molbench_collapse::{greedy_partition, FinitePolicy, Partition, RewardLandscape, UpdateParams};

pub const HIGH: [f64; 4] = [0.80, 0.78, 0.77, 0.76];
pub const LOW: [f64; 4] = [0.75, 0.74, 0.73, 0.72];
pub const GROUP: usize = 8;
pub const STEPS: usize = 500;

pub fn landscape() -> (RewardLandscape, Partition, FinitePolicy) {
    let l = RewardLandscape::blocks(&[HIGH.to_vec(), LOW.to_vec()], 0.8, 0.1).unwrap();
    let p = greedy_partition(&l, 0.7);
    assert_eq!(p.len(), 2);
    (l, p, FinitePolicy::uniform(8))
}

pub fn params(alpha: f64) -> UpdateParams {
    UpdateParams { eta: 2.0, lambda: 0.0, alpha, epsilon: 1e-3, eps_low: 0.2, eps_high: 0.2, steps: STEPS }
}
