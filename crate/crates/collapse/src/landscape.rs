use serde::{Deserialize, Serialize};

use crate::CollapseError;

/// A probability vector over a finite answer support.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FinitePolicy {
    pub support: Vec<String>,
    pub probs: Vec<f64>,
}

impl FinitePolicy {
    pub fn new(support: Vec<String>, probs: Vec<f64>) -> Result<FinitePolicy, CollapseError> {
        if support.len() != probs.len() {
            return Err(CollapseError::Shape { expected: support.len(), got: probs.len() });
        }
        if probs.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(CollapseError::NotAProbability("negative or non-finite entry".into()));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(CollapseError::NotAProbability(format!("sums to {total}")));
        }
        Ok(FinitePolicy { support, probs })
    }

    pub fn uniform(n: usize) -> FinitePolicy {
        FinitePolicy { support: (0..n).map(|i| i.to_string()).collect(), probs: vec![1.0 / n as f64; n] }
    }

    /// Normalizes non-negative weights; ids are the indices.
    pub fn from_weights(weights: &[f64]) -> Result<FinitePolicy, CollapseError> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0 && total.is_finite()) || weights.iter().any(|w| *w < 0.0) {
            return Err(CollapseError::NotAProbability("weights must be non-negative with a positive sum".into()));
        }
        Ok(FinitePolicy {
            support: (0..weights.len()).map(|i| i.to_string()).collect(),
            probs: weights.iter().map(|w| w / total).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Shannon entropy in nats.
    pub fn entropy(&self) -> f64 {
        -self.probs.iter().filter(|&&p| p > 0.0).map(|p| p * p.ln()).sum::<f64>()
    }

    pub(crate) fn with_probs(&self, probs: Vec<f64>) -> FinitePolicy {
        FinitePolicy { support: self.support.clone(), probs }
    }
}

/// Rewards and pairwise similarity over the policy support.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RewardLandscape {
    pub reward: Vec<f64>,
    pub sim: Vec<Vec<f64>>,
}

impl RewardLandscape {
    pub fn new(reward: Vec<f64>, sim: Vec<Vec<f64>>) -> Result<RewardLandscape, CollapseError> {
        let n = reward.len();
        if sim.len() != n || sim.iter().any(|row| row.len() != n) {
            return Err(CollapseError::Shape { expected: n, got: sim.len() });
        }
        if reward.iter().any(|r| !(0.0..=1.0).contains(r)) {
            return Err(CollapseError::Landscape("rewards must lie in [0, 1]".into()));
        }
        for i in 0..n {
            if sim[i][i] != 1.0 {
                return Err(CollapseError::Landscape(format!("sim({i},{i}) must be 1")));
            }
            for j in 0..n {
                if !(0.0..=1.0).contains(&sim[i][j]) || sim[i][j] != sim[j][i] {
                    return Err(CollapseError::Landscape(format!("sim({i},{j}) not symmetric in [0, 1]")));
                }
            }
        }
        Ok(RewardLandscape { reward, sim })
    }

    /// Rewards with no similarity structure: identity similarity.
    pub fn unstructured(reward: Vec<f64>) -> Result<RewardLandscape, CollapseError> {
        let n = reward.len();
        let sim = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        RewardLandscape::new(reward, sim)
    }

    /// Block similarity: `within` inside each block, `between` across.
    pub fn blocks(rewards: &[Vec<f64>], within: f64, between: f64) -> Result<RewardLandscape, CollapseError> {
        let block: Vec<usize> = rewards.iter().enumerate().flat_map(|(b, rs)| std::iter::repeat_n(b, rs.len())).collect();
        let n = block.len();
        let sim = (0..n)
            .map(|i| {
                (0..n).map(|j| if i == j { 1.0 } else if block[i] == block[j] { within } else { between }).collect()
            })
            .collect();
        RewardLandscape::new(rewards.concat(), sim)
    }

    pub fn len(&self) -> usize {
        self.reward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reward.is_empty()
    }
}

/// Clusters of support indices with one representative each.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    pub clusters: Vec<Vec<usize>>,
    pub representatives: Vec<usize>,
}

impl Partition {
    pub fn singletons(n: usize) -> Partition {
        Partition { clusters: (0..n).map(|i| vec![i]).collect(), representatives: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    /// Cluster index of every support element.
    pub fn assignment(&self, n: usize) -> Result<Vec<usize>, CollapseError> {
        let mut out = vec![usize::MAX; n];
        for (c, members) in self.clusters.iter().enumerate() {
            for &i in members {
                if i >= n || out[i] != usize::MAX {
                    return Err(CollapseError::Partition(format!("element {i} out of range or repeated")));
                }
                out[i] = c;
            }
        }
        if out.contains(&usize::MAX) {
            return Err(CollapseError::Partition("partition does not cover the support".into()));
        }
        Ok(out)
    }
}

/// Greedy clusters: take the best remaining answer (lowest index on ties)
/// and absorb every remaining answer at similarity `>= s_max` to it.
pub fn greedy_partition(landscape: &RewardLandscape, s_max: f64) -> Partition {
    let mut remaining: Vec<usize> = (0..landscape.len()).collect();
    remaining.sort_by(|&a, &b| landscape.reward[b].total_cmp(&landscape.reward[a]).then(a.cmp(&b)));
    let mut p = Partition { clusters: Vec::new(), representatives: Vec::new() };
    while let Some(&rep) = remaining.first() {
        let (members, rest): (Vec<usize>, Vec<usize>) =
            remaining.iter().partition(|&&i| i == rep || landscape.sim[i][rep] >= s_max);
        p.representatives.push(rep);
        p.clusters.push(members);
        remaining = rest;
    }
    p
}

/// Total probability of each cluster.
pub fn cluster_mass(policy: &FinitePolicy, partition: &Partition) -> Vec<f64> {
    partition.clusters.iter().map(|c| c.iter().map(|&i| policy.probs[i]).sum()).collect()
}
