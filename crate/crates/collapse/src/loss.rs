use serde::{Deserialize, Serialize};

use crate::CollapseError;

/// Clipped surrogate objective (to be maximized), averaged over all tokens:
/// `1/sum|o_i| * sum_i sum_t min(rho A, clip(rho, 1-eps_low, 1+eps_high) A)`.
///
/// `ratios` and `advantages` are flattened per token, sequence by sequence,
/// with `token_counts[i]` tokens for sequence i.
pub fn grpo_clip_loss(
    ratios: &[f64],
    advantages: &[f64],
    eps_low: f64,
    eps_high: f64,
    token_counts: &[usize],
) -> Result<f64, CollapseError> {
    let total: usize = token_counts.iter().sum();
    if ratios.len() != total || advantages.len() != total {
        return Err(CollapseError::ShapeMismatch { tokens: total, ratios: ratios.len(), advantages: advantages.len() });
    }
    if total == 0 {
        return Err(CollapseError::ShapeMismatch { tokens: 0, ratios: 0, advantages: 0 });
    }
    if ratios.iter().any(|r| !(*r > 0.0)) {
        return Err(CollapseError::Params("probability ratios must be > 0".into()));
    }
    let sum: f64 = ratios
        .iter()
        .zip(advantages)
        .map(|(&r, &a)| (r * a).min(r.clamp(1.0 - eps_low, 1.0 + eps_high) * a))
        .sum();
    Ok(sum / total as f64)
}

/// Repeats each sequence-level advantage over that sequence's tokens.
pub fn per_token(values: &[f64], token_counts: &[usize]) -> Vec<f64> {
    values.iter().zip(token_counts).flat_map(|(&v, &n)| std::iter::repeat_n(v, n)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizedAdvantages {
    pub values: Vec<Vec<f64>>,
    pub degenerate_std: bool,
}

/// Group-centred rewards, then standardized over the whole batch with the
/// population standard deviation. A zero spread gives all zeros, flagged.
pub fn normalize_advantages(groups: &[Vec<f64>]) -> Result<NormalizedAdvantages, CollapseError> {
    if let Some(g) = groups.iter().find(|g| g.len() < 2) {
        return Err(CollapseError::Params(format!("group of size {} (need >= 2)", g.len())));
    }
    let centred: Vec<Vec<f64>> = groups
        .iter()
        .map(|g| {
            let mean = g.iter().sum::<f64>() / g.len() as f64;
            g.iter().map(|r| r - mean).collect()
        })
        .collect();
    let flat: Vec<f64> = centred.concat();
    let n = flat.len() as f64;
    let mean = flat.iter().sum::<f64>() / n;
    let std = (flat.iter().map(|a| (a - mean).powi(2)).sum::<f64>() / n).sqrt();
    if !(std > 1e-12) {
        return Ok(NormalizedAdvantages { values: groups.iter().map(|g| vec![0.0; g.len()]).collect(), degenerate_std: true });
    }
    let values = centred.into_iter().map(|g| g.into_iter().map(|a| (a - mean) / std).collect()).collect();
    Ok(NormalizedAdvantages { values, degenerate_std: false })
}
