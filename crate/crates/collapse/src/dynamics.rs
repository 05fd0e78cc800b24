use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::landscape::{cluster_mass, FinitePolicy, Partition, RewardLandscape};
use crate::CollapseError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UpdateParams {
    pub eta: f64,
    #[serde(default)]
    pub lambda: f64,
    #[serde(default)]
    pub alpha: f64,
    pub epsilon: f64,
    pub eps_low: f64,
    pub eps_high: f64,
    pub steps: usize,
}

impl UpdateParams {
    pub fn validate(&self) -> Result<(), CollapseError> {
        let bad = |what: &str| Err(CollapseError::Params(what.to_string()));
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return bad("eta must be > 0");
        }
        if !(self.lambda >= 0.0 && self.alpha >= 0.0) {
            return bad("lambda and alpha must be >= 0");
        }
        if !(self.epsilon > 0.0) {
            return bad("epsilon must be > 0");
        }
        if !(self.eps_low >= 0.0 && self.eps_high >= 0.0) {
            return bad("clip bounds must be >= 0");
        }
        Ok(())
    }
}

/// A(o) = r(o) - E_pi[r], with the expectation taken over the whole support.
pub fn centered_advantage(policy: &FinitePolicy, landscape: &RewardLandscape) -> Result<Vec<f64>, CollapseError> {
    check_len(policy, landscape.len())?;
    let mean: f64 = policy.probs.iter().zip(&landscape.reward).map(|(p, r)| p * r).sum();
    Ok(landscape.reward.iter().map(|r| r - mean).collect())
}

/// pi_new(o) proportional to pi_old(o) exp(eta A(o)), computed in log space
/// with the largest exponent shifted to zero.
pub fn exp_update(policy: &FinitePolicy, advantages: &[f64], eta: f64) -> Result<FinitePolicy, CollapseError> {
    check_len(policy, advantages.len())?;
    if !(eta > 0.0) {
        return Err(CollapseError::Params("eta must be > 0".into()));
    }
    let logw: Vec<f64> = policy.probs.iter().zip(advantages).map(|(p, a)| p.ln() + eta * a).collect();
    Ok(policy.with_probs(softmax(&logw)))
}

/// Normalized exp of log-weights; `-inf` entries come out as exact zeros.
pub(crate) fn softmax(logw: &[f64]) -> Vec<f64> {
    let max = logw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = logw.iter().map(|l| (l - max).exp()).collect();
    let z: f64 = w.iter().sum();
    w.into_iter().map(|x| x / z).collect()
}

fn check_len(policy: &FinitePolicy, n: usize) -> Result<(), CollapseError> {
    if policy.len() != n {
        return Err(CollapseError::Shape { expected: policy.len(), got: n });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    pub entropy: f64,
    pub probs: Vec<f64>,
    /// pi(best) / max over the other answers.
    pub top_ratio: f64,
    /// Largest relative deviation from the closed-form ratio identity.
    pub ratio_rel_err: Option<f64>,
    pub cluster_masses: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct Trajectory {
    pub steps: Vec<StepRecord>,
}

impl Trajectory {
    pub fn last(&self) -> Option<&StepRecord> {
        self.steps.last()
    }

    fn push(&mut self, step: usize, policy: &FinitePolicy, best: usize, partition: &Partition, ratio_rel_err: Option<f64>) {
        let other = policy.probs.iter().enumerate().filter(|(i, _)| *i != best).map(|(_, p)| *p).fold(0.0, f64::max);
        self.steps.push(StepRecord {
            step,
            entropy: policy.entropy(),
            probs: policy.probs.clone(),
            top_ratio: policy.probs[best] / other,
            ratio_rel_err,
            cluster_masses: cluster_mass(policy, partition),
        });
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollapseRun {
    pub trajectory: Trajectory,
    pub best: usize,
    /// Smallest reward gap between the best answer and any other.
    pub gap: f64,
    pub max_ratio_rel_err: f64,
    /// Whether pi_t(best)/pi_t(o) >= pi_0 ratio * exp(eta gap t) held at every step.
    pub gap_bound_holds: bool,
    /// Ratio pairs dropped from the check after the smaller probability went subnormal.
    pub underflowed_pairs: usize,
}

/// Index of the unique best answer among those with positive mass, and its gap.
pub fn reward_gap(policy: &FinitePolicy, landscape: &RewardLandscape) -> Result<(usize, f64), CollapseError> {
    let live: Vec<usize> = (0..policy.len()).filter(|&i| policy.probs[i] > 0.0).collect();
    let best = *live
        .iter()
        .max_by(|&&a, &&b| landscape.reward[a].total_cmp(&landscape.reward[b]).then(b.cmp(&a)))
        .ok_or(CollapseError::DegenerateGap)?;
    let gap = live.iter().filter(|&&i| i != best).map(|&i| landscape.reward[best] - landscape.reward[i]).fold(f64::INFINITY, f64::min);
    if !(gap > 0.0) {
        return Err(CollapseError::DegenerateGap);
    }
    Ok((best, gap))
}

/// Repeated exact updates, checking every step against the ratio identity
/// pi_t(a)/pi_t(b) = pi_0(a)/pi_0(b) exp(eta t (r(a) - r(b))).
pub fn run_collapse(
    policy0: &FinitePolicy,
    landscape: &RewardLandscape,
    partition: &Partition,
    eta: f64,
    steps: usize,
) -> Result<(FinitePolicy, CollapseRun), CollapseError> {
    check_len(policy0, landscape.len())?;
    partition.assignment(landscape.len())?;
    let (best, gap) = reward_gap(policy0, landscape)?;
    let mut run = CollapseRun {
        trajectory: Trajectory::default(),
        best,
        gap,
        max_ratio_rel_err: 0.0,
        gap_bound_holds: true,
        underflowed_pairs: 0,
    };
    let mut live: Vec<usize> = (0..policy0.len()).filter(|&i| i != best && policy0.probs[i] > 0.0).collect();
    let mut policy = policy0.clone();
    run.trajectory.push(0, &policy, best, partition, Some(0.0));
    for t in 1..=steps {
        let adv = centered_advantage(&policy, landscape)?;
        policy = exp_update(&policy, &adv, eta)?;
        let mut err: f64 = 0.0;
        live.retain(|&o| {
            if policy.probs[o] < f64::MIN_POSITIVE {
                run.underflowed_pairs += 1;
                return false;
            }
            let log_measured = policy.probs[best].ln() - policy.probs[o].ln();
            let log_start = policy0.probs[best].ln() - policy0.probs[o].ln();
            let log_predicted = log_start + eta * t as f64 * (landscape.reward[best] - landscape.reward[o]);
            err = err.max((log_measured - log_predicted).exp_m1().abs());
            // the bound with the minimum gap, allowing rounding in the last place
            if log_measured < log_start + eta * gap * t as f64 - 1e-9 * log_measured.abs().max(1.0) {
                run.gap_bound_holds = false;
            }
            true
        });
        run.max_ratio_rel_err = run.max_ratio_rel_err.max(err);
        run.trajectory.push(t, &policy, best, partition, Some(err));
    }
    Ok((policy, run))
}

/// pi_t in closed form: pi_0(o) exp(eta t r(o)), normalized.
pub fn closed_form_policy(policy0: &FinitePolicy, landscape: &RewardLandscape, eta: f64, t: f64) -> FinitePolicy {
    let logw: Vec<f64> = policy0.probs.iter().zip(&landscape.reward).map(|(p, r)| p.ln() + eta * t * r).collect();
    policy0.with_probs(softmax(&logw))
}

/// First step at which the closed-form entropy falls below `threshold`.
pub fn predicted_entropy_step(
    policy0: &FinitePolicy,
    landscape: &RewardLandscape,
    eta: f64,
    threshold: f64,
    max_steps: usize,
) -> Option<usize> {
    (0..=max_steps).find(|&t| closed_form_policy(policy0, landscape, eta, t as f64).entropy() < threshold)
}

/// Result of one coverage-regularized step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageStep {
    pub policy: FinitePolicy,
    /// Spread of the first-order condition across the live support.
    pub residual: f64,
}

pub const COVERAGE_TOLERANCE: f64 = 1e-10;

/// Maximizer of E_pi[A] - KL(pi||pi_old)/eta - lambda KL(p||u), p the
/// cluster masses under `partition` and u uniform over clusters.
///
/// Stationarity gives pi(o) = p_c w(o)/W_c with w = pi_old exp(eta A) and
/// W_c the cluster sum of w, and the masses solve p_c^(1 + eta lambda) ∝ W_c.
/// The step therefore reduces to a power of the exp-update cluster masses.
pub fn coverage_step(
    policy: &FinitePolicy,
    advantages: &[f64],
    partition: &Partition,
    eta: f64,
    lambda: f64,
) -> Result<CoverageStep, CollapseError> {
    if !(lambda >= 0.0) {
        return Err(CollapseError::Params("lambda must be >= 0".into()));
    }
    let assign = partition.assignment(policy.len())?;
    let plain = exp_update(policy, advantages, eta)?;
    if lambda == 0.0 {
        return Ok(CoverageStep { residual: coverage_residual(policy, &plain, advantages, &assign, partition.len(), eta, 0.0), policy: plain });
    }
    let w = &plain.probs;
    let masses = cluster_mass(&plain, partition);
    let power = 1.0 / (1.0 + eta * lambda);
    let log_target: Vec<f64> = masses.iter().map(|m| m.ln() * power).collect();
    let target = softmax(&log_target);
    let probs: Vec<f64> =
        (0..w.len()).map(|o| if w[o] == 0.0 { 0.0 } else { target[assign[o]] * (w[o] / masses[assign[o]]) }).collect();
    let z: f64 = probs.iter().sum();
    let out = policy.with_probs(probs.into_iter().map(|p| p / z).collect());
    let residual = coverage_residual(policy, &out, advantages, &assign, partition.len(), eta, lambda);
    if !(residual < COVERAGE_TOLERANCE) {
        return Err(CollapseError::NonConvergence { residual });
    }
    Ok(CoverageStep { policy: out, residual })
}

/// Max minus min over the live support of the objective gradient
/// A(o) - (ln(pi/pi_old) + 1)/eta - lambda (ln(m p_c) + 1).
pub fn coverage_residual(
    old: &FinitePolicy,
    new: &FinitePolicy,
    advantages: &[f64],
    assign: &[usize],
    n_clusters: usize,
    eta: f64,
    lambda: f64,
) -> f64 {
    let mut masses = vec![0.0; n_clusters];
    for (o, p) in new.probs.iter().enumerate() {
        masses[assign[o]] += p;
    }
    let grads: Vec<f64> = (0..new.len())
        .filter(|&o| new.probs[o] > 0.0)
        .map(|o| {
            let kl = (new.probs[o].ln() - old.probs[o].ln() + 1.0) / eta;
            let cov = if lambda == 0.0 { 0.0 } else { lambda * ((n_clusters as f64 * masses[assign[o]]).ln() + 1.0) };
            advantages[o] - kl - cov
        })
        .collect();
    let hi = grads.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = grads.iter().copied().fold(f64::INFINITY, f64::min);
    if grads.is_empty() {
        0.0
    } else {
        hi - lo
    }
}

/// Value of the coverage-regularized objective at `new`.
pub fn coverage_objective(
    old: &FinitePolicy,
    new: &FinitePolicy,
    advantages: &[f64],
    partition: &Partition,
    eta: f64,
    lambda: f64,
) -> f64 {
    let gain: f64 = new.probs.iter().zip(advantages).map(|(p, a)| p * a).sum();
    let kl: f64 = new.probs.iter().zip(&old.probs).filter(|(p, _)| **p > 0.0).map(|(p, q)| p * (p / q).ln()).sum();
    let m = partition.len() as f64;
    let kl_u: f64 = cluster_mass(new, partition).iter().filter(|p| **p > 0.0).map(|p| p * (p * m).ln()).sum();
    gain - kl / eta - lambda * kl_u
}

/// One group of G draws with per-cluster counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSample {
    pub draws: Vec<usize>,
    pub draw_clusters: Vec<usize>,
    pub cluster_counts: Vec<usize>,
}

impl GroupSample {
    pub fn g(&self) -> usize {
        self.draws.len()
    }

    pub fn draw<R: Rng>(
        policy: &FinitePolicy,
        assign: &[usize],
        n_clusters: usize,
        g: usize,
        rng: &mut R,
    ) -> Result<GroupSample, CollapseError> {
        let dist = WeightedIndex::new(&policy.probs).map_err(|e| CollapseError::NotAProbability(e.to_string()))?;
        let draws: Vec<usize> = (0..g).map(|_| dist.sample(rng)).collect();
        Ok(GroupSample::from_draws(draws, assign, n_clusters))
    }

    pub fn from_draws(draws: Vec<usize>, assign: &[usize], n_clusters: usize) -> GroupSample {
        let draw_clusters: Vec<usize> = draws.iter().map(|&o| assign[o]).collect();
        let mut cluster_counts = vec![0; n_clusters];
        for &c in &draw_clusters {
            cluster_counts[c] += 1;
        }
        GroupSample { draws, draw_clusters, cluster_counts }
    }
}

/// Exploration bonus per draw: -ln(n_c / G + epsilon).
pub fn bonus_terms(group: &GroupSample, epsilon: f64) -> Vec<f64> {
    let g = group.g() as f64;
    group.draw_clusters.iter().map(|&c| -(group.cluster_counts[c] as f64 / g + epsilon).ln()).collect()
}

/// r'(o_i) = r(o_i) + alpha * bonus(o_i); `rewards` are per draw.
pub fn group_bonus(group: &GroupSample, rewards: &[f64], alpha: f64, epsilon: f64) -> Vec<f64> {
    if alpha == 0.0 {
        return rewards.to_vec();
    }
    rewards.iter().zip(bonus_terms(group, epsilon)).map(|(r, b)| r + alpha * b).collect()
}

/// Advantage per support element from one group: r'(o) minus the group mean
/// for sampled answers, zero for the rest.
pub fn empirical_advantage(n: usize, group: &GroupSample, bonused: &[f64]) -> Vec<f64> {
    let mean = bonused.iter().sum::<f64>() / bonused.len() as f64;
    let mut adv = vec![0.0; n];
    for (&o, r) in group.draws.iter().zip(bonused) {
        adv[o] = r - mean;
    }
    adv
}

pub fn grpo_step<R: Rng>(
    policy: &FinitePolicy,
    landscape: &RewardLandscape,
    partition: &Partition,
    assign: &[usize],
    params: &UpdateParams,
    g: usize,
    rng: &mut R,
) -> Result<(FinitePolicy, GroupSample), CollapseError> {
    let group = GroupSample::draw(policy, assign, partition.len(), g, rng)?;
    let rewards: Vec<f64> = group.draws.iter().map(|&o| landscape.reward[o]).collect();
    let bonused = group_bonus(&group, &rewards, params.alpha, params.epsilon);
    let adv = empirical_advantage(policy.len(), &group, &bonused);
    Ok((exp_update(policy, &adv, params.eta)?, group))
}

/// `params.steps` sampled group updates from `policy`.
pub fn simulate_grpo_group<R: Rng>(
    policy: &FinitePolicy,
    landscape: &RewardLandscape,
    partition: &Partition,
    params: &UpdateParams,
    g: usize,
    rng: &mut R,
) -> Result<(FinitePolicy, Trajectory), CollapseError> {
    params.validate()?;
    if g < 2 {
        return Err(CollapseError::Params("group size must be >= 2".into()));
    }
    check_len(policy, landscape.len())?;
    let assign = partition.assignment(policy.len())?;
    let best = top_answer(landscape);
    let mut traj = Trajectory::default();
    let mut pi = policy.clone();
    traj.push(0, &pi, best, partition, None);
    for t in 1..=params.steps {
        pi = grpo_step(&pi, landscape, partition, &assign, params, g, rng)?.0;
        traj.push(t, &pi, best, partition, None);
    }
    Ok((pi, traj))
}

/// `params.steps` exact coverage-regularized steps.
pub fn simulate_coverage(
    policy: &FinitePolicy,
    landscape: &RewardLandscape,
    partition: &Partition,
    params: &UpdateParams,
) -> Result<(FinitePolicy, Trajectory), CollapseError> {
    params.validate()?;
    let best = top_answer(landscape);
    let mut traj = Trajectory::default();
    let mut pi = policy.clone();
    traj.push(0, &pi, best, partition, None);
    for t in 1..=params.steps {
        let adv = centered_advantage(&pi, landscape)?;
        pi = coverage_step(&pi, &adv, partition, params.eta, params.lambda)?.policy;
        traj.push(t, &pi, best, partition, None);
    }
    Ok((pi, traj))
}

fn top_answer(landscape: &RewardLandscape) -> usize {
    (0..landscape.len()).max_by(|&a, &b| landscape.reward[a].total_cmp(&landscape.reward[b]).then(b.cmp(&a))).unwrap_or(0)
}
