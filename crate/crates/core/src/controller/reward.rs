use crate::error::{Error, Result};

/// Accuracy regularised by relative FLOPs: `value = accuracy - mu * flops / baseline_flops`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reward {
    pub accuracy: f64,
    pub flops: f64,
    pub baseline_flops: f64,
    pub mu: f64,
    pub value: f64,
}

impl Reward {
    pub fn flops_ratio(&self) -> f64 {
        self.flops / self.baseline_flops
    }

    /// Reward of a step whose network could not be built or trained.
    pub fn failed(baseline_flops: f64, mu: f64) -> Self {
        Self { accuracy: 0.0, flops: 0.0, baseline_flops, mu, value: 0.0 }
    }
}

pub fn compute_reward(accuracy: f64, flops: f64, baseline_flops: f64, mu: f64) -> Result<Reward> {
    if !(baseline_flops > 0.0 && baseline_flops.is_finite()) {
        return Err(Error::Param(format!("baseline FLOPs must be positive, got {baseline_flops}")));
    }
    if !(0.0..=1.0).contains(&accuracy) {
        return Err(Error::Param(format!("accuracy must lie in [0, 1], got {accuracy}")));
    }
    if !(mu >= 0.0 && mu.is_finite()) {
        return Err(Error::Param(format!("mu must be non-negative, got {mu}")));
    }
    if !(flops >= 0.0 && flops.is_finite()) {
        return Err(Error::Param(format!("FLOPs must be non-negative, got {flops}")));
    }
    Ok(Reward {
        accuracy,
        flops,
        baseline_flops,
        mu,
        value: accuracy - mu * flops / baseline_flops,
    })
}

/// Discounted return of every step: `v_c = sum_k gamma^k * J_{c+k}` over the rest
/// of the episode.
pub fn discounted_return(rewards: &[f64], gamma: f64) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::Param(format!("discount must lie in [0, 1], got {gamma}")));
    }
    let mut out = vec![0.0; rewards.len()];
    let mut acc = 0.0;
    for (i, r) in rewards.iter().enumerate().rev() {
        acc = r + gamma * acc;
        out[i] = acc;
    }
    Ok(out)
}
