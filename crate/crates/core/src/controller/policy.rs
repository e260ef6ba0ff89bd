use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::curvature::MassParams;
use crate::error::{Error, Result};

/// Number of hyperparameter heads: alpha, beta, delta.
pub const HEADS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolicyConfig {
    pub bins: usize,
    pub hidden: usize,
    pub learning_rate: f64,
    pub seed: u64,
}

impl Default for PolicyConfig {
    fn default() -> Self {
        Self { bins: 11, hidden: 32, learning_rate: 0.01, seed: 0 }
    }
}

/// One sampled hyperparameter state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Action {
    /// Chosen bin per head (alpha, beta, delta).
    pub bins: [usize; HEADS],
    pub log_prob: f64,
}

/// Autoregressive categorical controller over discretised `(alpha, beta, delta)`.
///
/// A single tanh hidden layer is shared by the three heads. Head `t` sees a
/// constant 1, a one-hot of its own index and a one-hot of the bin chosen by head
/// `t - 1` (all zeros for the first head); each head has its own linear output
/// layer over the bins. The delta head is masked to bins with `delta <= 1 - beta`.
///
/// All parameters live in one flat vector:
/// `[w1 (hidden x input) | b1 (hidden) | per head: w2 (bins x hidden) | b2 (bins)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Policy {
    bins: usize,
    hidden: usize,
    learning_rate: f64,
    theta: Vec<f64>,
}

struct HeadEval {
    x: Vec<f64>,
    h: Vec<f64>,
    probs: Vec<f64>,
}

impl Policy {
    /// Output layers start at zero, so every head is uniform over its feasible bins.
    pub fn new(cfg: &PolicyConfig) -> Result<Self> {
        if cfg.bins < 2 {
            return Err(Error::Param(format!("need at least 2 bins, got {}", cfg.bins)));
        }
        if cfg.hidden == 0 || !(cfg.learning_rate.is_finite() && cfg.learning_rate >= 0.0) {
            return Err(Error::Param("hidden width must be positive and learning rate finite".into()));
        }
        let mut policy = Self {
            bins: cfg.bins,
            hidden: cfg.hidden,
            learning_rate: cfg.learning_rate,
            theta: Vec::new(),
        };
        policy.theta = vec![0.0; policy.param_count()];
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let bound = 1.0 / (policy.input_dim() as f64).sqrt();
        let n_w1 = policy.hidden * policy.input_dim();
        for w in &mut policy.theta[..n_w1] {
            *w = rng.random_range(-bound..bound);
        }
        Ok(policy)
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    pub fn learning_rate(&self) -> f64 {
        self.learning_rate
    }

    pub fn params(&self) -> &[f64] {
        &self.theta
    }

    pub fn set_params(&mut self, theta: Vec<f64>) -> Result<()> {
        if theta.len() != self.theta.len() {
            return Err(Error::Param(format!("expected {} parameters, got {}", self.theta.len(), theta.len())));
        }
        self.theta = theta;
        Ok(())
    }

    /// Evenly spaced grid value of bin `i` on [0, 1].
    pub fn bin_value(&self, i: usize) -> f64 {
        i as f64 / (self.bins - 1) as f64
    }

    pub fn bin_values(&self) -> Vec<f64> {
        (0..self.bins).map(|i| self.bin_value(i)).collect()
    }

    fn input_dim(&self) -> usize {
        1 + HEADS + self.bins
    }

    fn head_offset(&self, t: usize) -> usize {
        self.hidden * self.input_dim() + self.hidden + t * (self.bins * self.hidden + self.bins)
    }

    pub fn param_count(&self) -> usize {
        self.head_offset(HEADS)
    }

    /// Bins of head `t` that are allowed given the earlier choices.
    fn feasible(&self, t: usize, prefix: &[usize]) -> Vec<bool> {
        if t == 2 {
            let beta = self.bin_value(prefix[1]);
            (0..self.bins).map(|i| i == 0 || self.bin_value(i) <= 1.0 - beta + 1e-9).collect()
        } else {
            vec![true; self.bins]
        }
    }

    fn eval_head(&self, t: usize, prefix: &[usize]) -> HeadEval {
        let (hidden, input_dim, bins) = (self.hidden, self.input_dim(), self.bins);
        let mut x = vec![0.0; input_dim];
        x[0] = 1.0;
        x[1 + t] = 1.0;
        if t > 0 {
            x[1 + HEADS + prefix[t - 1]] = 1.0;
        }
        let w1 = &self.theta[..hidden * input_dim];
        let b1 = &self.theta[hidden * input_dim..hidden * input_dim + hidden];
        let h: Vec<f64> = (0..hidden)
            .map(|j| {
                let row = &w1[j * input_dim..(j + 1) * input_dim];
                (row.iter().zip(&x).map(|(w, v)| w * v).sum::<f64>() + b1[j]).tanh()
            })
            .collect();
        let off = self.head_offset(t);
        let w2 = &self.theta[off..off + bins * hidden];
        let b2 = &self.theta[off + bins * hidden..off + bins * hidden + bins];
        let feasible = self.feasible(t, prefix);
        let logits: Vec<f64> = (0..bins)
            .map(|i| w2[i * hidden..(i + 1) * hidden].iter().zip(&h).map(|(w, v)| w * v).sum::<f64>() + b2[i])
            .collect();
        let max = logits
            .iter()
            .zip(&feasible)
            .filter(|(_, f)| **f)
            .map(|(l, _)| *l)
            .fold(f64::NEG_INFINITY, f64::max);
        let exps: Vec<f64> = logits
            .iter()
            .zip(&feasible)
            .map(|(l, f)| if *f { (l - max).exp() } else { 0.0 })
            .collect();
        let z: f64 = exps.iter().sum();
        HeadEval { x, h, probs: exps.into_iter().map(|e| e / z).collect() }
    }

    /// Distribution of head `t` given the bins already chosen by earlier heads.
    pub fn head_probs(&self, t: usize, prefix: &[usize]) -> Vec<f64> {
        self.eval_head(t, prefix).probs
    }

    /// Samples the heads in order, each conditioned on the previous choice.
    pub fn sample(&self, rng: &mut impl Rng) -> Action {
        let mut bins = [0usize; HEADS];
        let mut log_prob = 0.0;
        for t in 0..HEADS {
            let probs = self.head_probs(t, &bins[..t]);
            let u: f64 = rng.random();
            let mut acc = 0.0;
            let mut choice = None;
            for (i, &p) in probs.iter().enumerate() {
                acc += p;
                if p > 0.0 && u < acc {
                    choice = Some(i);
                    break;
                }
            }
            // rounding can leave u just above the final cumulative sum
            let choice = choice.unwrap_or_else(|| probs.iter().rposition(|&p| p > 0.0).unwrap_or(0));
            bins[t] = choice;
            log_prob += probs[choice].ln();
        }
        Action { bins, log_prob }
    }

    /// `(alpha, beta, delta)` grid values of an action.
    pub fn values(&self, action: &Action) -> [f64; HEADS] {
        action.bins.map(|b| self.bin_value(b))
    }

    pub fn mass_params(&self, action: &Action) -> Result<MassParams> {
        let [alpha, beta, delta] = self.values(action);
        MassParams::new(alpha, beta, delta.min(1.0 - beta).max(0.0))
    }

    pub fn log_prob(&self, bins: &[usize; HEADS]) -> f64 {
        (0..HEADS).map(|t| self.head_probs(t, &bins[..t])[bins[t]].ln()).sum()
    }

    /// `log P(bins)` and its gradient with respect to the flat parameter vector.
    pub fn log_prob_grad(&self, bins: &[usize; HEADS]) -> (f64, Vec<f64>) {
        let (hidden, input_dim, nb) = (self.hidden, self.input_dim(), self.bins);
        let mut grad = vec![0.0; self.theta.len()];
        let mut total = 0.0;
        for t in 0..HEADS {
            let HeadEval { x, h, probs } = self.eval_head(t, &bins[..t]);
            total += probs[bins[t]].ln();
            // d log softmax / d logits = onehot - probs (zero on masked bins)
            let dlogits: Vec<f64> = (0..nb)
                .map(|i| f64::from(u8::from(i == bins[t])) - probs[i])
                .collect();
            let off = self.head_offset(t);
            let mut dh = vec![0.0; hidden];
            for i in 0..nb {
                for j in 0..hidden {
                    grad[off + i * hidden + j] += dlogits[i] * h[j];
                    dh[j] += self.theta[off + i * hidden + j] * dlogits[i];
                }
                grad[off + nb * hidden + i] += dlogits[i];
            }
            for j in 0..hidden {
                let dz = dh[j] * (1.0 - h[j] * h[j]);
                for (k, xv) in x.iter().enumerate() {
                    grad[j * input_dim + k] += dz * xv;
                }
                grad[hidden * input_dim + j] += dz;
            }
        }
        (total, grad)
    }

    /// REINFORCE ascent step: `theta += lr / m * sum_k sum_t grad log P(a_t | a_<t) R_k`
    /// over `(action, return)` pairs from `m` episodes. Returns `false` (and leaves
    /// the policy untouched) when the gradient is not finite.
    pub fn reinforce_update(&mut self, samples: &[(Action, f64)], episodes: usize) -> bool {
        let m = episodes.max(1) as f64;
        let mut grad = vec![0.0; self.theta.len()];
        for (action, ret) in samples {
            let (_, g) = self.log_prob_grad(&action.bins);
            for (acc, gi) in grad.iter_mut().zip(g) {
                *acc += gi * ret;
            }
        }
        if grad.iter().any(|g| !g.is_finite()) {
            log::warn!("non-finite policy gradient; update skipped");
            return false;
        }
        for (w, g) in self.theta.iter_mut().zip(grad) {
            *w += self.learning_rate * g / m;
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_values() {
        let p = Policy::new(&PolicyConfig::default()).unwrap();
        let v = p.bin_values();
        assert_eq!(v.len(), 11);
        assert_eq!(v[0], 0.0);
        assert_eq!(v[3], 0.3);
        assert_eq!(v[10], 1.0);
        assert!(Policy::new(&PolicyConfig { bins: 1, ..Default::default() }).is_err());
    }

    #[test]
    fn fresh_heads_are_uniform() {
        let p = Policy::new(&PolicyConfig::default()).unwrap();
        for probs in [p.head_probs(0, &[]), p.head_probs(1, &[4])] {
            assert!(probs.iter().all(|&q| (q - 1.0 / 11.0).abs() < 1e-15));
        }
        // beta = 0.7 leaves delta in {0, ..., 0.3}
        let delta = p.head_probs(2, &[0, 7]);
        assert!(delta[..4].iter().all(|&q| (q - 0.25).abs() < 1e-15));
        assert!(delta[4..].iter().all(|&q| q == 0.0));
        assert_eq!(p.head_probs(2, &[0, 10])[0], 1.0);
    }

    #[test]
    fn sampled_actions_are_feasible() {
        let p = Policy::new(&PolicyConfig::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..2000 {
            let a = p.sample(&mut rng);
            p.mass_params(&a).unwrap();
            assert!((a.log_prob - p.log_prob(&a.bins)).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_returns_leave_policy_unchanged() {
        let mut p = Policy::new(&PolicyConfig::default()).unwrap();
        let before = p.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let samples: Vec<_> = (0..4).map(|_| (p.sample(&mut rng), 0.0)).collect();
        assert!(p.reinforce_update(&samples, 2));
        assert_eq!(p, before);
    }

    #[test]
    fn non_finite_returns_skip_update() {
        let mut p = Policy::new(&PolicyConfig::default()).unwrap();
        let before = p.clone();
        let a = p.sample(&mut ChaCha8Rng::seed_from_u64(3));
        assert!(!p.reinforce_update(&[(a, f64::NAN)], 1));
        assert_eq!(p, before);
    }
}
