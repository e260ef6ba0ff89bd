use std::collections::HashMap;
use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::policy::{Action, Policy, PolicyConfig};
use super::reward::{compute_reward, discounted_return, Reward};
use crate::curvature::MassParams;
use crate::error::{Error, Result};
use crate::eval::{EvalReport, Evaluator};
use crate::flow::{flops_estimate, prune, run_flow, CostModel, FlowConfig, FlowState, PruneResult};
use crate::graph::Dag;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub episodes: usize,
    pub steps: usize,
    /// Episodes per policy update.
    pub batch: usize,
    pub mu: f64,
    pub discount: f64,
    pub policy: PolicyConfig,
    pub flow: FlowConfigDef,
    pub cost: CostModel,
}

/// Serializable mirror of [`FlowConfig`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowConfigDef {
    pub max_iter: usize,
    pub tol: f64,
}

impl From<FlowConfigDef> for FlowConfig {
    fn from(d: FlowConfigDef) -> Self {
        FlowConfig { max_iter: d.max_iter, tol: d.tol }
    }
}

impl Default for SearchConfig {
    fn default() -> Self {
        let flow = FlowConfig::default();
        Self {
            episodes: 20,
            steps: 5,
            batch: 2,
            mu: 0.5,
            discount: 0.9,
            policy: PolicyConfig::default(),
            flow: FlowConfigDef { max_iter: flow.max_iter, tol: flow.tol },
            cost: CostModel::default(),
        }
    }
}

/// Everything one pass of flow, pruning and evaluation produced.
#[derive(Debug, Clone)]
pub struct StepOutcome {
    pub flow: FlowState,
    pub prune: PruneResult,
    pub report: EvalReport,
    pub reward: Reward,
}

/// Flow, prune and evaluate `dag` under fixed mass parameters.
pub fn pipeline_step(
    dag: &Dag,
    params: &MassParams,
    flow_cfg: &FlowConfig,
    cost: &CostModel,
    evaluator: &dyn Evaluator,
    mu: f64,
) -> Result<StepOutcome> {
    let flow = run_flow(dag, params, flow_cfg)?;
    let pruned = prune(dag, &flow, cost)?;
    let report = evaluator.evaluate(&pruned.dag)?;
    let reward = compute_reward(report.accuracy, pruned.flops_after, pruned.flops_before, mu)?;
    Ok(StepOutcome { flow, prune: pruned, report, reward })
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub episode: usize,
    pub step: usize,
    pub action: Action,
    /// `(alpha, beta, delta)`.
    pub values: [f64; 3],
    pub accuracy: f64,
    pub flops_ratio: f64,
    pub reward: f64,
    pub ret: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeLog {
    pub episode: usize,
    pub batch: usize,
    pub steps: Vec<StepRecord>,
}

/// Highest-reward hyperparameter state seen during a search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BestState {
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
    pub reward: f64,
}

impl BestState {
    pub fn mass_params(&self) -> Result<MassParams> {
        MassParams::new(self.alpha, self.beta, self.delta)
    }
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub best: BestState,
    pub best_flops_ratio: f64,
    pub history: Vec<EpisodeLog>,
    pub policy: Policy,
    pub skipped_updates: usize,
}

impl SearchOutcome {
    pub fn steps(&self) -> impl Iterator<Item = &StepRecord> {
        self.history.iter().flat_map(|e| e.steps.iter())
    }
}

/// CSV `episode,step,alpha,beta,delta,accuracy,flops_ratio,reward,return`, values
/// in shortest round-trip form.
pub fn history_csv(history: &[EpisodeLog]) -> String {
    let mut out = String::from("episode,step,alpha,beta,delta,accuracy,flops_ratio,reward,return\n");
    for s in history.iter().flat_map(|e| &e.steps) {
        let [a, b, d] = s.values;
        let _ = writeln!(
            out,
            "{},{},{a},{b},{d},{},{},{},{}",
            s.episode, s.step, s.accuracy, s.flops_ratio, s.reward, s.ret
        );
    }
    out
}

/// REINFORCE search over mass hyperparameters on a fixed DAG.
///
/// Every step samples `(alpha, beta, delta)`, runs flow + prune + evaluation and
/// scores the result. Rewards are discounted within each episode, and the policy
/// takes one gradient step per `batch` episodes. A step whose pipeline fails
/// scores 0. Outcomes are cached per action since the pipeline is deterministic.
pub fn run_search(dag: &Dag, evaluator: &dyn Evaluator, cfg: &SearchConfig) -> Result<SearchOutcome> {
    if cfg.episodes == 0 || cfg.steps == 0 || cfg.batch == 0 {
        return Err(Error::Param("episodes, steps and batch must be positive".into()));
    }
    let mut policy = Policy::new(&cfg.policy)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.policy.seed);
    let flow_cfg = FlowConfig::from(cfg.flow);
    let baseline_flops = flops_estimate(dag, &cfg.cost);
    let mut cache: HashMap<[usize; 3], (f64, f64, f64)> = HashMap::new();

    let mut history = Vec::with_capacity(cfg.episodes);
    let mut pending: Vec<(Action, f64)> = Vec::new();
    let mut pending_episodes = 0;
    let mut skipped_updates = 0;

    for episode in 0..cfg.episodes {
        let mut steps = Vec::with_capacity(cfg.steps);
        for step in 0..cfg.steps {
            let action = policy.sample(&mut rng);
            let (accuracy, flops_ratio, reward) = *cache.entry(action.bins).or_insert_with(|| {
                let outcome = policy
                    .mass_params(&action)
                    .and_then(|p| pipeline_step(dag, &p, &flow_cfg, &cfg.cost, evaluator, cfg.mu));
                match outcome {
                    Ok(o) => (o.reward.accuracy, o.prune.flops_ratio(), o.reward.value),
                    Err(e) => {
                        log::warn!("step {episode}/{step} failed ({e}); scoring 0");
                        let r = Reward::failed(baseline_flops, cfg.mu);
                        (r.accuracy, 0.0, r.value)
                    }
                }
            });
            steps.push(StepRecord {
                episode,
                step,
                values: policy.values(&action),
                action,
                accuracy,
                flops_ratio,
                reward,
                ret: 0.0,
            });
        }
        let rewards: Vec<f64> = steps.iter().map(|s| s.reward).collect();
        for (s, v) in steps.iter_mut().zip(discounted_return(&rewards, cfg.discount)?) {
            s.ret = v;
            pending.push((s.action, v));
        }
        history.push(EpisodeLog { episode, batch: episode / cfg.batch, steps });
        pending_episodes += 1;

        if pending_episodes == cfg.batch || episode + 1 == cfg.episodes {
            if !policy.reinforce_update(&pending, pending_episodes) {
                skipped_updates += 1;
            }
            pending.clear();
            pending_episodes = 0;
        }
    }

    let best = history
        .iter()
        .flat_map(|e| &e.steps)
        .fold(None::<&StepRecord>, |best, s| match best {
            Some(b) if b.reward >= s.reward => Some(b),
            _ => Some(s),
        })
        .expect("at least one step");
    let [alpha, beta, delta] = best.values;
    Ok(SearchOutcome {
        best: BestState { alpha, beta, delta, reward: best.reward },
        best_flops_ratio: best.flops_ratio,
        history,
        policy,
        skipped_updates,
    })
}
