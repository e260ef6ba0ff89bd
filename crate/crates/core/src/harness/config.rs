use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::controller::{FlowConfigDef, PolicyConfig, SearchConfig};
use crate::curvature::MassParams;
use crate::error::{Error, Result};
use crate::eval::{make_dataset, DatasetConfig, Evaluator, SurrogateEvaluator, TrainConfig, TrainingEvaluator};
use crate::flow::{CostModel, FlowConfig};
use crate::graph::WsParams;

/// Upper end of the regularisation range the experiments are designed for.
pub const MU_RANGE_MAX: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EvaluatorKind {
    Train,
    Surrogate,
}

/// Flat run configuration. Every key is optional in the JSON file; command-line
/// flags override the file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub n: usize,
    pub k: usize,
    pub p: f64,
    /// Fixed mass parameters; all three or none.
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub delta: Option<f64>,
    pub mu: f64,
    pub episodes: usize,
    pub steps: usize,
    pub batch: usize,
    pub bins: usize,
    pub hidden: usize,
    pub lr: f64,
    pub discount: f64,
    pub max_iter: usize,
    pub tol: f64,
    pub evaluator: EvaluatorKind,
    pub width: usize,
    pub classes: usize,
    pub input_dim: usize,
    pub n_train: usize,
    pub n_test: usize,
    pub epochs: usize,
    pub train_batch: usize,
    pub train_lr: f64,
    pub seed_graph: u64,
    pub seed_policy: u64,
    pub seed_data: u64,
    /// Independent seeds per point in multi-seed experiments.
    pub seeds: usize,
    pub q_grid: Vec<f64>,
    /// Weights-remaining window for the magnitude comparison.
    pub window: [f64; 2],
    pub k_grid: Vec<usize>,
    pub p_grid: Vec<f64>,
    pub mu_grid: Vec<f64>,
    /// Best-state file for `transfer`; defaults to `<out>/best.json`.
    pub best_state: Option<PathBuf>,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        let search = SearchConfig::default();
        let data = DatasetConfig::default();
        let train = TrainConfig::default();
        Self {
            n: 32,
            k: 4,
            p: 0.75,
            alpha: None,
            beta: None,
            delta: None,
            mu: search.mu,
            episodes: search.episodes,
            steps: search.steps,
            batch: search.batch,
            bins: search.policy.bins,
            hidden: search.policy.hidden,
            lr: search.policy.learning_rate,
            discount: search.discount,
            max_iter: search.flow.max_iter,
            tol: search.flow.tol,
            evaluator: EvaluatorKind::Surrogate,
            width: search.cost.width,
            classes: data.classes,
            input_dim: data.input_dim,
            n_train: data.n_train,
            n_test: data.n_test,
            epochs: train.epochs,
            train_batch: train.batch,
            train_lr: train.lr,
            seed_graph: 0,
            seed_policy: 0,
            seed_data: 0,
            seeds: 5,
            q_grid: vec![0.3, 0.4, 0.5, 0.55, 0.6, 0.7, 0.8],
            window: [0.4, 0.5],
            k_grid: vec![2, 4, 6, 8],
            p_grid: vec![0.25, 0.5, 0.75, 1.0],
            mu_grid: (0..=6).map(|i| i as f64 * 0.25).collect(),
            best_state: None,
            out: PathBuf::from("out"),
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Rejects unusable settings. A mu beyond the designed range only warns.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        self.ws_params().validate().map_err(|e| Error::Config(e.to_string()))?;
        self.mass_override().map_err(|e| Error::Config(e.to_string()))?;
        if !(self.mu >= 0.0 && self.mu.is_finite()) {
            return bad(format!("mu must be a non-negative number, got {}", self.mu));
        }
        if self.mu > MU_RANGE_MAX {
            log::warn!("mu = {} lies outside [0, {MU_RANGE_MAX}]", self.mu);
        }
        if self.episodes == 0 || self.steps == 0 || self.batch == 0 {
            return bad("episodes, steps and batch must be positive".into());
        }
        if self.bins < 2 || self.hidden == 0 || self.width == 0 || self.seeds == 0 {
            return bad("bins >= 2 and positive hidden, width and seeds are required".into());
        }
        if !(0.0..=1.0).contains(&self.discount) {
            return bad(format!("discount must lie in [0, 1], got {}", self.discount));
        }
        if self.max_iter == 0 || !(self.tol > 0.0) {
            return bad("max_iter and tol must be positive".into());
        }
        if self.q_grid.iter().any(|q| !(0.0..=1.0).contains(q)) {
            return bad(format!("q_grid entries must lie in [0, 1]: {:?}", self.q_grid));
        }
        let [lo, hi] = self.window;
        if !(0.0 <= lo && lo <= hi && hi <= 1.0) {
            return bad(format!("window must satisfy 0 <= lo <= hi <= 1: {:?}", self.window));
        }
        if self.p_grid.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return bad(format!("p_grid entries must lie in [0, 1]: {:?}", self.p_grid));
        }
        if self.mu_grid.iter().any(|m| !(*m >= 0.0 && m.is_finite())) {
            return bad(format!("mu_grid entries must be non-negative: {:?}", self.mu_grid));
        }
        validate_sizes(&self.dataset_config())
    }

    pub fn ws_params(&self) -> WsParams {
        WsParams::new(self.n, self.k, self.p, self.seed_graph)
    }

    /// The fixed mass parameters, if the config sets them.
    pub fn mass_override(&self) -> Result<Option<MassParams>> {
        match (self.alpha, self.beta, self.delta) {
            (None, None, None) => Ok(None),
            (Some(a), Some(b), Some(d)) => MassParams::new(a, b, d).map(Some),
            _ => Err(Error::Config("alpha, beta and delta must be given together".into())),
        }
    }

    pub fn mass_params(&self) -> Result<MassParams> {
        Ok(self.mass_override()?.unwrap_or_default())
    }

    pub fn flow_config(&self) -> FlowConfig {
        FlowConfig { max_iter: self.max_iter, tol: self.tol }
    }

    pub fn cost_model(&self) -> CostModel {
        CostModel { width: self.width, classes: self.classes }
    }

    pub fn dataset_config(&self) -> DatasetConfig {
        DatasetConfig {
            seed: self.seed_data,
            n_train: self.n_train,
            n_test: self.n_test,
            input_dim: self.input_dim,
            classes: self.classes,
        }
    }

    pub fn train_config(&self) -> TrainConfig {
        TrainConfig { epochs: self.epochs, batch: self.train_batch, lr: self.train_lr, seed: self.seed_data }
    }

    pub fn search_config(&self) -> SearchConfig {
        SearchConfig {
            episodes: self.episodes,
            steps: self.steps,
            batch: self.batch,
            mu: self.mu,
            discount: self.discount,
            policy: PolicyConfig {
                bins: self.bins,
                hidden: self.hidden,
                learning_rate: self.lr,
                seed: self.seed_policy,
            },
            flow: FlowConfigDef { max_iter: self.max_iter, tol: self.tol },
            cost: self.cost_model(),
        }
    }

    pub fn training_evaluator(&self) -> Result<TrainingEvaluator> {
        let data = make_dataset(&self.dataset_config())?;
        Ok(TrainingEvaluator {
            data,
            width: self.width,
            net_seed: self.seed_data,
            train: self.train_config(),
        })
    }

    /// The evaluator named by `evaluator`.
    pub fn build_evaluator(&self) -> Result<Box<dyn Evaluator>> {
        Ok(match self.evaluator {
            EvaluatorKind::Surrogate => Box::new(SurrogateEvaluator { cost: self.cost_model() }),
            EvaluatorKind::Train => Box::new(self.training_evaluator()?),
        })
    }

    pub fn best_state_path(&self) -> PathBuf {
        self.best_state.clone().unwrap_or_else(|| self.out.join("best.json"))
    }
}

fn validate_sizes(d: &DatasetConfig) -> Result<()> {
    if d.classes < 2 || d.input_dim == 0 || d.n_train < d.classes || d.n_test < d.classes {
        return Err(Error::Config(format!("dataset sizes must cover every class: {d:?}")));
    }
    Ok(())
}
