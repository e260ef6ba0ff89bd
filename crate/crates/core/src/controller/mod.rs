//! REINFORCE controller over discretised mass hyperparameters, the
//! FLOPs-regularised reward and episode discounting.

mod policy;
mod reward;
mod search;

pub use policy::{Action, Policy, PolicyConfig, HEADS};
pub use reward::{compute_reward, discounted_return, Reward};
pub use search::{
    history_csv, pipeline_step, run_search, BestState, EpisodeLog, FlowConfigDef, SearchConfig, SearchOutcome,
    StepOutcome, StepRecord,
};
