//! REINFORCE search over the mass hyperparameters with the surrogate
//! evaluator, printing the per-episode mean reward.
//!
//! `cargo run --release --example controller_search -- [mu] [out_dir]`

use std::path::PathBuf;

use riccinets::controller::{history_csv, run_search, SearchConfig};
use riccinets::eval::SurrogateEvaluator;
use riccinets::graph::{to_dag, ws_generate, WsParams};

fn main() -> riccinets::Result<()> {
    let mut args = std::env::args().skip(1);
    let mu: f64 = args.next().map_or(0.5, |s| s.parse().expect("numeric mu"));
    let out = PathBuf::from(args.next().unwrap_or_else(|| "out/controller_search".into()));
    std::fs::create_dir_all(&out)?;

    let dag = to_dag(&ws_generate(&WsParams::new(32, 4, 0.75, 0))?)?;
    let outcome = run_search(&dag, &SurrogateEvaluator::default(), &SearchConfig { mu, ..Default::default() })?;
    for episode in &outcome.history {
        let mean = episode.steps.iter().map(|s| s.reward).sum::<f64>() / episode.steps.len() as f64;
        println!("episode {:>2} (batch {}): mean reward {mean:.4}", episode.episode, episode.batch);
    }
    let b = outcome.best;
    println!(
        "best: alpha {} beta {} delta {} reward {:.4}, FLOPs ratio {:.3}",
        b.alpha, b.beta, b.delta, b.reward, outcome.best_flops_ratio
    );
    std::fs::write(out.join("history.csv"), history_csv(&outcome.history))?;
    println!("wrote {}", out.display());
    Ok(())
}
