use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};

use super::commands::{cmd_compare, cmd_eval, cmd_flow, cmd_generate, cmd_prune, cmd_search, cmd_transfer};
use super::config::RunConfig;
use crate::error::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_PIPELINE: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Generate,
    Flow,
    Prune,
    Eval,
    Search,
    Compare,
    Transfer,
}

/// Prune randomly wired networks with Ricci flow.
#[derive(Debug, Parser)]
#[command(name = "riccinets", version)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// JSON run configuration with flat keys.
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub seed_graph: Option<u64>,
    #[arg(long)]
    pub seed_policy: Option<u64>,
    #[arg(long)]
    pub seed_data: Option<u64>,
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Cli {
    /// Loads the config file and applies the flag overrides.
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = RunConfig::load(&self.config)?;
        if let Some(s) = self.seed_graph {
            cfg.seed_graph = s;
        }
        if let Some(s) = self.seed_policy {
            cfg.seed_policy = s;
        }
        if let Some(s) = self.seed_data {
            cfg.seed_data = s;
        }
        if let Some(mu) = self.mu {
            cfg.mu = mu;
        }
        if let Some(out) = &self.out {
            cfg.out = out.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Runs one command and prints a short summary.
pub fn execute(command: Command, cfg: &RunConfig) -> Result<()> {
    match command {
        Command::Generate => {
            let dag = cmd_generate(cfg)?;
            println!("dag: {} nodes, {} edges -> {}", dag.node_count(), dag.edges().len(), cfg.out.display());
        }
        Command::Flow => {
            let state = cmd_flow(cfg)?;
            println!("flow: {} iterations, converged={}", state.iteration(), state.converged());
        }
        Command::Prune => {
            let r = cmd_prune(cfg)?;
            println!(
                "prune: threshold {:.6}, {} edges and {} nodes removed, flops ratio {:.4}",
                r.threshold,
                r.edges_removed,
                r.nodes_removed,
                r.flops_ratio()
            );
        }
        Command::Eval => {
            let e = cmd_eval(cfg)?;
            println!("eval: accuracy {:.4}, flops ratio {:.4}, reward {:.4}", e.report.accuracy, e.reward.flops_ratio(), e.reward.value);
        }
        Command::Search => {
            let o = cmd_search(cfg)?;
            println!(
                "search: best alpha={} beta={} delta={} reward {:.4} (flops ratio {:.4})",
                o.best.alpha, o.best.beta, o.best.delta, o.best.reward, o.best_flops_ratio
            );
        }
        Command::Compare => print!("{}", cmd_compare(cfg)?.to_csv()),
        Command::Transfer => print!("{}", cmd_transfer(cfg)?.to_csv()),
    }
    Ok(())
}

/// Parses `args` (program name first) and runs the command. Returns the process
/// exit code: 0 on success, 2 for usage or configuration errors, 3 when the
/// pipeline fails.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let cfg = match cli.resolve() {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("config error: {e}");
            return EXIT_CONFIG;
        }
    };
    match execute(cli.command, &cfg) {
        Ok(()) => EXIT_OK,
        Err(e @ Error::Config(_)) => {
            eprintln!("config error: {e}");
            EXIT_CONFIG
        }
        Err(e) => {
            eprintln!("pipeline error: {e}");
            EXIT_PIPELINE
        }
    }
}
