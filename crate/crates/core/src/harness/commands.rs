use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::RunConfig;
use super::table::{ExperimentTable, TableRow};
use crate::controller::{compute_reward, history_csv, pipeline_step, run_search, BestState, Reward, SearchOutcome};
use crate::curvature::{curvature_map, MassContext, MassParams};
use crate::error::{Error, Result};
use crate::eval::{evaluate_net, magnitude_prune, train_eval, EvalReport};
use crate::flow::{flops_estimate, prune, run_flow, FlowState, PruneResult};
use crate::graph::{read_graph, to_dag, write_dot, write_graph, ws_generate, Dag, Graph, WsParams};

/// File names inside the output directory.
pub mod files {
    pub const GRAPH: &str = "graph.txt";
    pub const GRAPH_DOT: &str = "graph.dot";
    pub const DAG: &str = "dag.txt";
    pub const DAG_DOT: &str = "dag.dot";
    pub const CURVATURE: &str = "curvature.csv";
    pub const FLOW: &str = "flow.txt";
    pub const FLOW_META: &str = "flow_meta.json";
    pub const FLOW_TRACE: &str = "flow_trace.csv";
    pub const PRUNED: &str = "pruned.txt";
    pub const PRUNED_DOT: &str = "pruned.dot";
    pub const PRUNE: &str = "prune.csv";
    pub const EVAL: &str = "eval.csv";
    pub const REWARD: &str = "reward.csv";
    pub const HISTORY: &str = "history.csv";
    pub const BEST: &str = "best.json";
    pub const COMPARE: &str = "compare.csv";
    pub const TRANSFER: &str = "transfer.csv";
}

/// Published full-scale results, cited for context only.
const FULL_SCALE_ACCURACY: &str =
    "full-scale CIFAR-10 reference (not reproducible here): RicciNets 87.59%, lowest magnitude 84.77%, baseline 85.23%";
const FULL_SCALE_FLOPS: &str =
    "full-scale reference (not asserted here): almost 35% FLOPs reduction; pruned networks at 68-91% of baseline FLOPs";

/// Metadata stored next to the final flow weights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowMeta {
    pub iteration: usize,
    pub converged: bool,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalOutcome {
    pub report: EvalReport,
    pub reward: Reward,
}

/// Generates a WS graph and orients it. A disconnected draw is reduced to its
/// largest component, and the returned note says so.
pub fn build_dag(ws: &WsParams) -> Result<(Graph, Dag, Option<String>)> {
    let g = ws_generate(ws)?;
    if g.is_connected() {
        let dag = to_dag(&g)?;
        return Ok((g, dag, None));
    }
    let (largest, _) = g.largest_component();
    let note = format!(
        "WS(n={}, k={}, p={}, seed={}) is disconnected; kept the largest component ({} of {} nodes)",
        ws.n,
        ws.k,
        ws.p,
        ws.seed,
        largest.node_count(),
        g.node_count()
    );
    log::warn!("{note}");
    let dag = to_dag(&largest)?;
    Ok((largest, dag, Some(note)))
}

/// Fraction of node units that survive pruning.
pub fn weights_fraction(before: &Dag, after: &Dag) -> f64 {
    after.interior_count() as f64 / before.interior_count() as f64
}

fn ensure_out(cfg: &RunConfig) -> Result<()> {
    std::fs::create_dir_all(&cfg.out)?;
    Ok(())
}

fn stage_input(cfg: &RunConfig, name: &str, stage: &'static str) -> Result<PathBuf> {
    let path = cfg.out.join(name);
    if path.is_file() {
        Ok(path)
    } else {
        Err(Error::StageOrder { path, stage })
    }
}

fn read_dag(path: &Path) -> Result<Dag> {
    Dag::from_graph(read_graph(path)?)
}

fn write_dag(dag: &Dag, txt: PathBuf, dot: PathBuf) -> Result<()> {
    write_graph(dag.graph(), txt)?;
    write_dot(dag.graph(), dot)
}

/// Writes the WS graph and its oriented DAG.
pub fn cmd_generate(cfg: &RunConfig) -> Result<Dag> {
    ensure_out(cfg)?;
    let (g, dag, _) = build_dag(&cfg.ws_params())?;
    write_graph(&g, cfg.out.join(files::GRAPH))?;
    write_dot(&g, cfg.out.join(files::GRAPH_DOT))?;
    write_dag(&dag, cfg.out.join(files::DAG), cfg.out.join(files::DAG_DOT))?;
    log::info!("generated {} nodes, {} edges", dag.node_count(), dag.edges().len());
    Ok(dag)
}

/// Runs the flow on the stored DAG; writes final weights, metadata, the
/// per-iteration trace and the initial curvature.
pub fn cmd_flow(cfg: &RunConfig) -> Result<FlowState> {
    let dag = read_dag(&stage_input(cfg, files::DAG, "generate")?)?;
    let params = cfg.mass_params()?;
    let ctx = MassContext::from_dag(&dag);
    let initial = FlowState::new(dag.graph())?;
    let curvature = curvature_map(initial.graph(), &ctx, &params)?;
    std::fs::write(cfg.out.join(files::CURVATURE), curvature.to_csv())?;

    let state = run_flow(&dag, &params, &cfg.flow_config())?;
    write_graph(state.graph(), cfg.out.join(files::FLOW))?;
    let meta = FlowMeta {
        iteration: state.iteration(),
        converged: state.converged(),
        alpha: params.alpha,
        beta: params.beta,
        gamma: params.gamma,
        delta: params.delta,
    };
    std::fs::write(cfg.out.join(files::FLOW_META), serde_json::to_string_pretty(&meta)?)?;
    std::fs::write(cfg.out.join(files::FLOW_TRACE), state.trace_csv())?;
    if !state.converged() {
        log::warn!("flow stopped at the iteration cap without converging");
    }
    Ok(state)
}

/// Prunes the stored DAG with the stored flow weights.
pub fn cmd_prune(cfg: &RunConfig) -> Result<PruneResult> {
    let dag = read_dag(&stage_input(cfg, files::DAG, "generate")?)?;
    let weighted = read_graph(stage_input(cfg, files::FLOW, "flow")?)?;
    let meta_text = std::fs::read_to_string(stage_input(cfg, files::FLOW_META, "flow")?)?;
    let meta: FlowMeta = serde_json::from_str(&meta_text)?;
    let state = FlowState::from_weights(&weighted, meta.iteration, meta.converged);
    let result = prune(&dag, &state, &cfg.cost_model())?;
    write_dag(&result.dag, cfg.out.join(files::PRUNED), cfg.out.join(files::PRUNED_DOT))?;
    std::fs::write(cfg.out.join(files::PRUNE), result.to_csv())?;
    Ok(result)
}

/// CSV `accuracy,flops_ratio,reward` in shortest round-trip form.
pub fn reward_csv(r: &Reward) -> String {
    format!("accuracy,flops_ratio,reward\n{},{},{}\n", r.accuracy, r.flops_ratio(), r.value)
}

/// Evaluates the stored pruned DAG and scores it against the unpruned one.
pub fn cmd_eval(cfg: &RunConfig) -> Result<EvalOutcome> {
    let dag = read_dag(&stage_input(cfg, files::DAG, "generate")?)?;
    let pruned = read_dag(&stage_input(cfg, files::PRUNED, "prune")?)?;
    let evaluator = cfg.build_evaluator()?;
    let report = evaluator.evaluate(&pruned)?;
    let cost = cfg.cost_model();
    let reward = compute_reward(report.accuracy, flops_estimate(&pruned, &cost), flops_estimate(&dag, &cost), cfg.mu)?;
    std::fs::write(cfg.out.join(files::EVAL), report.to_csv())?;
    std::fs::write(cfg.out.join(files::REWARD), reward_csv(&reward))?;
    Ok(EvalOutcome { report, reward })
}

/// Runs the controller search on the configured graph; writes the history and
/// the best state.
pub fn cmd_search(cfg: &RunConfig) -> Result<SearchOutcome> {
    ensure_out(cfg)?;
    let (_, dag, _) = build_dag(&cfg.ws_params())?;
    let evaluator = cfg.build_evaluator()?;
    let outcome = run_search(&dag, evaluator.as_ref(), &cfg.search_config())?;
    std::fs::write(cfg.out.join(files::HISTORY), history_csv(&outcome.history))?;
    std::fs::write(cfg.out.join(files::BEST), serde_json::to_string_pretty(&outcome.best)?)?;
    if outcome.skipped_updates > 0 {
        log::warn!("{} policy updates skipped on non-finite gradients", outcome.skipped_updates);
    }
    Ok(outcome)
}

pub fn read_best_state(path: &Path) -> Result<BestState> {
    if !path.is_file() {
        return Err(Error::StageOrder { path: path.to_path_buf(), stage: "search" });
    }
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

struct SeedComparison {
    baseline_accuracy: f64,
    ricci: Option<TableRow>,
    /// `(weights fraction, accuracy)` per magnitude level.
    magnitude: Vec<(f64, f64)>,
}

fn compare_seed(cfg: &RunConfig, params: &MassParams, seed: u64) -> Result<SeedComparison> {
    let evaluator = cfg.training_evaluator()?;
    let (_, dag, _) = build_dag(&WsParams { seed, ..cfg.ws_params() })?;
    let mut net = evaluator.build(&dag)?;
    let base = train_eval(&mut net, &evaluator.data, &evaluator.train)?;
    let total = base.weights_total as f64;

    let magnitude = cfg
        .q_grid
        .iter()
        .map(|&q| {
            let r = evaluate_net(&magnitude_prune(&net, q)?, &evaluator.data);
            Ok((r.weights_remaining as f64 / total, r.accuracy))
        })
        .collect::<Result<Vec<_>>>()?;

    let ricci = match pipeline_step(&dag, params, &cfg.flow_config(), &cfg.cost_model(), &evaluator, cfg.mu) {
        Ok(step) => Some(TableRow {
            config: format!("seed{seed}"),
            accuracy: step.report.accuracy,
            flops_ratio: step.prune.flops_ratio(),
            weights_remaining: step.report.weights_total as f64 / total,
            reward: step.reward.value,
        }),
        Err(e) => {
            log::warn!("graph seed {seed}: curvature pruning failed ({e})");
            None
        }
    };
    Ok(SeedComparison { baseline_accuracy: base.accuracy, ricci, magnitude })
}

fn mean(xs: impl IntoIterator<Item = f64>) -> f64 {
    let (sum, n) = xs.into_iter().fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    sum / n as f64
}

fn std_dev(xs: &[f64]) -> f64 {
    let m = mean(xs.iter().copied());
    (xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / xs.len() as f64).sqrt()
}

/// Three-row summary of curvature pruning against lowest-magnitude pruning and
/// the unpruned baseline, all trained on the same data over `cfg.seeds` graphs.
///
/// Magnitude-pruned points are averaged inside the weights-remaining window;
/// when no point falls inside, the window grows by 0.05 on each side until one
/// does. Magnitude pruning zeroes weights without changing the dense cost, so
/// its FLOPs ratio is 1.
pub fn cmd_compare(cfg: &RunConfig) -> Result<ExperimentTable> {
    ensure_out(cfg)?;
    let params = cfg.mass_params()?;
    let seeds: Vec<u64> = (0..cfg.seeds as u64).map(|s| cfg.seed_graph + s).collect();
    let per_seed = seeds
        .par_iter()
        .map(|&s| compare_seed(cfg, &params, s))
        .collect::<Result<Vec<_>>>()?;

    let [mut lo, mut hi] = cfg.window;
    let in_window = |lo: f64, hi: f64, w: f64| w >= lo - 1e-12 && w <= hi + 1e-12;
    let mut widened = false;
    while !per_seed.iter().flat_map(|s| &s.magnitude).any(|&(w, _)| in_window(lo, hi, w)) {
        if lo <= 0.0 && hi >= 1.0 {
            return Err(Error::Param("no magnitude-pruned point to compare against; q_grid is empty".into()));
        }
        lo = (lo - 0.05).max(0.0);
        hi = (hi + 0.05).min(1.0);
        widened = true;
    }
    if widened {
        log::warn!("no magnitude-pruned point in {:?}; widened the window to [{lo:.2}, {hi:.2}]", cfg.window);
    }

    let mut table = ExperimentTable::default();
    let ricci: Vec<&TableRow> = per_seed.iter().filter_map(|s| s.ricci.as_ref()).collect();
    if !ricci.is_empty() {
        table.rows.push(TableRow {
            config: "RicciNets".into(),
            accuracy: mean(ricci.iter().map(|r| r.accuracy)),
            flops_ratio: mean(ricci.iter().map(|r| r.flops_ratio)),
            weights_remaining: mean(ricci.iter().map(|r| r.weights_remaining)),
            reward: mean(ricci.iter().map(|r| r.reward)),
        });
    }
    let points: Vec<(f64, f64)> =
        per_seed.iter().flat_map(|s| s.magnitude.iter().copied()).filter(|&(w, _)| in_window(lo, hi, w)).collect();
    let magnitude_accuracy = mean(points.iter().map(|p| p.1));
    table.rows.push(TableRow {
        config: "Lowest magnitude".into(),
        accuracy: magnitude_accuracy,
        flops_ratio: 1.0,
        weights_remaining: mean(points.iter().map(|p| p.0)),
        reward: magnitude_accuracy - cfg.mu,
    });
    let baseline_accuracy = mean(per_seed.iter().map(|s| s.baseline_accuracy));
    table.rows.push(TableRow {
        config: "Baseline".into(),
        accuracy: baseline_accuracy,
        flops_ratio: 1.0,
        weights_remaining: 1.0,
        reward: baseline_accuracy - cfg.mu,
    });

    let mut wins = 0;
    let mut compared = 0;
    for s in &per_seed {
        let local: Vec<f64> = s.magnitude.iter().filter(|&&(w, _)| in_window(lo, hi, w)).map(|p| p.1).collect();
        if let (Some(r), false) = (&s.ricci, local.is_empty()) {
            compared += 1;
            if r.accuracy >= mean(local.iter().copied()) {
                wins += 1;
            }
        }
    }
    table.note(format!("graph seeds {}..{} ({} seeds), data seed {}", seeds[0], seeds[seeds.len() - 1], seeds.len(), cfg.seed_data));
    table.note(format!(
        "mass parameters alpha={} beta={} gamma={} delta={}; mu={}",
        params.alpha, params.beta, params.gamma, params.delta, cfg.mu
    ));
    let window = format!("weights-remaining window [{lo:.2}, {hi:.2}]");
    table.note(if widened { format!("{window}, widened from {:?}", cfg.window) } else { window });
    table.note(format!(
        "curvature-pruned accuracy >= lowest-magnitude accuracy on {wins} of {compared} seeds{}",
        if ricci.len() < per_seed.len() { format!(" ({} seeds failed to prune)", per_seed.len() - ricci.len()) } else { String::new() }
    ));
    table.note(FULL_SCALE_ACCURACY);
    table.write_csv(cfg.out.join(files::COMPARE))?;
    Ok(table)
}

/// Transfer cells: a K sweep at the configured P, then a P sweep at the
/// configured K.
pub fn transfer_grid(cfg: &RunConfig) -> Vec<(usize, f64)> {
    cfg.k_grid.iter().map(|&k| (k, cfg.p)).chain(cfg.p_grid.iter().map(|&p| (cfg.k, p))).collect()
}

/// Applies the stored best mass parameters to fresh graphs over the transfer
/// grid. Cells the generator rejects, and cells whose pipeline fails, are noted
/// and skipped.
pub fn cmd_transfer(cfg: &RunConfig) -> Result<ExperimentTable> {
    let best = read_best_state(&cfg.best_state_path())?;
    let params = best.mass_params()?;
    ensure_out(cfg)?;
    let evaluator = cfg.build_evaluator()?;
    let mut table = ExperimentTable::default();
    let cells = transfer_grid(cfg);
    type Cell = (String, std::result::Result<TableRow, String>, Option<String>);
    let results: Vec<Cell> = cells
        .par_iter()
        .map(|&(k, p)| {
            let id = format!("K{k}_P{p}");
            let ws = WsParams { k, p, ..cfg.ws_params() };
            if let Err(e) = ws.validate() {
                return (id, Err(format!("skipped: {e}")), None);
            }
            let run = build_dag(&ws).and_then(|(_, dag, note)| {
                let step = pipeline_step(&dag, &params, &cfg.flow_config(), &cfg.cost_model(), evaluator.as_ref(), cfg.mu)?;
                Ok((dag, step, note))
            });
            match run {
                Ok((dag, step, note)) => {
                    let row = TableRow {
                        config: id.clone(),
                        accuracy: step.report.accuracy,
                        flops_ratio: step.prune.flops_ratio(),
                        weights_remaining: weights_fraction(&dag, &step.prune.dag),
                        reward: step.reward.value,
                    };
                    (id, Ok(row), note)
                }
                Err(e) => (id, Err(format!("failed: {e}")), None),
            }
        })
        .collect();
    for (id, r, note) in results {
        if let Some(n) = note {
            table.note(format!("{id}: {n}"));
        }
        match r {
            Ok(row) => table.rows.push(row),
            Err(msg) => {
                log::warn!("{id} {msg}");
                table.note(format!("{id} {msg}"));
            }
        }
    }
    table.note(format!(
        "N={}, graph seed {}, alpha={} beta={} delta={} (best reward {})",
        cfg.n, cfg.seed_graph, best.alpha, best.beta, best.delta, best.reward
    ));
    table.note(FULL_SCALE_FLOPS);
    table.write_csv(cfg.out.join(files::TRANSFER))?;
    Ok(table)
}

/// Searches once per `(mu, seed)` pair and reports each run's best state.
/// Seed `s` uses graph seed `seed_graph + s` and policy seed `seed_policy + s`.
pub fn mu_sweep(cfg: &RunConfig) -> Result<ExperimentTable> {
    let evaluator = cfg.build_evaluator()?;
    let runs: Vec<(f64, u64)> =
        cfg.mu_grid.iter().flat_map(|&mu| (0..cfg.seeds as u64).map(move |s| (mu, s))).collect();
    let rows = runs
        .par_iter()
        .map(|&(mu, s)| {
            let run_cfg = RunConfig {
                mu,
                seed_graph: cfg.seed_graph + s,
                seed_policy: cfg.seed_policy + s,
                ..cfg.clone()
            };
            let (_, dag, _) = build_dag(&run_cfg.ws_params())?;
            let outcome = run_search(&dag, evaluator.as_ref(), &run_cfg.search_config())?;
            let params = outcome.best.mass_params()?;
            let step = pipeline_step(&dag, &params, &run_cfg.flow_config(), &run_cfg.cost_model(), evaluator.as_ref(), mu);
            let weights = step.map(|st| weights_fraction(&dag, &st.prune.dag)).unwrap_or(0.0);
            let best = outcome.steps().find(|r| r.reward == outcome.best.reward).expect("best step exists");
            Ok(TableRow {
                config: format!("mu{mu}_s{s}"),
                accuracy: best.accuracy,
                flops_ratio: best.flops_ratio,
                weights_remaining: weights,
                reward: best.reward,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut table = ExperimentTable { rows, notes: Vec::new() };
    let per_point = cfg.seeds;
    let mut summary = String::from("mean accuracy (std) / mean flops_ratio per mu:");
    for (i, mu) in cfg.mu_grid.iter().enumerate() {
        let chunk = &table.rows[i * per_point..(i + 1) * per_point];
        let acc: Vec<f64> = chunk.iter().map(|r| r.accuracy).collect();
        let _ = write!(
            summary,
            " {mu}: {:.4} ({:.4}) / {:.4};",
            mean(acc.iter().copied()),
            std_dev(&acc),
            mean(chunk.iter().map(|r| r.flops_ratio))
        );
    }
    table.note(format!("{} seeds per point", per_point));
    table.note(summary.trim_end_matches(';').to_string());
    table.note(FULL_SCALE_FLOPS);
    Ok(table)
}
