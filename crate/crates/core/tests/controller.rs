use riccinets::controller::{history_csv, run_search, SearchConfig};
use riccinets::eval::SurrogateEvaluator;
use riccinets::graph::{to_dag, ws_generate, Dag, WsParams};

fn dag(seed: u64) -> Dag {
    to_dag(&ws_generate(&WsParams::new(32, 4, 0.75, seed)).unwrap()).unwrap()
}

#[test]
fn default_search_accounting_and_determinism() {
    let cfg = SearchConfig::default();
    let eval = SurrogateEvaluator::default();
    let a = run_search(&dag(0), &eval, &cfg).unwrap();
    assert_eq!(a.history.len(), 20);
    let csv = history_csv(&a.history);
    assert_eq!(csv.lines().count(), 1 + 20 * 5);
    assert_eq!(a.history.iter().map(|e| e.batch).max(), Some(9));

    let first: Vec<f64> = a.history[0].steps.iter().map(|s| s.reward).collect();
    assert!(a.best.reward >= first.iter().sum::<f64>() / first.len() as f64);
    assert!(a.steps().all(|s| s.reward <= a.best.reward));

    let b = run_search(&dag(0), &eval, &cfg).unwrap();
    assert_eq!(csv, history_csv(&b.history));
    assert_eq!(a.best, b.best);
}

#[test]
fn every_step_is_feasible() {
    let out = run_search(&dag(3), &SurrogateEvaluator::default(), &SearchConfig::default()).unwrap();
    for s in out.steps() {
        let [alpha, beta, delta] = s.values;
        assert!((0.0..=1.0).contains(&alpha));
        assert!(beta + delta <= 1.0 + 1e-9);
        assert!(s.flops_ratio >= 0.0 && s.flops_ratio <= 1.0);
    }
}

#[test]
fn heavier_flops_penalty_never_prefers_larger_networks() {
    let eval = SurrogateEvaluator::default();
    for seed in 0..3 {
        let g = dag(seed);
        let run = |mu: f64| {
            let mut cfg = SearchConfig { mu, ..Default::default() };
            cfg.policy.seed = seed;
            run_search(&g, &eval, &cfg).unwrap()
        };
        let (low, high) = (run(0.0), run(1.5));
        assert!(
            high.best_flops_ratio <= low.best_flops_ratio,
            "seed {seed}: mu=1.5 ratio {} vs mu=0 ratio {}",
            high.best_flops_ratio,
            low.best_flops_ratio
        );
    }
}

#[test]
fn rejects_empty_schedules() {
    let cfg = SearchConfig { episodes: 0, ..Default::default() };
    assert!(run_search(&dag(0), &SurrogateEvaluator::default(), &cfg).is_err());
}
