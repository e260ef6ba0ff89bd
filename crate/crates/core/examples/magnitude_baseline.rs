//! Magnitude pruning of a trained network across sparsity levels, without
//! fine-tuning.
//!
//! `cargo run --release --example magnitude_baseline`

use riccinets::eval::{evaluate_net, magnitude_prune, make_dataset, train_eval, DatasetConfig, TinyNet, TrainConfig};
use riccinets::graph::{to_dag, ws_generate, WsParams};

fn main() -> riccinets::Result<()> {
    let data = make_dataset(&DatasetConfig::default())?;
    let dag = to_dag(&ws_generate(&WsParams::new(32, 4, 0.75, 0))?)?;
    let mut net = TinyNet::new(&dag, 8, data.input_dim(), data.classes(), 0)?;
    let baseline = train_eval(&mut net, &data, &TrainConfig::default())?;
    println!("baseline accuracy {:.3} with {} unit weights", baseline.accuracy, net.weights_total());

    for q in [0.0, 0.3, 0.4, 0.5, 0.55, 0.6, 0.7, 0.8, 0.9] {
        let pruned = magnitude_prune(&net, q)?;
        let report = evaluate_net(&pruned, &data);
        println!("q {q:.2}: {:>5} weights kept, accuracy {:.3}", pruned.weights_remaining(), report.accuracy);
    }
    Ok(())
}
