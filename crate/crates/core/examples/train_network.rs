//! Maps a DAG to a small network, trains it on Gaussian blobs and compares the
//! result with the closed-form surrogate score.
//!
//! `cargo run --release --example train_network -- [learning_rate]`

use riccinets::eval::{make_dataset, surrogate_eval, train_eval, DatasetConfig, TinyNet, TrainConfig};
use riccinets::flow::CostModel;
use riccinets::graph::{to_dag, ws_generate, WsParams};

fn main() -> riccinets::Result<()> {
    let lr = std::env::args().nth(1).map_or(Ok(TrainConfig::default().lr), |s| s.parse()).expect("numeric learning rate");
    let data = make_dataset(&DatasetConfig::default())?;
    let dag = to_dag(&ws_generate(&WsParams::new(32, 4, 0.75, 0))?)?;

    let mut net = TinyNet::new(&dag, 8, data.input_dim(), data.classes(), 0)?;
    println!("{} parameters, initial test loss {:.4}", net.param_count(), net.loss(&data.test));
    let report = train_eval(&mut net, &data, &TrainConfig { lr, ..Default::default() })?;
    println!(
        "trained at lr {lr}: accuracy {:.3}, {:.0} FLOPs, {} unit weights, {:.2} s",
        report.accuracy, report.flops, report.weights_total, report.seconds
    );

    let surrogate = surrogate_eval(&dag, &CostModel::default());
    println!("surrogate: accuracy {:.3}, {:.0} FLOPs", surrogate.accuracy, surrogate.flops);
    Ok(())
}
