//! Searches hyperparameters on WS(32, 4, 0.75) and reuses them on other
//! densities and rewiring probabilities.
//!
//! `cargo run --release --example transfer_grid -- [out_dir]`

use std::path::PathBuf;

use riccinets::harness::{cmd_search, cmd_transfer, RunConfig};

fn main() -> riccinets::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "out/transfer_grid".into()));
    let cfg = RunConfig { out: out.clone(), ..Default::default() };
    let best = cmd_search(&cfg)?.best;
    println!("searched: alpha {} beta {} delta {}", best.alpha, best.beta, best.delta);
    print!("{}", cmd_transfer(&cfg)?.to_csv());
    println!("wrote {}", out.display());
    Ok(())
}
