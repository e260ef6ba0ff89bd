//! Sweeps the FLOPs penalty and reports how accuracy and compression trade off.
//!
//! `cargo run --release --example mu_sweep -- [out_dir]`

use std::path::PathBuf;

use riccinets::harness::RunConfig;

fn main() -> riccinets::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "out/mu_sweep".into()));
    std::fs::create_dir_all(&out)?;
    let cfg = RunConfig { out: out.clone(), ..Default::default() };
    let table = riccinets::harness::mu_sweep(&cfg)?;
    for note in &table.notes {
        println!("{note}");
    }
    table.write_csv(out.join("mu_sweep.csv"))?;
    println!("wrote {}", out.display());
    Ok(())
}
