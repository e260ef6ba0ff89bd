//! Curvature pruning against magnitude pruning and the unpruned baseline, all
//! trained on the same data.
//!
//! `cargo run --release --example compare_table -- [seeds] [out_dir]`

use std::path::PathBuf;

use riccinets::harness::{cmd_compare, RunConfig};

fn main() -> riccinets::Result<()> {
    let mut args = std::env::args().skip(1);
    let seeds = args.next().map_or(5, |s| s.parse().expect("integer seed count"));
    let out = PathBuf::from(args.next().unwrap_or_else(|| "out/compare_table".into()));
    let table = cmd_compare(&RunConfig { seeds, out: out.clone(), ..Default::default() })?;
    print!("{}", table.to_csv());
    println!("wrote {}", out.display());
    Ok(())
}
