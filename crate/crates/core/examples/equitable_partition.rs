//! Computes a near-equitable division and writes it as interval JSON and as
//! a per-cell CSV.
//!
//! Run with `cargo run --release --example equitable_partition [out_dir]`.

use std::fs::File;
use std::path::PathBuf;

use maxmin_division::export::{allocation_intervals, write_allocation_csv};
use maxmin_division::prelude::*;

fn main() -> Result<()> {
    let out_dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| ".".into()));
    let problem = Problem::five_players();
    let game = GameInstance::from_problem(&problem)?;
    let result = game.competitive(&SolverConfig::new(5))?;

    println!("converged: {} after {} iterations", result.converged, result.iterations);
    for (j, u) in result.pvv.values.iter().enumerate() {
        println!("  {} receives {u:.5}", problem.players[j].name);
    }
    println!("spread: {:.2e}", result.pvv.spread());

    let grid = problem.grid()?;
    let coalitions = Coalition::singletons(5);
    let intervals = allocation_intervals(&grid, result.allocation(), &coalitions);
    let json_path = out_dir.join("partition.json");
    serde_json::to_writer_pretty(File::create(&json_path)?, &intervals)?;
    let csv_path = out_dir.join("partition.csv");
    write_allocation_csv(File::create(&csv_path)?, &grid, result.allocation(), &coalitions)?;
    println!("wrote {} and {}", json_path.display(), csv_path.display());
    Ok(())
}
