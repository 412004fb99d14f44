//! Records every iteration of a value solve and writes the trace as CSV,
//! ready for plotting the bracket as it closes.
//!
//! Run with `cargo run --release --example solver_trace [subset] > trace.csv`,
//! where `subset` is a coalition such as `3,5` solved against the remaining
//! players (default: all singletons).

use maxmin_division::export::write_trace_csv;
use maxmin_division::prelude::*;

fn main() -> Result<()> {
    let game = GameInstance::from_problem(&Problem::five_players())?;
    let structure = match std::env::args().nth(1) {
        Some(s) => game.structure_for(s.parse()?),
        None => Coalition::singletons(game.player_count()),
    };
    let m = structure.len();
    let weighted = game.weighted_problem(structure, &WeightSystem::cardinality())?;
    let result = solve_value(&weighted, &SolverConfig::new(m).with_trace())?;
    let trace = result.trace.as_deref().unwrap_or_default();
    write_trace_csv(std::io::stdout().lock(), trace)?;
    eprintln!("{} rows, bracket [{:.6}, {:.6}]", trace.len(), result.lower, result.upper);
    Ok(())
}
