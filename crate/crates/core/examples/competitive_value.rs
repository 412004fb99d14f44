//! Brackets the competitive maxmin value of the bundled five-player instance.
//!
//! Run with `cargo run --release --example competitive_value [epsilon]`.

use maxmin_division::prelude::*;

fn main() -> Result<()> {
    let epsilon: f64 = std::env::args().nth(1).map_or(Ok(1e-3), |s| s.parse()).expect("epsilon is a number");
    let problem = Problem::five_players();
    let players = problem.densities();
    let structure = Coalition::singletons(players.len());
    let table = coalition_table(&players, &structure, &problem.grid()?)?;
    let weighted = WeightedProblem::new(&table, structure, vec![1.0; players.len()])?;

    let result = solve_value(&weighted, &SolverConfig::new(5).with_epsilon(epsilon))?;
    println!("v in [{:.6}, {:.6}]", result.lower, result.upper);
    println!("iterations: {}, converged: {}", result.iterations, result.converged);
    println!("final alpha: {:.4?}", result.alpha());
    Ok(())
}
