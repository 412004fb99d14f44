//! One maxsum partition and the two bounds it certifies.
//!
//! For coefficients `α` on the simplex, every cell goes to the coalition with
//! the largest `α_j f_j`. The resulting value vector `u` gives an upper bound
//! `g(α)` and a lower bound `v̄(u)` on the maxmin value.
//!
//! Run with `cargo run --release --example maxsum_bounds`.

use maxmin_division::prelude::*;

fn main() -> Result<()> {
    let problem = Problem::five_players();
    let players = problem.densities();
    let grid = problem.grid()?;
    let structure = Coalition::singletons(players.len());
    let table = coalition_table(&players, &structure, &grid)?;
    let weighted = WeightedProblem::new(&table, structure, vec![1.0; players.len()])?;

    for alpha in [vec![0.2; 5], vec![0.30, 0.30, 0.15, 0.15, 0.10]] {
        let pvv = maxsum_partition(&weighted, &alpha)?;
        let bounds = BoundPair::from_pvv(&pvv, weighted.totals())?;
        println!("alpha = {alpha:?}");
        println!("  u     = {:.4?}", pvv.values);
        println!("  bound = [{:.5}, {:.5}]  (width {:.2e})", bounds.lower, bounds.upper, bounds.width());
        for (j, pieces) in pvv.allocation.intervals(&grid, 5).iter().enumerate() {
            let spans: Vec<String> = pieces.iter().map(|[a, b]| format!("[{a:.3}, {b:.3}]")).collect();
            println!("  player {}: {}", j + 1, spans.join(" "));
        }
    }
    Ok(())
}
