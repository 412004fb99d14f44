//! Grid masses for each player and the joint measure of every coalition.
//!
//! Run with `cargo run --release --example coalition_measures`.

use maxmin_division::prelude::*;

fn main() -> Result<()> {
    let problem = Problem::five_players();
    let grid = problem.grid()?;
    let players = problem.densities();
    let n = players.len();

    for (p, spec) in problem.players.iter().zip(&players) {
        let masses = cell_masses(spec, &grid);
        let mid = density_eval(spec, 0.5)?;
        println!("{:>4}: total mass {:.6}, density at 1/2 = {mid:.4}", p.name, masses.iter().sum::<f64>());
    }

    // A coalition values a piece by the best density among its members.
    let coalitions = Coalition::all_nonempty(n);
    let table = coalition_table(&players, &coalitions, &grid)?;
    println!("\ncoalition  mu_S(C)");
    for s in coalitions {
        println!("{:<10} {:.4}", s.to_string(), table.total(s)?);
    }
    Ok(())
}
