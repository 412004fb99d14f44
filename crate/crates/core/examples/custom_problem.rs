//! Describes a new instance in code, saves it as a problem file, reloads it
//! and solves it. Mixes Beta and piecewise-constant valuations.
//!
//! Run with `cargo run --release --example custom_problem [path]`.

use maxmin_division::prelude::*;

fn main() -> Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "three_players.json".into());
    let problem = Problem {
        players: vec![
            PlayerSpec { name: "left".into(), density: DensitySpec::beta(1.5, 4.0)? },
            PlayerSpec { name: "right".into(), density: DensitySpec::beta(4.0, 1.5)? },
            PlayerSpec {
                name: "middle".into(),
                density: DensitySpec::piecewise_constant(vec![0.0, 0.3, 0.7, 1.0], vec![0.5, 2.0, 0.5])?,
            },
        ],
        grid_cells: 2048,
        weights: None,
    };
    std::fs::write(&path, problem.to_json())?;
    let reloaded = Problem::load(&path)?;
    assert_eq!(reloaded, problem);
    println!("saved and reloaded {path}");

    let game = GameInstance::from_problem(&reloaded)?;
    let weighted = game.weighted_problem(Coalition::singletons(3), &WeightSystem::cardinality())?;
    let value = solve_value(&weighted, &SolverConfig::new(3))?;
    println!("competitive value in [{:.5}, {:.5}]", value.lower, value.upper);

    let grand = game.game_value(Coalition::grand(3), &WeightSystem::cardinality(), &SolverConfig::new(1))?;
    println!("grand coalition mass {:.5}", grand.value);
    Ok(())
}
