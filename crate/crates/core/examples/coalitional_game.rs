//! Builds the coalitional game under both weight systems and prints the
//! game table and Shapley values.
//!
//! Run with `cargo run --release --example coalitional_game [jobs]`.

use maxmin_division::prelude::*;

fn main() -> Result<()> {
    let jobs: usize = std::env::args().nth(1).map_or(Ok(4), |s| s.parse()).expect("jobs is an integer");
    let game = GameInstance::from_problem(&Problem::five_players())?;
    let config = SolverConfig::default();

    let card = WeightSystem::cardinality();
    let pre = game.weight_system(WeightSystemKind::PreDivision, &config)?;
    let eta_card = game.full_game(&card, &config, jobs)?;
    let eta_pre = game.full_game(&pre, &config, jobs)?;

    println!("{:<12} {:>8} {:>8}", "coalition", "w_card", "w_pre");
    for (a, b) in eta_card.entries().into_iter().zip(eta_pre.entries()) {
        println!("{:<12} {:>8.4} {:>8.4}", a.coalition.to_string(), a.value, b.value);
    }

    let sv_card = shapley(&eta_card)?;
    let sv_pre = shapley(&eta_pre)?;
    println!("\n{:<8} {:>8} {:>8}", "player", "w_card", "w_pre");
    for i in 0..game.player_count() {
        println!("{:<8} {:>8.4} {:>8.4}", i + 1, sv_card.values[i], sv_pre.values[i]);
    }
    let order = |r: &ShapleyResult| r.ranking.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(" > ");
    println!("\nranking (w_card): {}", order(&sv_card));
    println!("ranking (w_pre):  {}", order(&sv_pre));
    Ok(())
}
