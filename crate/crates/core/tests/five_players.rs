//! Checks on the bundled five-player instance beyond the acceptance table.

use std::sync::OnceLock;

use approx::assert_abs_diff_eq;
use maxmin_division::prelude::*;

fn game() -> &'static GameInstance {
    static GAME: OnceLock<GameInstance> = OnceLock::new();
    GAME.get_or_init(|| GameInstance::from_problem(&Problem::five_players()).unwrap())
}

fn pre_weights() -> &'static WeightSystem {
    static PRE: OnceLock<WeightSystem> = OnceLock::new();
    PRE.get_or_init(|| game().weight_system(WeightSystemKind::PreDivision, &SolverConfig::default()).unwrap())
}

fn singletons() -> WeightedProblem {
    game().weighted_problem(Coalition::singletons(5), &WeightSystem::cardinality()).unwrap()
}

#[test]
fn pre_division_weights() {
    let w = pre_weights();
    let grand = weight_of(w, Coalition::grand(5)).unwrap();
    assert_abs_diff_eq!(grand, game().table().total(Coalition::grand(5)).unwrap(), epsilon = 1e-12);
    assert_abs_diff_eq!(grand, 2.477, epsilon = 2e-3);
    for i in 0..5 {
        assert_abs_diff_eq!(weight_of(w, Coalition::singleton(i)).unwrap(), 0.404, epsilon = 2e-3);
    }
    for s in Coalition::all_nonempty(5) {
        let v = weight_of(w, s).unwrap();
        assert!(v > 0.0 && v <= game().table().total(s).unwrap() + 1e-12, "{s}");
    }
}

#[test]
fn single_game_values() {
    let cfg = SolverConfig::default();
    let card = game().game_value("3,5".parse().unwrap(), &WeightSystem::cardinality(), &cfg).unwrap();
    assert_abs_diff_eq!(card.value, 0.926, epsilon = 5e-3);
    assert_eq!(card.weight, 2.0);
    let pre = game().game_value("3,4,5".parse().unwrap(), pre_weights(), &cfg).unwrap();
    assert_abs_diff_eq!(pre.value, 1.625, epsilon = 5e-3);
    assert!(pre.lower <= pre.value && pre.value <= pre.upper);
}

#[test]
fn singleton_games_equal_the_competitive_value() {
    let cfg = SolverConfig::default();
    let v = solve_value(&singletons(), &SolverConfig::new(5)).unwrap().midpoint();
    for i in 0..5 {
        let s = Coalition::singleton(i);
        let card = game().game_value(s, &WeightSystem::cardinality(), &cfg).unwrap();
        let pre = game().game_value(s, pre_weights(), &cfg).unwrap();
        assert_abs_diff_eq!(card.value, v, epsilon = 2e-3);
        assert_abs_diff_eq!(pre.value, v, epsilon = 2e-3);
    }
}

#[test]
fn converged_partition_certifies_its_bound() {
    let cfg = SolverConfig::new(5);
    let res = solve_partition(&singletons(), &cfg).unwrap();
    assert!(res.converged);
    assert!(res.width() < cfg.epsilon);
    // Near-equal coordinates sit within the tolerance of the lower bound.
    assert!(res.pvv.min_value() >= res.lower - cfg.epsilon);
    let value = solve_value(&singletons(), &cfg).unwrap();
    assert!(res.pvv.min_value() <= value.upper + 1e-12);
}

#[test]
fn bracket_tightens_with_the_spread() {
    let p = singletons();
    let res = solve_partition(&p, &SolverConfig::new(5).with_trace()).unwrap();
    for rec in res.trace.unwrap() {
        let lo = rec.u.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = rec.u.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        assert!(
            rec.g - rec.vbar <= 10.0 * (hi - lo) + 1e-12,
            "t={}: gap {} spread {}",
            rec.t,
            rec.g - rec.vbar,
            hi - lo
        );
    }
}

#[test]
fn jobs_do_not_change_the_game() {
    let cfg = SolverConfig::default();
    let one = game().full_game(&WeightSystem::cardinality(), &cfg, 1).unwrap();
    let four = game().full_game(&WeightSystem::cardinality(), &cfg, 4).unwrap();
    for (a, b) in one.entries().into_iter().zip(four.entries()) {
        assert_eq!(a, b);
    }
}
