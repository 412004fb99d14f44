//! Random instance generators shared by the integration tests.

#![allow(dead_code)]

pub mod checks;

use maxmin_division::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// A piecewise-constant density with 2 to 8 pieces and positive values.
pub fn piecewise(rng: &mut ChaCha8Rng) -> DensitySpec {
    let pieces = rng.random_range(2..=8);
    let mut inner: Vec<f64> = (1..pieces).map(|_| rng.random_range(0.02..0.98)).collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    let mut breakpoints = vec![0.0];
    breakpoints.extend(inner);
    breakpoints.push(1.0);
    let values = (1..breakpoints.len()).map(|_| rng.random_range(0.05..3.0)).collect();
    DensitySpec::piecewise_constant(breakpoints, values).unwrap()
}

pub fn beta(rng: &mut ChaCha8Rng) -> DensitySpec {
    DensitySpec::beta(rng.random_range(0.6..8.0), rng.random_range(0.6..8.0)).unwrap()
}

/// Half the players piecewise-constant, half Beta, in random order.
pub fn densities(rng: &mut ChaCha8Rng, n: usize) -> Vec<DensitySpec> {
    (0..n).map(|_| if rng.random_bool(0.5) { piecewise(rng) } else { beta(rng) }).collect()
}

/// Uniform draw from the open simplex.
pub fn simplex_point(rng: &mut ChaCha8Rng, m: usize) -> Vec<f64> {
    let e: Vec<f64> = (0..m).map(|_| -(1.0 - rng.random::<f64>()).ln() + 1e-9).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|x| x / s).collect()
}

/// Singletons of `n` random players on a grid, each with a random weight.
pub fn weighted_problem(rng: &mut ChaCha8Rng, n: usize, cells: usize) -> WeightedProblem {
    let players = densities(rng, n);
    let weights = (0..n).map(|_| rng.random_range(0.5..2.0)).collect();
    problem_with(&players, cells, weights)
}

pub fn problem_with(players: &[DensitySpec], cells: usize, weights: Vec<f64>) -> WeightedProblem {
    let grid = Grid::new(cells).unwrap();
    let structure = Coalition::singletons(players.len());
    let table = coalition_table(players, &structure, &grid).unwrap();
    WeightedProblem::new(&table, structure, weights).unwrap()
}
