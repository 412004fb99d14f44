//! The coalitional game `η(S, w) = w(S) · v(Γ_S, w)`, where
//! `Γ_S = {S} ∪ {{j} : j ∉ S}`, under the cardinality and pre-division
//! weight systems, and its Shapley value.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::measures::{coalition_table, Coalition, DensitySpec, Grid, MeasureTable};
use crate::partition::WeightedProblem;
use crate::problem::{Problem, WeightSystemName};
use crate::subgradient::{solve_partition, solve_value, SolverConfig};
use crate::{Error, Result};

/// Equity tolerance for the competitive partition behind pre-division weights.
pub const PRE_DIVISION_EPSILON: f64 = 1e-4;

/// Largest player count for which the full game is tabulated.
pub const MAX_GAME_PLAYERS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightSystemKind {
    /// `w(S) = |S|`
    Cardinality,
    /// `w(S) = μ_S(∪_{i∈S} A*_i)` for the competitive maxmin partition `A*`.
    PreDivision,
}

impl From<WeightSystemName> for WeightSystemKind {
    fn from(name: WeightSystemName) -> Self {
        match name {
            WeightSystemName::Card => WeightSystemKind::Cardinality,
            WeightSystemName::Pre => WeightSystemKind::PreDivision,
        }
    }
}

/// A weight function on coalitions. Pre-division values are computed once
/// for every coalition of the instance and cached.
#[derive(Clone, Debug)]
pub struct WeightSystem {
    kind: WeightSystemKind,
    values: BTreeMap<Coalition, f64>,
    /// Whether the competitive partition reached the equity tolerance.
    pub competitive_converged: bool,
    /// Coordinate spread of the competitive partition used for the weights.
    pub competitive_spread: f64,
}

impl WeightSystem {
    pub fn cardinality() -> Self {
        WeightSystem {
            kind: WeightSystemKind::Cardinality,
            values: BTreeMap::new(),
            competitive_converged: true,
            competitive_spread: 0.0,
        }
    }

    pub fn kind(&self) -> WeightSystemKind {
        self.kind
    }
}

/// `w(S)` under `system`.
pub fn weight_of(system: &WeightSystem, coalition: Coalition) -> Result<f64> {
    if coalition.is_empty() {
        return Err(Error::EmptyCoalition);
    }
    match system.kind {
        WeightSystemKind::Cardinality => Ok(coalition.len() as f64),
        WeightSystemKind::PreDivision => {
            system.values.get(&coalition).copied().ok_or_else(|| Error::MissingCoalition(coalition.to_string()))
        }
    }
}

/// One game value together with the solve that produced it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GameEntry {
    pub coalition: Coalition,
    pub weight: f64,
    /// `w(S)` times the bracket midpoint.
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// `η(S)` for every nonempty coalition of `n` players.
#[derive(Clone, Debug, Default)]
pub struct GameTable {
    players: usize,
    entries: BTreeMap<Coalition, GameEntry>,
}

impl GameTable {
    pub fn new(players: usize) -> Self {
        GameTable { players, entries: BTreeMap::new() }
    }

    /// A table from plain values, e.g. for games defined in closed form.
    pub fn from_values(players: usize, values: impl IntoIterator<Item = (Coalition, f64)>) -> Self {
        let mut table = GameTable::new(players);
        for (coalition, value) in values {
            table.insert(GameEntry {
                coalition,
                weight: 1.0,
                value,
                lower: value,
                upper: value,
                iterations: 0,
                converged: true,
            });
        }
        table
    }

    pub fn insert(&mut self, entry: GameEntry) {
        self.entries.insert(entry.coalition, entry);
    }

    pub fn player_count(&self) -> usize {
        self.players
    }

    pub fn get(&self, coalition: Coalition) -> Option<&GameEntry> {
        self.entries.get(&coalition)
    }

    /// `η(S)`, with `η(∅) = 0`.
    pub fn value(&self, coalition: Coalition) -> Result<f64> {
        if coalition.is_empty() {
            return Ok(0.0);
        }
        self.entries.get(&coalition).map(|e| e.value).ok_or_else(|| Error::MissingCoalition(coalition.to_string()))
    }

    /// Entries ordered by coalition size, then members.
    pub fn entries(&self) -> Vec<&GameEntry> {
        Coalition::all_nonempty(self.players).into_iter().filter_map(|s| self.entries.get(&s)).collect()
    }

    pub fn all_converged(&self) -> bool {
        self.entries.values().all(|e| e.converged)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShapleyResult {
    pub values: Vec<f64>,
    /// Zero-based player indices by decreasing Shapley value.
    pub ranking: Vec<usize>,
}

/// Shapley value by direct enumeration of coalitions.
pub fn shapley(game: &GameTable) -> Result<ShapleyResult> {
    let n = game.player_count();
    // weights[s] = s! (n - s - 1)! / n!
    let factorial = |k: usize| (1..=k).map(|x| x as f64).product::<f64>();
    let weights: Vec<f64> = (0..n).map(|s| factorial(s) * factorial(n - s - 1) / factorial(n)).collect();
    let grand = Coalition::grand(n).bits();
    let mut values = vec![0.0; n];
    for (i, phi) in values.iter_mut().enumerate() {
        let me = 1u32 << i;
        for bits in 0..=grand {
            if bits & me != 0 {
                continue;
            }
            let without = Coalition::from_bits(bits);
            let with = Coalition::from_bits(bits | me);
            *phi += weights[without.len()] * (game.value(with)? - game.value(without)?);
        }
    }
    let mut ranking: Vec<usize> = (0..n).collect();
    ranking.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    Ok(ShapleyResult { values, ranking })
}

/// Players of one division problem with the measure table of every coalition.
#[derive(Clone, Debug)]
pub struct GameInstance {
    players: Vec<DensitySpec>,
    table: MeasureTable,
}

impl GameInstance {
    pub fn new(players: Vec<DensitySpec>, grid: Grid) -> Result<Self> {
        let n = players.len();
        if n == 0 || n > MAX_GAME_PLAYERS {
            return Err(Error::InvalidStructure(format!(
                "coalitional games need between 1 and {MAX_GAME_PLAYERS} players, got {n}"
            )));
        }
        let table = coalition_table(&players, &Coalition::all_nonempty(n), &grid)?;
        Ok(GameInstance { players, table })
    }

    pub fn from_problem(problem: &Problem) -> Result<Self> {
        GameInstance::new(problem.densities(), problem.grid()?)
    }

    pub fn players(&self) -> &[DensitySpec] {
        &self.players
    }

    pub fn player_count(&self) -> usize {
        self.players.len()
    }

    pub fn table(&self) -> &MeasureTable {
        &self.table
    }

    /// `Γ_S`: the coalition `S` followed by the remaining players as singletons.
    pub fn structure_for(&self, coalition: Coalition) -> Vec<Coalition> {
        std::iter::once(coalition)
            .chain((0..self.player_count()).filter(|&j| !coalition.contains(j)).map(Coalition::singleton))
            .collect()
    }

    /// Weighted problem for an arbitrary structure under `system`.
    pub fn weighted_problem(&self, structure: Vec<Coalition>, system: &WeightSystem) -> Result<WeightedProblem> {
        let weights = structure.iter().map(|&s| weight_of(system, s)).collect::<Result<Vec<_>>>()?;
        WeightedProblem::new(&self.table, structure, weights)
    }

    /// Maxmin partition of the fully competitive problem (singletons, unit weights).
    pub fn competitive(&self, config: &SolverConfig) -> Result<crate::subgradient::SolveResult> {
        let n = self.player_count();
        let problem = WeightedProblem::new(&self.table, Coalition::singletons(n), vec![1.0; n])?;
        solve_partition(&problem, &with_start(config, n))
    }

    /// Builds a weight system. Pre-division weights come from the competitive
    /// partition solved at [`PRE_DIVISION_EPSILON`] with `config`'s step rule.
    pub fn weight_system(&self, kind: WeightSystemKind, config: &SolverConfig) -> Result<WeightSystem> {
        match kind {
            WeightSystemKind::Cardinality => Ok(WeightSystem::cardinality()),
            WeightSystemKind::PreDivision => {
                let cfg = SolverConfig { epsilon: PRE_DIVISION_EPSILON, record_trace: false, ..config.clone() };
                let competitive = self.competitive(&cfg)?;
                let owners = competitive.allocation().owners();
                let mut values = BTreeMap::new();
                for &s in self.table.coalitions() {
                    let masses = self.table.masses(s)?;
                    let w: f64 =
                        owners.iter().zip(masses).filter(|(&owner, _)| s.contains(owner)).map(|(_, m)| m).sum();
                    if w.is_nan() || w <= 0.0 {
                        return Err(Error::InvalidStructure(format!(
                            "pre-division weight of {s} is zero; the competitive partition gives it nothing"
                        )));
                    }
                    values.insert(s, w);
                }
                Ok(WeightSystem {
                    kind,
                    values,
                    competitive_converged: competitive.converged,
                    competitive_spread: competitive.pvv.spread(),
                })
            }
        }
    }

    /// `η(S, w) = w(S) · v(Γ_S, w)`, using the bracket midpoint for `v`.
    pub fn game_value(&self, coalition: Coalition, system: &WeightSystem, config: &SolverConfig) -> Result<GameEntry> {
        if coalition.is_empty() {
            return Err(Error::EmptyCoalition);
        }
        let structure = self.structure_for(coalition);
        let m = structure.len();
        let problem = self.weighted_problem(structure, system)?;
        let result = solve_value(&problem, &with_start(config, m))?;
        let weight = weight_of(system, coalition)?;
        Ok(GameEntry {
            coalition,
            weight,
            value: weight * result.midpoint(),
            lower: weight * result.lower,
            upper: weight * result.upper,
            iterations: result.iterations,
            converged: result.converged,
        })
    }

    /// Game values for all `2^n − 1` coalitions, solved on `jobs` threads.
    pub fn full_game(&self, system: &WeightSystem, config: &SolverConfig, jobs: usize) -> Result<GameTable> {
        let coalitions = Coalition::all_nonempty(self.player_count());
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map_err(|e| Error::InvalidConfig(e.to_string()))?;
        let entries: Vec<GameEntry> =
            pool.install(|| coalitions.par_iter().map(|&s| self.game_value(s, system, config)).collect::<Result<_>>())?;
        let mut table = GameTable::new(self.player_count());
        for e in entries {
            table.insert(e);
        }
        Ok(table)
    }
}

/// The same configuration started at the barycentre of an `m`-simplex.
fn with_start(config: &SolverConfig, m: usize) -> SolverConfig {
    SolverConfig { initial_alpha: Some(vec![1.0 / m as f64; m]), ..config.clone() }
}
