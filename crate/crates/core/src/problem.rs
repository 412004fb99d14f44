//! Problem files: players, grid resolution and an optional weight choice.
//!
//! ```json
//! {
//!   "players": [
//!     {"name": "P1", "density": {"kind": "beta", "a": 2.0, "b": 5.0}},
//!     {"name": "P2", "density": {"kind": "uniform"}},
//!     {"name": "P3", "density": {"kind": "piecewise_constant",
//!                                "breakpoints": [0.0, 0.5, 1.0], "values": [1.5, 0.5]}}
//!   ],
//!   "grid_cells": 4096,
//!   "weights": "card"
//! }
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::measures::{DensitySpec, Grid};
use crate::{Error, Result};

const FIVE_PLAYERS: &str = include_str!("../problems/five_players.json");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlayerSpec {
    pub name: String,
    pub density: DensitySpec,
}

/// Weights for the coalitions of a structure: one of the two named systems,
/// or explicit positive values listed in coalition order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightsSpec {
    System(WeightSystemName),
    Explicit(Vec<f64>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightSystemName {
    Card,
    Pre,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Problem {
    pub players: Vec<PlayerSpec>,
    #[serde(default = "default_cells")]
    pub grid_cells: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<WeightsSpec>,
}

fn default_cells() -> usize {
    Grid::DEFAULT_CELLS
}

impl Problem {
    /// The bundled five-player instance: Beta(2,5), Beta(3,8), Beta(7,2),
    /// Beta(10,10) and `Uniform[0, 1]`.
    pub fn five_players() -> Self {
        Problem::from_json(FIVE_PLAYERS).expect("bundled problem parses")
    }

    pub fn bundled_json() -> &'static str {
        FIVE_PLAYERS
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let problem: Problem = serde_json::from_str(text)?;
        problem.validate()?;
        Ok(problem)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Problem::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem serializes")
    }

    pub fn densities(&self) -> Vec<DensitySpec> {
        self.players.iter().map(|p| p.density.clone()).collect()
    }

    pub fn player_count(&self) -> usize {
        self.players.len()
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.grid_cells)
    }

    fn validate(&self) -> Result<()> {
        if self.players.is_empty() {
            return Err(Error::InvalidStructure("problem has no players".into()));
        }
        if self.players.len() > crate::measures::MAX_PLAYERS {
            return Err(Error::InvalidStructure(format!(
                "at most {} players are supported",
                crate::measures::MAX_PLAYERS
            )));
        }
        if self.grid_cells == 0 {
            return Err(Error::EmptyGrid);
        }
        if let Some(WeightsSpec::Explicit(w)) = &self.weights {
            if w.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
                return Err(Error::InvalidStructure("explicit weights must be positive".into()));
            }
        }
        Ok(())
    }
}
