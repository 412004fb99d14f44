//! Maxmin (Rawlsian) division of a one-dimensional divisible good.
//!
//! Players describe their preferences as probability densities on the cake
//! `[0, 1]`. The crate discretizes them on a uniform grid, forms coalition
//! densities as pointwise maxima, and computes the weighted maxmin value
//!
//! ```text
//! v(Γ, w) = max over partitions (B_1..B_m) of min_j μ_{S_j}(B_j) / w(S_j)
//! ```
//!
//! by minimizing the convex function `g(α) = ∫ max_j α_j f_j^w` over the unit
//! simplex with a projected subgradient method. Every iterate yields a
//! certified bracket `lower ≤ v(Γ, w) ≤ upper`.
//!
//! On top of the solver, [`coalitions`] builds the coalitional game
//! `η(S, w) = w(S) · v(Γ_S, w)` for the cardinality and pre-division weight
//! systems and computes Shapley values.
//!
//! ```no_run
//! use maxmin_division::prelude::*;
//!
//! let problem = Problem::five_players();
//! let grid = Grid::new(problem.grid_cells)?;
//! let table = coalition_table(&problem.densities(), &Coalition::singletons(5), &grid)?;
//! let wp = WeightedProblem::new(&table, Coalition::singletons(5), vec![1.0; 5])?;
//! let result = solve_value(&wp, &SolverConfig::new(5))?;
//! println!("[{}, {}]", result.lower, result.upper);
//! # Ok::<(), maxmin_division::Error>(())
//! ```

pub mod bounds;
pub mod cli;
pub mod coalitions;
mod error;
pub mod export;
pub mod measures;
pub mod partition;
pub mod problem;
pub mod subgradient;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::bounds::{lower_bound, lower_bound_from_values, upper_bound, BoundPair};
    pub use crate::coalitions::{
        shapley, weight_of, GameEntry, GameInstance, GameTable, ShapleyResult, WeightSystem, WeightSystemKind,
    };
    pub use crate::measures::{cell_masses, coalition_table, density_eval, Coalition, DensitySpec, Grid, MeasureTable};
    pub use crate::partition::{g_eval, maxsum_partition, Allocation, PvvResult, WeightedProblem};
    pub use crate::problem::{PlayerSpec, Problem, WeightsSpec};
    pub use crate::subgradient::{
        clipped_step, solve_partition, solve_value, update_alpha, IterationRecord, SolveResult, SolverConfig, StepKind,
        StepRule,
    };
    pub use crate::{Error, Result};
}
