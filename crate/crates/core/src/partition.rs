//! Weighted maxsum partitions and the upper-bound function `g`.
//!
//! For coefficients `α` on the unit simplex each cell goes to the coalition
//! maximizing `α_j μ_j^w(cell)`. The resulting utility vector `u^α` (the
//! partition value vector) is a subgradient of `g` at `α`, and
//! `g(α) = ⟨α, u^α⟩`.

use serde::Serialize;

use crate::measures::{Coalition, Grid, MeasureTable};
use crate::{Error, Result};

/// Tolerance on `Σ α_j = 1`.
pub const SIMPLEX_EPS: f64 = 1e-12;

/// A coalition structure `Γ = (S_1, …, S_m)` with weights, discretized on a grid.
#[derive(Clone, Debug)]
pub struct WeightedProblem {
    grid: Grid,
    coalitions: Vec<Coalition>,
    weights: Vec<f64>,
    /// Cell-major weighted masses: `cells[k * m + j] = μ_{S_j}(cell k) / w(S_j)`.
    cells: Vec<f64>,
    totals: Vec<f64>,
}

impl WeightedProblem {
    /// Restricts `table` to the coalitions of `coalitions` and divides each
    /// row by its weight. Coalitions must be nonempty and pairwise disjoint.
    pub fn new(table: &MeasureTable, coalitions: Vec<Coalition>, weights: Vec<f64>) -> Result<Self> {
        let m = coalitions.len();
        if m == 0 {
            return Err(Error::InvalidStructure("at least one coalition is required".into()));
        }
        if weights.len() != m {
            return Err(Error::InvalidStructure(format!("{m} coalitions but {} weights", weights.len())));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::InvalidStructure(format!("weights must be positive, got {w}")));
        }
        for (a, &s) in coalitions.iter().enumerate() {
            if s.is_empty() {
                return Err(Error::EmptyCoalition);
            }
            if let Some(&t) = coalitions[a + 1..].iter().find(|t| !s.is_disjoint(**t)) {
                return Err(Error::InvalidStructure(format!("coalitions {s} and {t} overlap")));
            }
        }

        let grid = *table.grid();
        let cells_n = grid.cell_count();
        let mut cells = vec![0.0; cells_n * m];
        let mut totals = vec![0.0; m];
        for (j, (&s, &w)) in coalitions.iter().zip(&weights).enumerate() {
            let row = table.masses(s)?;
            for (k, &mass) in row.iter().enumerate() {
                let v = mass / w;
                cells[k * m + j] = v;
                totals[j] += v;
            }
        }
        Ok(WeightedProblem { grid, coalitions, weights, cells, totals })
    }

    /// Number of coalitions `m`.
    pub fn coalition_count(&self) -> usize {
        self.coalitions.len()
    }

    pub fn coalitions(&self) -> &[Coalition] {
        &self.coalitions
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// `μ_j^w(C)` for every coalition.
    pub fn totals(&self) -> &[f64] {
        &self.totals
    }

    /// `μ_j^w` of grid cell `k`.
    pub fn weighted_mass(&self, k: usize, j: usize) -> f64 {
        self.cells[k * self.coalition_count() + j]
    }

    /// Weighted value `μ_j^w(B_j)` of each coalition's share under `allocation`.
    pub fn values_of(&self, allocation: &Allocation) -> Vec<f64> {
        let m = self.coalition_count();
        let mut u = vec![0.0; m];
        for (k, &j) in allocation.owners.iter().enumerate() {
            u[j] += self.cells[k * m + j];
        }
        u
    }
}

/// Assignment of every grid cell to one coalition index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Allocation {
    owners: Vec<usize>,
}

impl Allocation {
    pub fn new(owners: Vec<usize>) -> Self {
        Allocation { owners }
    }

    pub fn owners(&self) -> &[usize] {
        &self.owners
    }

    pub fn owner(&self, cell: usize) -> usize {
        self.owners[cell]
    }

    /// Maximal runs of cells owned by each of `m` coalitions, as `[left, right]`
    /// intervals on the cake.
    pub fn intervals(&self, grid: &Grid, m: usize) -> Vec<Vec<[f64; 2]>> {
        let mut out = vec![Vec::new(); m];
        let mut start = 0;
        for k in 1..=self.owners.len() {
            if k == self.owners.len() || self.owners[k] != self.owners[start] {
                out[self.owners[start]].push([grid.edge(start), grid.edge(k)]);
                start = k;
            }
        }
        out
    }
}

/// A maxsum partition for coefficients `α` together with its value vector.
#[derive(Clone, Debug)]
pub struct PvvResult {
    pub alpha: Vec<f64>,
    pub allocation: Allocation,
    /// The partition value vector `u^α`.
    pub values: Vec<f64>,
    /// `g(α)`.
    pub g_value: f64,
}

impl PvvResult {
    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn spread(&self) -> f64 {
        self.max_value() - self.min_value()
    }
}

pub(crate) fn check_simplex(alpha: &[f64], m: usize) -> Result<()> {
    if alpha.len() != m {
        return Err(Error::NotOnSimplex(format!("expected {m} components, got {}", alpha.len())));
    }
    if let Some(a) = alpha.iter().find(|a| !(a.is_finite() && **a >= 0.0)) {
        return Err(Error::NotOnSimplex(format!("component {a} is negative or not finite")));
    }
    let sum: f64 = alpha.iter().sum();
    if (sum - 1.0).abs() > SIMPLEX_EPS {
        return Err(Error::NotOnSimplex(format!("components sum to {sum}")));
    }
    Ok(())
}

/// Assigns each cell to the coalition maximizing `α_j μ_j^w(cell)`; ties go
/// to the lowest coalition index.
pub fn maxsum_partition(problem: &WeightedProblem, alpha: &[f64]) -> Result<PvvResult> {
    let m = problem.coalition_count();
    check_simplex(alpha, m)?;
    let mut owners = Vec::with_capacity(problem.grid.cell_count());
    let mut values = vec![0.0; m];
    let mut g_value = 0.0;
    for cell in problem.cells.chunks_exact(m) {
        let mut best = 0;
        let mut best_score = alpha[0] * cell[0];
        for j in 1..m {
            let score = alpha[j] * cell[j];
            if score > best_score {
                best = j;
                best_score = score;
            }
        }
        owners.push(best);
        values[best] += cell[best];
        g_value += best_score;
    }
    Ok(PvvResult { alpha: alpha.to_vec(), allocation: Allocation { owners }, values, g_value })
}

/// `g(α) = ∫ max_j α_j f_j^w`, evaluated on the grid.
pub fn g_eval(problem: &WeightedProblem, alpha: &[f64]) -> Result<f64> {
    Ok(maxsum_partition(problem, alpha)?.g_value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{coalition_table, DensitySpec};
    use approx::assert_abs_diff_eq;

    fn singletons(players: &[DensitySpec], cells: usize) -> WeightedProblem {
        let n = players.len();
        let table = coalition_table(players, &Coalition::singletons(n), &Grid::new(cells).unwrap()).unwrap();
        WeightedProblem::new(&table, Coalition::singletons(n), vec![1.0; n]).unwrap()
    }

    #[test]
    fn single_coalition_takes_everything() {
        let p = singletons(&[DensitySpec::beta(2.0, 3.0).unwrap()], 50);
        let r = maxsum_partition(&p, &[1.0]).unwrap();
        assert!(r.allocation.owners().iter().all(|&j| j == 0));
        assert_abs_diff_eq!(r.values[0], p.totals()[0], epsilon = 1e-15);
        assert_abs_diff_eq!(r.g_value, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn five_player_g_at_uniform_alpha() {
        let players = [
            DensitySpec::beta(2.0, 5.0).unwrap(),
            DensitySpec::beta(3.0, 8.0).unwrap(),
            DensitySpec::beta(7.0, 2.0).unwrap(),
            DensitySpec::beta(10.0, 10.0).unwrap(),
            DensitySpec::uniform(),
        ];
        let p = singletons(&players, 4096);
        let g = g_eval(&p, &[0.2; 5]).unwrap();
        assert_abs_diff_eq!(g, 2.477 / 5.0, epsilon = 1e-3);
    }

    #[test]
    fn ties_go_to_lowest_index() {
        let b = DensitySpec::beta(2.0, 2.0).unwrap();
        let p = singletons(&[b.clone(), b], 64);
        let r = maxsum_partition(&p, &[0.5, 0.5]).unwrap();
        assert!(r.allocation.owners().iter().all(|&j| j == 0));
        assert_abs_diff_eq!(r.values[0], 1.0, epsilon = 1e-12);
        assert_eq!(r.values[1], 0.0);
    }

    #[test]
    fn vertex_alpha_gives_total() {
        let p = singletons(
            &[DensitySpec::beta(2.0, 5.0).unwrap(), DensitySpec::uniform(), DensitySpec::beta(5.0, 1.0).unwrap()],
            300,
        );
        for j in 0..3 {
            let mut alpha = vec![0.0; 3];
            alpha[j] = 1.0;
            assert_abs_diff_eq!(g_eval(&p, &alpha).unwrap(), p.totals()[j], epsilon = 1e-12);
        }
    }

    #[test]
    fn off_simplex_rejected() {
        let p = singletons(&[DensitySpec::uniform(), DensitySpec::uniform()], 4);
        for bad in [vec![0.6, 0.6], vec![1.2, -0.2], vec![1.0], vec![f64::NAN, 0.5]] {
            assert!(matches!(maxsum_partition(&p, &bad), Err(Error::NotOnSimplex(_))));
        }
    }

    #[test]
    fn structure_validation() {
        let players = [DensitySpec::uniform(), DensitySpec::uniform()];
        let all = Coalition::all_nonempty(2);
        let table = coalition_table(&players, &all, &Grid::new(4).unwrap()).unwrap();
        let overlap = WeightedProblem::new(&table, vec![all[0], all[2]], vec![1.0, 1.0]);
        assert!(matches!(overlap, Err(Error::InvalidStructure(_))));
        let zero_weight = WeightedProblem::new(&table, vec![all[0], all[1]], vec![1.0, 0.0]);
        assert!(matches!(zero_weight, Err(Error::InvalidStructure(_))));
        let none = WeightedProblem::new(&table, vec![], vec![]);
        assert!(matches!(none, Err(Error::InvalidStructure(_))));
        let small = coalition_table(&players, &[all[0]], &Grid::new(4).unwrap()).unwrap();
        let missing = WeightedProblem::new(&small, vec![all[0], all[1]], vec![1.0, 1.0]);
        assert!(matches!(missing, Err(Error::MissingRow(_))));
    }

    #[test]
    fn intervals_merge_runs() {
        let grid = Grid::new(4).unwrap();
        let a = Allocation::new(vec![0, 0, 1, 0]);
        let iv = a.intervals(&grid, 3);
        assert_eq!(iv[0], vec![[0.0, 0.5], [0.75, 1.0]]);
        assert_eq!(iv[1], vec![[0.5, 0.75]]);
        assert!(iv[2].is_empty());
    }
}
