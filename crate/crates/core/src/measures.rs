//! Player densities on the cake `[0, 1]`, the uniform grid, and per-cell
//! masses for players and coalitions.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::beta::{beta_reg, ln_beta};

use crate::{Error, Result};

/// Largest number of players a [`Coalition`] bitmask can hold.
pub const MAX_PLAYERS: usize = 32;

/// Tolerance under which a piecewise-constant density counts as already
/// normalized and is left untouched.
const NORMALIZED_EPS: f64 = 1e-12;

/// Bisection depth used to locate density crossings inside a cell.
const CROSSING_DEPTH: u32 = 40;

/// A set of players stored as a bitmask over zero-based player indices.
///
/// Displayed and parsed with one-based player numbers, e.g. `{1,3}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coalition(u32);

impl Coalition {
    pub const EMPTY: Coalition = Coalition(0);

    pub fn from_bits(bits: u32) -> Self {
        Coalition(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// Builds a coalition from zero-based player indices.
    pub fn new(members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut bits = 0u32;
        for i in members {
            if i >= MAX_PLAYERS {
                return Err(Error::UnknownPlayer { coalition: format!("{i}"), player: i + 1, players: MAX_PLAYERS });
            }
            bits |= 1 << i;
        }
        Ok(Coalition(bits))
    }

    pub fn singleton(player: usize) -> Self {
        assert!(player < MAX_PLAYERS, "player index {player} too large");
        Coalition(1 << player)
    }

    pub fn grand(n: usize) -> Self {
        assert!(n <= MAX_PLAYERS, "too many players: {n}");
        if n == MAX_PLAYERS {
            Coalition(u32::MAX)
        } else {
            Coalition((1u32 << n) - 1)
        }
    }

    pub fn singletons(n: usize) -> Vec<Self> {
        (0..n).map(Coalition::singleton).collect()
    }

    /// Every nonempty coalition of `n` players, ordered by size and then
    /// lexicographically by members.
    pub fn all_nonempty(n: usize) -> Vec<Self> {
        let grand = Coalition::grand(n).0;
        let mut all: Vec<Coalition> = (1..=grand).map(Coalition).collect();
        all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.members().cmp(b.members())));
        all
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, player: usize) -> bool {
        player < MAX_PLAYERS && self.0 & (1 << player) != 0
    }

    pub fn is_subset_of(self, other: Coalition) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Coalition) -> bool {
        self.0 & other.0 == 0
    }

    pub fn union(self, other: Coalition) -> Coalition {
        Coalition(self.0 | other.0)
    }

    pub fn with(self, player: usize) -> Coalition {
        self.union(Coalition::singleton(player))
    }

    /// Zero-based member indices in increasing order.
    pub fn members(self) -> impl Iterator<Item = usize> {
        (0..MAX_PLAYERS).filter(move |&i| self.0 & (1 << i) != 0)
    }

    /// Highest member index plus one, i.e. the smallest player count that
    /// contains this coalition.
    pub fn span(self) -> usize {
        MAX_PLAYERS - self.0.leading_zeros() as usize
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.members().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        f.write_str("}")
    }
}

/// Parses one-based member lists such as `3,5` or `{3,5}`.
impl FromStr for Coalition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('{').trim_end_matches('}');
        let mut bits = 0u32;
        for tok in inner.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let player: usize =
                tok.parse().map_err(|_| Error::InvalidStructure(format!("bad player number {tok:?} in {s:?}")))?;
            if player == 0 || player > MAX_PLAYERS {
                return Err(Error::InvalidStructure(format!(
                    "player numbers start at 1 and stop at {MAX_PLAYERS}, got {player}"
                )));
            }
            bits |= 1 << (player - 1);
        }
        if bits == 0 {
            return Err(Error::EmptyCoalition);
        }
        Ok(Coalition(bits))
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Kind {
    Uniform,
    Beta { a: f64, b: f64, norm: f64 },
    Piecewise { breakpoints: Vec<f64>, values: Vec<f64>, cumulative: Vec<f64> },
}

/// A probability density on `[0, 1]`.
///
/// Constructed through [`DensitySpec::uniform`], [`DensitySpec::beta`] or
/// [`DensitySpec::piecewise_constant`]; all three validate their parameters,
/// so every value of this type integrates to one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DensityRepr", into = "DensityRepr")]
pub struct DensitySpec(Kind);

/// Wire form of a density inside a problem file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DensityRepr {
    Uniform,
    Beta { a: f64, b: f64 },
    PiecewiseConstant { breakpoints: Vec<f64>, values: Vec<f64> },
}

impl TryFrom<DensityRepr> for DensitySpec {
    type Error = Error;

    fn try_from(repr: DensityRepr) -> Result<Self> {
        match repr {
            DensityRepr::Uniform => Ok(DensitySpec::uniform()),
            DensityRepr::Beta { a, b } => DensitySpec::beta(a, b),
            DensityRepr::PiecewiseConstant { breakpoints, values } => {
                DensitySpec::piecewise_constant(breakpoints, values)
            }
        }
    }
}

impl From<DensitySpec> for DensityRepr {
    fn from(spec: DensitySpec) -> Self {
        match spec.0 {
            Kind::Uniform => DensityRepr::Uniform,
            Kind::Beta { a, b, .. } => DensityRepr::Beta { a, b },
            Kind::Piecewise { breakpoints, values, .. } => DensityRepr::PiecewiseConstant { breakpoints, values },
        }
    }
}

impl DensitySpec {
    pub fn uniform() -> Self {
        DensitySpec(Kind::Uniform)
    }

    pub fn beta(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a > 0.0 && b > 0.0) {
            return Err(Error::InvalidDensity(format!(
                "beta parameters must be positive and finite, got a={a}, b={b}"
            )));
        }
        Ok(DensitySpec(Kind::Beta { a, b, norm: ln_beta(a, b).exp() }))
    }

    /// A step density. `breakpoints` must start at 0, end at 1 and increase
    /// strictly; `values[k]` applies on `[breakpoints[k], breakpoints[k+1])`.
    /// The values are rescaled so the total mass is one.
    pub fn piecewise_constant(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.len() < 2 || values.len() != breakpoints.len() - 1 {
            return Err(Error::InvalidDensity(format!(
                "need n+1 breakpoints for n values, got {} breakpoints and {} values",
                breakpoints.len(),
                values.len()
            )));
        }
        if breakpoints[0] != 0.0 || *breakpoints.last().unwrap() != 1.0 {
            return Err(Error::InvalidDensity("breakpoints must start at 0 and end at 1".into()));
        }
        if breakpoints.windows(2).any(|w| w[1].is_nan() || w[1] <= w[0]) {
            return Err(Error::InvalidDensity("breakpoints must be strictly increasing".into()));
        }
        if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::InvalidDensity("density values must be finite and nonnegative".into()));
        }
        let total: f64 = values.iter().zip(breakpoints.windows(2)).map(|(v, w)| v * (w[1] - w[0])).sum();
        if total.is_nan() || total <= 0.0 {
            return Err(Error::InvalidDensity("piecewise-constant density has zero mass".into()));
        }
        let values = if (total - 1.0).abs() <= NORMALIZED_EPS {
            values
        } else {
            values.into_iter().map(|v| v / total).collect()
        };
        let mut cumulative = Vec::with_capacity(breakpoints.len());
        cumulative.push(0.0);
        let mut acc = 0.0;
        for (v, w) in values.iter().zip(breakpoints.windows(2)) {
            acc += v * (w[1] - w[0]);
            cumulative.push(acc);
        }
        Ok(DensitySpec(Kind::Piecewise { breakpoints, values, cumulative }))
    }

    pub fn repr(&self) -> DensityRepr {
        self.clone().into()
    }

    /// Density value at `x`, without the domain check of [`density_eval`].
    pub(crate) fn value_at(&self, x: f64) -> f64 {
        match &self.0 {
            Kind::Uniform => 1.0,
            Kind::Beta { a, b, norm } => x.powf(a - 1.0) * (1.0 - x).powf(b - 1.0) / norm,
            Kind::Piecewise { breakpoints, values, .. } => {
                // Right-continuous; the right end of the cake belongs to the last piece.
                let k = breakpoints.partition_point(|&p| p <= x);
                values[k.clamp(1, values.len()) - 1]
            }
        }
    }

    /// Cumulative distribution function on `[0, 1]`.
    pub fn cdf(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        match &self.0 {
            Kind::Uniform => x,
            Kind::Beta { a, b, .. } => {
                if x <= 0.0 {
                    0.0
                } else if x >= 1.0 {
                    1.0
                } else {
                    beta_reg(*a, *b, x)
                }
            }
            Kind::Piecewise { breakpoints, values, cumulative } => {
                if x >= 1.0 {
                    return *cumulative.last().unwrap();
                }
                let k = breakpoints.partition_point(|&p| p <= x).clamp(1, values.len()) - 1;
                cumulative[k] + values[k] * (x - breakpoints[k])
            }
        }
    }
}

/// Evaluates the density `f(x)` of `spec` at a point of the cake.
pub fn density_eval(spec: &DensitySpec, x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::OutsideCake(x));
    }
    Ok(spec.value_at(x))
}

/// Uniform grid of `cell_count` cells over `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Grid {
    cells: usize,
}

impl Grid {
    pub const DEFAULT_CELLS: usize = 4096;

    pub fn new(cells: usize) -> Result<Self> {
        if cells == 0 {
            return Err(Error::EmptyGrid);
        }
        Ok(Grid { cells })
    }

    pub fn cell_count(&self) -> usize {
        self.cells
    }

    /// Edge `x_k = k / K`, so `edge(0) == 0` and `edge(K) == 1` exactly.
    pub fn edge(&self, k: usize) -> f64 {
        k as f64 / self.cells as f64
    }

    pub fn width(&self, k: usize) -> f64 {
        self.edge(k + 1) - self.edge(k)
    }

    pub fn midpoint(&self, k: usize) -> f64 {
        0.5 * (self.edge(k) + self.edge(k + 1))
    }

    pub fn edges(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.cells).map(|k| self.edge(k))
    }
}

impl Default for Grid {
    fn default() -> Self {
        Grid { cells: Self::DEFAULT_CELLS }
    }
}

/// Mass of each grid cell under `spec`, as differences of the exact CDF.
pub fn cell_masses(spec: &DensitySpec, grid: &Grid) -> Vec<f64> {
    let cdf: Vec<f64> = grid.edges().map(|x| spec.cdf(x)).collect();
    cdf.windows(2).map(|w| (w[1] - w[0]).max(0.0)).collect()
}

/// Per-cell masses and midpoint densities for a set of players and coalitions.
#[derive(Clone, Debug)]
pub struct MeasureTable {
    grid: Grid,
    players: usize,
    coalitions: Vec<Coalition>,
    index: BTreeMap<Coalition, usize>,
    masses: Vec<Vec<f64>>,
    densities: Vec<Vec<f64>>,
}

impl MeasureTable {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn player_count(&self) -> usize {
        self.players
    }

    pub fn coalitions(&self) -> &[Coalition] {
        &self.coalitions
    }

    /// Cell masses `μ_S(cell)` for a coalition present in the table.
    pub fn masses(&self, coalition: Coalition) -> Result<&[f64]> {
        self.row(coalition).map(|r| self.masses[r].as_slice())
    }

    /// Coalition density `f_S` at each cell midpoint.
    pub fn densities(&self, coalition: Coalition) -> Result<&[f64]> {
        self.row(coalition).map(|r| self.densities[r].as_slice())
    }

    /// `μ_S(C)`, the value of the whole cake to the coalition.
    pub fn total(&self, coalition: Coalition) -> Result<f64> {
        Ok(self.masses(coalition)?.iter().sum())
    }

    pub fn contains(&self, coalition: Coalition) -> bool {
        self.index.contains_key(&coalition)
    }

    fn row(&self, coalition: Coalition) -> Result<usize> {
        self.index.get(&coalition).copied().ok_or_else(|| Error::MissingRow(coalition.to_string()))
    }
}

/// Builds the measure table for `subsets` of `players` on `grid`.
///
/// Singleton rows are exact CDF differences. For larger coalitions the
/// density is `max_{i∈S} f_i`; each cell is split where the maximizing member
/// changes and every piece is integrated with that member's CDF.
pub fn coalition_table(players: &[DensitySpec], subsets: &[Coalition], grid: &Grid) -> Result<MeasureTable> {
    let n = players.len();
    for &s in subsets {
        if s.is_empty() {
            return Err(Error::EmptyCoalition);
        }
        if s.span() > n {
            return Err(Error::UnknownPlayer { coalition: s.to_string(), player: s.span(), players: n });
        }
    }
    let mut coalitions: Vec<Coalition> = Vec::with_capacity(subsets.len());
    for &s in subsets {
        if !coalitions.contains(&s) {
            coalitions.push(s);
        }
    }

    let player_masses: Vec<Vec<f64>> = players.par_iter().map(|p| cell_masses(p, grid)).collect();

    let rows: Vec<(Vec<f64>, Vec<f64>)> =
        coalitions.par_iter().map(|&s| coalition_row(players, &player_masses, s, grid)).collect();

    let index = coalitions.iter().enumerate().map(|(r, &s)| (s, r)).collect();
    let (masses, densities) = rows.into_iter().unzip();
    Ok(MeasureTable { grid: *grid, players: n, coalitions, index, masses, densities })
}

fn coalition_row(
    players: &[DensitySpec],
    player_masses: &[Vec<f64>],
    coalition: Coalition,
    grid: &Grid,
) -> (Vec<f64>, Vec<f64>) {
    let members: Vec<usize> = coalition.members().collect();
    let densities: Vec<f64> = (0..grid.cell_count())
        .map(|k| {
            let x = grid.midpoint(k);
            members.iter().map(|&i| players[i].value_at(x)).fold(f64::NEG_INFINITY, f64::max)
        })
        .collect();

    if let [only] = members[..] {
        return (player_masses[only].clone(), densities);
    }

    let winner = |x: f64| -> usize {
        let mut best = members[0];
        let mut best_val = players[best].value_at(x);
        for &i in &members[1..] {
            let v = players[i].value_at(x);
            if v > best_val {
                best = i;
                best_val = v;
            }
        }
        best
    };

    let masses = (0..grid.cell_count())
        .map(|k| {
            let (l, r) = (grid.edge(k), grid.edge(k + 1));
            let m = grid.midpoint(k);
            let (wl, wm, wr) = (winner(l), winner(m), winner(r));
            let integrated = if wl == wm && wm == wr {
                player_masses[wl][k]
            } else {
                piece_mass(players, &winner, l, m, wl, wm, 0) + piece_mass(players, &winner, m, r, wm, wr, 0)
            };
            // The exact integral of the max dominates every member's mass.
            members.iter().map(|&i| player_masses[i][k]).fold(integrated, f64::max)
        })
        .collect();
    (masses, densities)
}

fn piece_mass(
    players: &[DensitySpec],
    winner: &impl Fn(f64) -> usize,
    l: f64,
    r: f64,
    wl: usize,
    wr: usize,
    depth: u32,
) -> f64 {
    let mass = |i: usize, a: f64, b: f64| (players[i].cdf(b) - players[i].cdf(a)).max(0.0);
    if wl == wr {
        return mass(wl, l, r);
    }
    let m = 0.5 * (l + r);
    if depth >= CROSSING_DEPTH {
        return mass(wl, l, m) + mass(wr, m, r);
    }
    let wm = winner(m);
    piece_mass(players, winner, l, m, wl, wm, depth + 1) + piece_mass(players, winner, m, r, wm, wr, depth + 1)
}
