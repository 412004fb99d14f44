//! Projected subgradient minimization of `g` over the unit simplex.
//!
//! Each step moves `α` against the partition value vector, recentred so the
//! iterate stays on the simplex:
//!
//! ```text
//! α^{t+1} = α^t − s'_t (u^t − ū^t),   s'_t = min(s_t, τ_t)
//! ```
//!
//! where `τ_t = (K−1)/K · min_{i: u_i > ū} m α_i / ((m−1) u_i − Σ_{j≠i} u_j)`
//! keeps every component strictly positive, so no Euclidean projection is
//! needed.

use serde::{Deserialize, Serialize};

use crate::bounds::lower_bound;
use crate::partition::{check_simplex, maxsum_partition, Allocation, PvvResult, WeightedProblem};
use crate::{Error, Result};

/// Stopping on `g(α^t) = lb` uses this absolute tolerance.
const EXACT_HIT_EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    /// `s_t = a / (t + 1)`
    Harmonic,
    /// `s_t = a / √(t + 1)`
    Sqrt,
}

/// Diminishing step sequence plus the clip constant `K`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRule {
    pub kind: StepKind,
    pub scale: f64,
    pub clip_k: u32,
}

impl Default for StepRule {
    fn default() -> Self {
        StepRule { kind: StepKind::Harmonic, scale: 5.0, clip_k: 10 }
    }
}

impl StepRule {
    /// Unclipped step `s_t`.
    pub fn base(&self, t: usize) -> f64 {
        let n = (t + 1) as f64;
        match self.kind {
            StepKind::Harmonic => self.scale / n,
            StepKind::Sqrt => self.scale / n.sqrt(),
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.scale.is_finite() && self.scale > 0.0) {
            return Err(Error::InvalidConfig(format!("step scale must be positive, got {}", self.scale)));
        }
        if self.clip_k < 2 {
            return Err(Error::InvalidConfig(format!("clip constant K must be at least 2, got {}", self.clip_k)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub epsilon: f64,
    pub max_iterations: usize,
    pub step_rule: StepRule,
    /// Starting coefficients; `None` means the barycentre `(1/m, …, 1/m)`.
    pub initial_alpha: Option<Vec<f64>>,
    pub record_trace: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            epsilon: 1e-3,
            max_iterations: 50_000,
            step_rule: StepRule::default(),
            initial_alpha: None,
            record_trace: false,
        }
    }
}

impl SolverConfig {
    /// Default configuration for `m` coalitions, starting at the barycentre.
    pub fn new(m: usize) -> Self {
        SolverConfig { initial_alpha: Some(vec![1.0 / m as f64; m]), ..Default::default() }
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_trace(mut self) -> Self {
        self.record_trace = true;
        self
    }

    fn start(&self, m: usize) -> Result<Vec<f64>> {
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(Error::InvalidConfig(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig("max_iterations must be positive".into()));
        }
        self.step_rule.validate()?;
        let alpha = match &self.initial_alpha {
            Some(a) => a.clone(),
            None => vec![1.0 / m as f64; m],
        };
        check_simplex(&alpha, m).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        if alpha.iter().any(|a| *a <= 0.0) {
            return Err(Error::InvalidConfig("initial alpha must be strictly interior".into()));
        }
        Ok(alpha)
    }
}

/// One row of the iteration trace.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IterationRecord {
    pub t: usize,
    pub alpha: Vec<f64>,
    pub u: Vec<f64>,
    pub g: f64,
    pub vbar: f64,
    pub best_ub: f64,
    pub best_lb: f64,
    /// Step `s'_t` taken after this row; zero on the final row.
    pub step: f64,
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub lower: f64,
    pub upper: f64,
    /// Best iterate: largest `min_j u_j` for [`solve_value`], smallest spread
    /// for [`solve_partition`].
    pub pvv: PvvResult,
    pub iterations: usize,
    pub converged: bool,
    pub trace: Option<Vec<IterationRecord>>,
}

impl SolveResult {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn alpha(&self) -> &[f64] {
        &self.pvv.alpha
    }

    pub fn allocation(&self) -> &Allocation {
        &self.pvv.allocation
    }
}

/// `s'_t = min(s_t, τ_t)`; `τ_t = ∞` when no coordinate exceeds the mean.
///
/// `m α_i / ((m−1) u_i − Σ_{j≠i} u_j)` is evaluated as `α_i / (u_i − ū)` so
/// the filter and the denominator share one rounding.
pub fn clipped_step(t: usize, alpha: &[f64], u: &[f64], rule: &StepRule) -> f64 {
    let s = rule.base(t);
    let tau = deviations(u).zip(alpha).filter(|(d, _)| *d > 0.0).map(|(d, a)| a / d).fold(f64::INFINITY, f64::min);
    let k = rule.clip_k as f64;
    s.min((k - 1.0) / k * tau)
}

/// `u_i − ū`, exactly zero when all coordinates coincide.
fn deviations(u: &[f64]) -> impl Iterator<Item = f64> + '_ {
    let flat = u.iter().all(|x| *x == u[0]);
    let mean = u.iter().sum::<f64>() / u.len() as f64;
    u.iter().map(move |x| if flat { 0.0 } else { x - mean })
}

/// `α − s (u − ū·1)`. Fails if a component would not stay positive.
pub fn update_alpha(alpha: &[f64], u: &[f64], step: f64) -> Result<Vec<f64>> {
    alpha
        .iter()
        .zip(deviations(u))
        .enumerate()
        .map(|(index, (a, d))| {
            let value = a - step * d;
            if value > 0.0 {
                Ok(value)
            } else {
                Err(Error::LeftInterior { step, index, value })
            }
        })
        .collect()
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum StopRule {
    Bracket,
    Spread,
}

/// Runs the subgradient loop until `ub − lb < ε`.
pub fn solve_value(problem: &WeightedProblem, config: &SolverConfig) -> Result<SolveResult> {
    run(problem, config, StopRule::Bracket)
}

/// Runs the subgradient loop until `max_j u_j − min_j u_j < ε` and returns the
/// most equitable partition seen.
pub fn solve_partition(problem: &WeightedProblem, config: &SolverConfig) -> Result<SolveResult> {
    run(problem, config, StopRule::Spread)
}

fn run(problem: &WeightedProblem, config: &SolverConfig, stop: StopRule) -> Result<SolveResult> {
    let m = problem.coalition_count();
    let mut alpha = config.start(m)?;
    let totals = problem.totals();

    let mut ub = f64::INFINITY;
    let mut lb = f64::NEG_INFINITY;
    let mut best: Option<(f64, PvvResult)> = None;
    let mut trace = config.record_trace.then(Vec::new);
    let mut converged = false;
    let mut iterations = 0;

    for t in 0..config.max_iterations {
        let pvv = maxsum_partition(problem, &alpha)?;
        let vbar = lower_bound(&pvv, totals)?;
        ub = ub.min(pvv.g_value);
        lb = lb.max(vbar);
        iterations = t + 1;

        converged = match stop {
            StopRule::Bracket => ub - lb < config.epsilon || (pvv.g_value - lb).abs() <= EXACT_HIT_EPS,
            StopRule::Spread => pvv.spread() < config.epsilon,
        };
        let step = if converged { 0.0 } else { clipped_step(t, &alpha, &pvv.values, &config.step_rule) };
        if let Some(trace) = trace.as_mut() {
            trace.push(IterationRecord {
                t,
                alpha: alpha.clone(),
                u: pvv.values.clone(),
                g: pvv.g_value,
                vbar,
                best_ub: ub,
                best_lb: lb,
                step: if t + 1 == config.max_iterations { 0.0 } else { step },
            });
        }

        let next_alpha = if converged || t + 1 == config.max_iterations {
            None
        } else {
            Some(update_alpha(&alpha, &pvv.values, step)?)
        };

        let score = match stop {
            StopRule::Bracket => pvv.min_value(),
            StopRule::Spread => -pvv.spread(),
        };
        if best.as_ref().is_none_or(|(s, _)| score > *s) {
            best = Some((score, pvv));
        }
        match next_alpha {
            Some(a) => alpha = a,
            None => break,
        }
    }

    let (_, pvv) = best.expect("at least one iteration runs");
    Ok(SolveResult { lower: lb, upper: ub, pvv, iterations, converged, trace })
}
