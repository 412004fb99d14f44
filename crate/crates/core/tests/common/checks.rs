//! Instance-independent checks, each driven by a single seed so the same
//! code backs the proptest suite and the acceptance runner.

use maxmin_division::prelude::*;
use rand::Rng;

use super::{densities, problem_with, rng, simplex_point, weighted_problem};

pub type Check = fn(u64) -> std::result::Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn small_problem(seed: u64) -> (rand_chacha::ChaCha8Rng, WeightedProblem, usize) {
    let mut r = rng(seed);
    let m = r.random_range(1..=4);
    let cells = r.random_range(16..=256);
    let p = weighted_problem(&mut r, m, cells);
    (r, p, m)
}

/// `g(β) − g(α) ≥ ⟨u^α, β − α⟩`.
pub fn subgradient_inequality(seed: u64) -> std::result::Result<(), String> {
    let (mut r, p, m) = small_problem(seed);
    let a = simplex_point(&mut r, m);
    let b = simplex_point(&mut r, m);
    let pa = maxsum_partition(&p, &a).map_err(|e| e.to_string())?;
    let gb = g_eval(&p, &b).map_err(|e| e.to_string())?;
    let diff: Vec<f64> = b.iter().zip(&a).map(|(x, y)| x - y).collect();
    let rhs = dot(&pa.values, &diff);
    ensure(gb - pa.g_value >= rhs - 1e-9, || format!("g(b)-g(a)={} < {rhs}", gb - pa.g_value))
}

/// `g(α) = ⟨α, u^α⟩`.
pub fn support_identity(seed: u64) -> std::result::Result<(), String> {
    let (mut r, p, m) = small_problem(seed);
    let a = simplex_point(&mut r, m);
    let pvv = maxsum_partition(&p, &a).map_err(|e| e.to_string())?;
    let inner = dot(&a, &pvv.values);
    ensure((pvv.g_value - inner).abs() <= 1e-9, || format!("g={} <a,u>={inner}", pvv.g_value))?;
    let ok = pvv.values.iter().zip(p.totals()).all(|(u, t)| *u >= 0.0 && *u <= t + 1e-12);
    ensure(ok, || format!("u={:?} outside [0, totals={:?}]", pvv.values, p.totals()))
}

/// `v̄(u) ≤ g(α)` and `min u ≤ g(α) ≤ max u`.
pub fn upper_chain(seed: u64) -> std::result::Result<(), String> {
    let (mut r, p, m) = small_problem(seed);
    let a = simplex_point(&mut r, m);
    let pvv = maxsum_partition(&p, &a).map_err(|e| e.to_string())?;
    let vbar = lower_bound(&pvv, p.totals()).map_err(|e| e.to_string())?;
    let (lo, hi, g) = (pvv.min_value(), pvv.max_value(), pvv.g_value);
    ensure(vbar <= g + 1e-12 && lo <= g + 1e-12 && g <= hi + 1e-12, || format!("u={:?} vbar={vbar} g={g}", pvv.values))
}

/// `min u ≤ v̄(u)` on the same draws as [`upper_chain`].
pub fn lower_link(seed: u64) -> std::result::Result<(), String> {
    let (mut r, p, m) = small_problem(seed);
    let a = simplex_point(&mut r, m);
    let pvv = maxsum_partition(&p, &a).map_err(|e| e.to_string())?;
    let vbar = lower_bound(&pvv, p.totals()).map_err(|e| e.to_string())?;
    ensure(pvv.min_value() <= vbar + 1e-12, || format!("m={m} u={:?} totals={:?} vbar={vbar}", pvv.values, p.totals()))
}

/// `g((α+β)/2) ≤ (g(α) + g(β))/2`.
pub fn midpoint_convexity(seed: u64) -> std::result::Result<(), String> {
    let (mut r, p, m) = small_problem(seed);
    let a = simplex_point(&mut r, m);
    let b = simplex_point(&mut r, m);
    let mid: Vec<f64> = a.iter().zip(&b).map(|(x, y)| 0.5 * (x + y)).collect();
    let g = |x: &[f64]| g_eval(&p, x).map_err(|e| e.to_string());
    let (ga, gb, gm) = (g(&a)?, g(&b)?, g(&mid)?);
    ensure(gm <= 0.5 * (ga + gb) + 1e-9, || format!("g(mid)={gm} > {}", 0.5 * (ga + gb)))
}

/// Scaling every weight by `c` keeps the assignment and divides `u` and `g` by `c`.
pub fn weight_scaling(seed: u64) -> std::result::Result<(), String> {
    let mut r = rng(seed);
    let m = r.random_range(1..=4);
    let players = densities(&mut r, m);
    let cells = r.random_range(16..=256);
    let w: Vec<f64> = (0..m).map(|_| r.random_range(0.5..2.0)).collect();
    let c = r.random_range(0.1..10.0);
    let a = simplex_point(&mut r, m);
    let base = problem_with(&players, cells, w.clone());
    let scaled = problem_with(&players, cells, w.iter().map(|x| c * x).collect());
    let p1 = maxsum_partition(&base, &a).map_err(|e| e.to_string())?;
    let p2 = maxsum_partition(&scaled, &a).map_err(|e| e.to_string())?;
    ensure(p1.allocation == p2.allocation, || format!("assignment changed under c={c}"))?;
    let ok = p1.values.iter().zip(&p2.values).all(|(x, y)| (x / c - y).abs() <= 1e-12)
        && (p1.g_value / c - p2.g_value).abs() <= 1e-12;
    ensure(ok, || format!("c={c}: u={:?} cu={:?}", p1.values, p2.values))
}

/// On at most 8 cells and 3 coalitions the maxsum partition attains the best
/// of all `m^cells` assignments exactly.
pub fn brute_force_oracle(seed: u64) -> std::result::Result<(), String> {
    let mut r = rng(seed);
    let m = r.random_range(1..=3);
    let cells = r.random_range(1..=8);
    let p = weighted_problem(&mut r, m, cells);
    let a = simplex_point(&mut r, m);
    let objective = |owner: &dyn Fn(usize) -> usize| -> f64 {
        (0..cells).map(|k| a[owner(k)] * p.weighted_mass(k, owner(k))).sum()
    };
    let mut best = f64::NEG_INFINITY;
    for code in 0..m.pow(cells as u32) {
        let v = objective(&|k| code / m.pow(k as u32) % m);
        best = best.max(v);
    }
    let pvv = maxsum_partition(&p, &a).map_err(|e| e.to_string())?;
    let got = objective(&|k| pvv.allocation.owner(k));
    ensure(got == best, || format!("maxsum {got} != brute force {best}"))?;
    ensure((pvv.g_value - best).abs() <= 1e-15, || format!("g={} brute={best}", pvv.g_value))
}

/// Minimum of `t ↦ g(t, 1 − t)` by golden-section search.
pub fn golden_section_min(p: &WeightedProblem) -> f64 {
    let g = |t: f64| g_eval(p, &[t, 1.0 - t]).expect("on simplex");
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > 1e-12 {
        let x1 = hi - phi * (hi - lo);
        let x2 = lo + phi * (hi - lo);
        if g(x1) <= g(x2) {
            hi = x2
        } else {
            lo = x1
        }
    }
    g(0.5 * (lo + hi))
}

/// For two coalitions the solver bracket agrees with a golden-section
/// minimization of `g` within `2ε`.
pub fn golden_section_oracle(seed: u64) -> std::result::Result<(), String> {
    golden_section_trial(seed).map(|_| ())
}

/// [`golden_section_oracle`], also reporting whether the solve converged.
/// Unconverged solves only have to contain the oracle value.
pub fn golden_section_trial(seed: u64) -> std::result::Result<bool, String> {
    let mut r = rng(seed);
    let p = weighted_problem(&mut r, 2, 1024);
    let eps = 1e-3;
    let v = golden_section_min(&p);
    let res = solve_value(&p, &SolverConfig::new(2).with_epsilon(eps)).map_err(|e| e.to_string())?;
    ensure(res.lower <= v + 1e-9 && v <= res.upper + 1e-9, || {
        format!("oracle {v} outside bracket [{}, {}]", res.lower, res.upper)
    })?;
    ensure(!res.converged || (res.midpoint() - v).abs() <= 2.0 * eps, || {
        format!("midpoint {} vs oracle {v}", res.midpoint())
    })?;
    Ok(res.converged)
}

/// Every solver iterate is interior and on the simplex; the best bounds are
/// monotone and ordered; the same inputs give the same trace.
pub fn trace_invariants(seed: u64) -> std::result::Result<(), String> {
    let (mut r, p, m) = small_problem(seed);
    let cfg = SolverConfig { max_iterations: 2_000, ..SolverConfig::new(m).with_trace() };
    let res = if r.random_bool(0.5) { solve_value(&p, &cfg) } else { solve_partition(&p, &cfg) }
        .map_err(|e| e.to_string())?;
    let trace = res.trace.as_ref().ok_or("no trace recorded")?;
    for rec in trace {
        let sum: f64 = rec.alpha.iter().sum();
        ensure(rec.alpha.iter().all(|a| *a > 0.0) && (sum - 1.0).abs() <= 1e-12, || {
            format!("t={}: alpha={:?}", rec.t, rec.alpha)
        })?;
        ensure(rec.best_lb <= rec.best_ub, || format!("t={}: lb > ub", rec.t))?;
    }
    for w in trace.windows(2) {
        ensure(w[1].best_ub <= w[0].best_ub && w[1].best_lb >= w[0].best_lb, || {
            format!("t={}: bracket moved outwards", w[1].t)
        })?;
    }
    let again = solve_value(&p, &cfg).map_err(|e| e.to_string())?;
    let first = solve_value(&p, &cfg).map_err(|e| e.to_string())?;
    ensure(again.trace == first.trace, || "nondeterministic trace".into())
}

/// A single maxsum step brackets the two-coalition value `min g`.
pub fn sandwich(seed: u64) -> std::result::Result<(), String> {
    let mut r = rng(seed);
    let p = weighted_problem(&mut r, 2, 256);
    let v = golden_section_min(&p);
    let a = simplex_point(&mut r, 2);
    let b = BoundPair::from_pvv(&maxsum_partition(&p, &a).map_err(|e| e.to_string())?, p.totals())
        .map_err(|e| e.to_string())?;
    ensure(b.lower <= v + 1e-12 && v <= b.upper + 1e-12, || format!("[{}, {}] misses {v}", b.lower, b.upper))
}

/// Problem files survive a write and reload unchanged.
pub fn problem_round_trip(seed: u64) -> std::result::Result<(), String> {
    let mut r = rng(seed);
    let n = r.random_range(1..=6);
    let players = densities(&mut r, n)
        .into_iter()
        .enumerate()
        .map(|(i, density)| PlayerSpec { name: format!("P{}", i + 1), density })
        .collect();
    let weights = match r.random_range(0..4) {
        0 => None,
        1 => Some(WeightsSpec::Explicit((0..n).map(|_| r.random_range(0.1..3.0)).collect())),
        _ => Some(serde_json::from_str(if r.random_bool(0.5) { "\"card\"" } else { "\"pre\"" }).unwrap()),
    };
    let problem = Problem { players, grid_cells: r.random_range(1..10_000), weights };
    let back = Problem::from_json(&problem.to_json()).map_err(|e| e.to_string())?;
    ensure(back == problem, || "round trip changed the problem".into())
}
