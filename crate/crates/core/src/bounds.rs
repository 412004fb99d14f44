//! Certified bounds on the weighted maxmin value from a single partition
//! value vector.

use serde::Serialize;

use crate::partition::PvvResult;
use crate::{Error, Result};

/// A bracket `lower ≤ v(Γ, w) ≤ upper` with the coefficients and value
/// vector that produced it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundPair {
    pub lower: f64,
    pub upper: f64,
    pub witness_alpha: Vec<f64>,
    pub witness_u: Vec<f64>,
}

impl BoundPair {
    pub fn from_pvv(pvv: &PvvResult, totals: &[f64]) -> Result<Self> {
        Ok(BoundPair {
            lower: lower_bound(pvv, totals)?,
            upper: upper_bound(pvv),
            witness_alpha: pvv.alpha.clone(),
            witness_u: pvv.values.clone(),
        })
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// `g(α)`, which dominates the maxmin value for every `α`.
pub fn upper_bound(pvv: &PvvResult) -> f64 {
    pvv.g_value
}

/// Lower bound from the convex hull of `u` and the axis points
/// `(0, …, μ_q^w(C), …, 0)`, `q ≠ h`, intersected with the diagonal.
pub fn lower_bound(pvv: &PvvResult, totals: &[f64]) -> Result<f64> {
    lower_bound_from_values(&pvv.values, totals)
}

/// Closed form `u_h / (1 + Σ_{j≠h} (u_h − u_j) / μ_j^w(C))` where `u_h` is the
/// largest coordinate (lowest index on ties).
///
/// With two coalitions the result is at least `min_j u_j`. With more it can
/// fall below it, so callers wanting the best certificate from one partition
/// may take the larger of the two.
pub fn lower_bound_from_values(u: &[f64], totals: &[f64]) -> Result<f64> {
    if u.is_empty() || u.len() != totals.len() {
        return Err(Error::InvalidStructure(format!(
            "value vector has {} coordinates, totals have {}",
            u.len(),
            totals.len()
        )));
    }
    if let Some(j) = totals.iter().position(|t| t.is_nan() || *t <= 0.0) {
        return Err(Error::ZeroTotal(j));
    }
    let mut h = 0;
    for j in 1..u.len() {
        if u[j] > u[h] {
            h = j;
        }
    }
    let uh = u[h];
    let denom: f64 = 1.0
        + u.iter().zip(totals).enumerate().filter(|&(j, _)| j != h).map(|(_, (uj, tj))| (uh - uj) / tj).sum::<f64>();
    Ok(uh / denom)
}
