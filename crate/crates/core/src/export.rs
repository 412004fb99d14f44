//! CSV and JSON writers for allocations, traces, game tables and Shapley
//! values. Numbers in CSV output carry six significant digits.

use std::collections::BTreeMap;
use std::io::Write;

use crate::coalitions::{GameTable, ShapleyResult};
use crate::measures::{Coalition, Grid};
use crate::partition::Allocation;
use crate::subgradient::IterationRecord;
use crate::{Error, Result};

/// Formats `x` like C's `%.6g`.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    // The exponent after rounding to six digits decides the notation.
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{}{:02}", trim_zeros(mantissa.to_string()), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Per-cell allocation: `cell_index,x_left,x_right,coalition`.
pub fn write_allocation_csv<W: Write>(
    out: W,
    grid: &Grid,
    allocation: &Allocation,
    coalitions: &[Coalition],
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["cell_index", "x_left", "x_right", "coalition"])?;
    for (k, &j) in allocation.owners().iter().enumerate() {
        w.write_record([k.to_string(), sig6(grid.edge(k)), sig6(grid.edge(k + 1)), coalitions[j].to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Interval form `{coalition: [[a, b], …]}` with adjacent cells merged.
pub fn allocation_intervals(
    grid: &Grid,
    allocation: &Allocation,
    coalitions: &[Coalition],
) -> BTreeMap<String, Vec<[f64; 2]>> {
    allocation
        .intervals(grid, coalitions.len())
        .into_iter()
        .zip(coalitions)
        .map(|(iv, s)| (s.to_string(), iv))
        .collect()
}

/// Iteration trace: `t,ub,lb,g,vbar,step,alpha_1..alpha_m,u_1..u_m`.
pub fn write_trace_csv<W: Write>(out: W, trace: &[IterationRecord]) -> Result<()> {
    let m = trace.first().map_or(0, |r| r.alpha.len());
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = ["t", "ub", "lb", "g", "vbar", "step"].map(String::from).to_vec();
    header.extend((1..=m).map(|j| format!("alpha_{j}")));
    header.extend((1..=m).map(|j| format!("u_{j}")));
    w.write_record(&header)?;
    for r in trace {
        let mut row = vec![r.t.to_string(), sig6(r.best_ub), sig6(r.best_lb), sig6(r.g), sig6(r.vbar), sig6(r.step)];
        row.extend(r.alpha.iter().map(|a| sig6(*a)));
        row.extend(r.u.iter().map(|u| sig6(*u)));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Game table: `coalition,eta_card,eta_pre,converged`, with a column per
/// system that was computed.
pub fn write_game_csv<W: Write>(out: W, card: Option<&GameTable>, pre: Option<&GameTable>) -> Result<()> {
    let tables: Vec<(&str, &GameTable)> =
        [("eta_card", card), ("eta_pre", pre)].into_iter().filter_map(|(n, t)| t.map(|t| (n, t))).collect();
    let Some(&(_, first)) = tables.first() else {
        return Err(Error::InvalidConfig("no game table to write".into()));
    };
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["coalition"];
    header.extend(tables.iter().map(|(n, _)| *n));
    header.push("converged");
    w.write_record(&header)?;
    for s in Coalition::all_nonempty(first.player_count()) {
        let mut row = vec![s.to_string()];
        let mut converged = true;
        for (_, t) in &tables {
            let e = t.get(s).ok_or_else(|| Error::MissingCoalition(s.to_string()))?;
            row.push(sig6(e.value));
            converged &= e.converged;
        }
        row.push(converged.to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Shapley table: `player,sv_card,sv_pre`, with a column per system computed.
pub fn write_shapley_csv<W: Write>(out: W, card: Option<&ShapleyResult>, pre: Option<&ShapleyResult>) -> Result<()> {
    let cols: Vec<(&str, &ShapleyResult)> =
        [("sv_card", card), ("sv_pre", pre)].into_iter().filter_map(|(n, t)| t.map(|t| (n, t))).collect();
    let Some(&(_, first)) = cols.first() else {
        return Err(Error::InvalidConfig("no Shapley values to write".into()));
    };
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["player"];
    header.extend(cols.iter().map(|(n, _)| *n));
    w.write_record(&header)?;
    for i in 0..first.values.len() {
        let mut row = vec![(i + 1).to_string()];
        row.extend(cols.iter().map(|(_, sv)| sig6(sv.values[i])));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
