use serde::Serialize;

use super::bfs::{min_positive_bfs, BfsOptions, BfsResult};
use super::gaps::{gap_report, GapOptions, GapValue};
use super::window::{enumerate_x, WindowPoint};
use crate::algebraic::Base;
use crate::error::{precondition, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum LiminfVerdict {
    /// The state set closed; the value is exact.
    PositiveCertified { value: WindowPoint },
    Decreasing,
    Stalled,
}

#[derive(Clone, Debug, Serialize)]
pub struct LiminfRow {
    pub depth: usize,
    pub min: WindowPoint,
    pub total_states: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct LiminfEstimate {
    pub rows: Vec<LiminfRow>,
    pub verdict: LiminfVerdict,
    pub bfs: BfsResult,
}

/// Per-depth trace of the smallest positive value at the scheduled depths.
pub fn liminf_estimate(base: &Base, m: i64, depths: &[usize], state_budget: usize) -> Result<LiminfEstimate> {
    let Some(&last) = depths.iter().max() else {
        return precondition("depth schedule is empty");
    };
    let bfs = min_positive_bfs(
        base,
        m,
        &BfsOptions {
            max_depth: Some(last),
            state_budget,
        },
    )?;
    let mut sorted = depths.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let rows: Vec<LiminfRow> = sorted
        .iter()
        .filter_map(|&d| {
            bfs.trace
                .iter()
                .take_while(|r| r.depth <= d)
                .last()
                .filter(|_| d <= bfs.depth() || bfs.closed)
                .map(|r| LiminfRow {
                    depth: d,
                    min: r.min.clone(),
                    total_states: r.total_states,
                })
        })
        .collect();
    let verdict = if bfs.closed {
        LiminfVerdict::PositiveCertified {
            value: bfs.min().clone(),
        }
    } else if rows.len() >= 2 && rows.last().unwrap().min.approx < rows[0].min.approx {
        LiminfVerdict::Decreasing
    } else {
        LiminfVerdict::Stalled
    };
    Ok(LiminfEstimate { rows, verdict, bfs })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LimsupVerdict {
    Decreasing,
    Constant,
    NotDecreasing,
}

#[derive(Clone, Debug, Serialize)]
pub struct LimsupRow {
    pub bound: f64,
    pub points: usize,
    pub max_gap_tail: GapValue,
}

#[derive(Clone, Debug, Serialize)]
pub struct LimsupEstimate {
    pub rows: Vec<LimsupRow>,
    pub tail_fraction: f64,
    pub verdict: LimsupVerdict,
}

/// Largest tail gap of `X^m(q)` windows along an increasing bound schedule.
pub fn limsup_estimate(
    base: &Base,
    m: i64,
    bounds: &[f64],
    tail_fraction: f64,
    state_budget: usize,
) -> Result<LimsupEstimate> {
    if bounds.is_empty() || bounds.windows(2).any(|w| w[0] >= w[1]) {
        return precondition("bounds must be a nonempty increasing list");
    }
    let opts = GapOptions {
        tail_fraction,
        ..GapOptions::default()
    };
    let mut rows = Vec::with_capacity(bounds.len());
    let mut exact_gaps = Vec::new();
    let ring = base.zq().ok();
    for &b in bounds {
        let w = enumerate_x(base, m, b, state_budget)?;
        if w.budget_exhausted {
            return Err(crate::SpectraError::BudgetExhausted(format!(
                "X window at bound {b} exceeds {state_budget} states"
            )));
        }
        let g = gap_report(&w, &opts)?;
        exact_gaps.push(g.max_gap_tail.vec.clone());
        rows.push(LimsupRow {
            bound: b,
            points: w.len(),
            max_gap_tail: g.max_gap_tail,
        });
    }
    let tol = base.tolerance();
    let cmp = |i: usize| -> Result<std::cmp::Ordering> {
        match (&ring, &exact_gaps[i], &exact_gaps[i + 1]) {
            (Some(r), Some(a), Some(b)) => r.cmp(
                &crate::algebraic::ZqElement::from_coeffs(b.clone()),
                &crate::algebraic::ZqElement::from_coeffs(a.clone()),
            ),
            _ => {
                let (a, b) = (rows[i].max_gap_tail.approx, rows[i + 1].max_gap_tail.approx);
                Ok(if (a - b).abs() <= tol * (1.0 + a.abs()) {
                    std::cmp::Ordering::Equal
                } else {
                    b.total_cmp(&a)
                })
            }
        }
    };
    let steps = (0..rows.len().saturating_sub(1))
        .map(cmp)
        .collect::<Result<Vec<_>>>()?;
    let verdict = if !steps.is_empty() && steps.iter().all(|o| o.is_lt()) {
        LimsupVerdict::Decreasing
    } else if steps.iter().all(|o| o.is_eq()) {
        LimsupVerdict::Constant
    } else {
        LimsupVerdict::NotDecreasing
    };
    Ok(LimsupEstimate {
        rows,
        tail_fraction,
        verdict,
    })
}
