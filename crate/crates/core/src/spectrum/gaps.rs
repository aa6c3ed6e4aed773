use std::cmp::Ordering;

use serde::Serialize;

use super::window::{Kind, SpectrumWindow};
use crate::algebraic::ZqElement;
use crate::error::{precondition, Result};

/// Default share of the window, from the top, used for tail statistics.
pub const DEFAULT_TAIL_FRACTION: f64 = 0.5;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapValue {
    pub approx: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vec: Option<Vec<i64>>,
    /// Index of the left endpoint in the window.
    pub index: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct GapReport {
    pub min_gap: GapValue,
    pub max_gap_tail: GapValue,
    pub histogram: Vec<HistogramBin>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub equal_count: Option<usize>,
    pub points: usize,
    pub kind: Kind,
    pub bound: f64,
    pub tail_fraction: f64,
    pub exact: bool,
}

#[derive(Clone, Debug)]
pub struct GapOptions {
    pub tail_fraction: f64,
    pub bins: usize,
    /// Count gaps within tolerance of this value.
    pub count_equal: Option<f64>,
}

impl Default for GapOptions {
    fn default() -> Self {
        GapOptions {
            tail_fraction: DEFAULT_TAIL_FRACTION,
            bins: 16,
            count_equal: None,
        }
    }
}

struct Gap {
    approx: f64,
    vec: Option<ZqElement>,
}

/// Consecutive differences of a window, exact in algebraic mode.
pub fn gaps(w: &SpectrumWindow) -> Result<Vec<f64>> {
    Ok(raw_gaps(w)?.into_iter().map(|g| g.approx).collect())
}

fn raw_gaps(w: &SpectrumWindow) -> Result<Vec<Gap>> {
    w.points
        .windows(2)
        .map(|p| match (w.ring(), &p[0].vec, &p[1].vec) {
            (Some(ring), Some(a), Some(b)) => {
                let d = ring.sub(
                    &ZqElement::from_coeffs(b.clone()),
                    &ZqElement::from_coeffs(a.clone()),
                )?;
                Ok(Gap {
                    approx: ring.value_f64(&d),
                    vec: Some(d),
                })
            }
            _ => Ok(Gap {
                approx: p[1].approx - p[0].approx,
                vec: None,
            }),
        })
        .collect()
}

fn gap_order(w: &SpectrumWindow, a: &Gap, b: &Gap) -> Result<Ordering> {
    match (w.ring(), &a.vec, &b.vec) {
        (Some(ring), Some(x), Some(y)) => ring.cmp(x, y),
        _ => Ok(a.approx.total_cmp(&b.approx)),
    }
}

fn pick(w: &SpectrumWindow, gaps: &[Gap], idx: impl Iterator<Item = usize>, want: Ordering) -> Result<usize> {
    let mut best: Option<usize> = None;
    for i in idx {
        best = match best {
            Some(j) if gap_order(w, &gaps[i], &gaps[j])? != want => Some(j),
            _ => Some(i),
        };
    }
    Ok(best.expect("nonempty gap range"))
}

fn value(gaps: &[Gap], i: usize) -> GapValue {
    GapValue {
        approx: gaps[i].approx,
        vec: gaps[i].vec.as_ref().map(|v| v.coeffs().to_vec()),
        index: i,
    }
}

/// Gap statistics; the tail holds gaps whose left endpoint is at least
/// `tail_fraction * B` (the last gap when none qualifies).
pub fn gap_report(w: &SpectrumWindow, opts: &GapOptions) -> Result<GapReport> {
    if w.points.len() < 2 {
        return precondition("gap statistics need at least two points");
    }
    let gaps = raw_gaps(w)?;
    let min_i = pick(w, &gaps, 0..gaps.len(), Ordering::Less)?;
    let start = opts.tail_fraction * w.bound;
    let tail: Vec<usize> = (0..gaps.len())
        .filter(|&i| w.points[i].approx >= start)
        .collect();
    let tail_i = if tail.is_empty() {
        gaps.len() - 1
    } else {
        pick(w, &gaps, tail.into_iter(), Ordering::Greater)?
    };
    let values: Vec<f64> = gaps.iter().map(|g| g.approx).collect();
    let tol = w.tolerance;
    let equal_count = opts.count_equal.map(|v| {
        values
            .iter()
            .filter(|g| (*g - v).abs() <= tol * (1.0 + v.abs()))
            .count()
    });
    Ok(GapReport {
        min_gap: value(&gaps, min_i),
        max_gap_tail: value(&gaps, tail_i),
        histogram: histogram(&values, opts.bins.max(1)),
        equal_count,
        points: w.points.len(),
        kind: w.kind,
        bound: w.bound,
        tail_fraction: opts.tail_fraction,
        exact: w.ring.is_some(),
    })
}

/// Equal-width bins from the smallest to the largest value; the last bin is closed.
pub fn histogram(values: &[f64], bins: usize) -> Vec<HistogramBin> {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if values.is_empty() {
        return vec![];
    }
    if hi <= lo {
        return vec![HistogramBin {
            lo,
            hi,
            count: values.len(),
        }];
    }
    let width = (hi - lo) / bins as f64;
    let mut out: Vec<HistogramBin> = (0..bins)
        .map(|i| HistogramBin {
            lo: lo + width * i as f64,
            hi: if i + 1 == bins { hi } else { lo + width * (i + 1) as f64 },
            count: 0,
        })
        .collect();
    for v in values {
        let i = (((v - lo) / width) as usize).min(bins - 1);
        out[i].count += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraic::{Base, IntPolynomial};
    use crate::spectrum::window::{enumerate_x, DEFAULT_STATE_BUDGET};

    #[test]
    fn binary_gaps() {
        let w = enumerate_x(&Base::integer(2).unwrap(), 1, 7.0, DEFAULT_STATE_BUDGET).unwrap();
        let r = gap_report(&w, &GapOptions::default()).unwrap();
        assert_eq!(r.min_gap.approx, 1.0);
        assert_eq!(r.max_gap_tail.approx, 1.0);
        assert_eq!(r.histogram.iter().map(|b| b.count).sum::<usize>(), 7);
    }

    #[test]
    fn golden_gaps_take_two_values() {
        let b = Base::from_root_index(&IntPolynomial::from_i64s(&[-1, -1, 1]), 0).unwrap();
        let w = enumerate_x(&b, 1, 20.0, DEFAULT_STATE_BUDGET).unwrap();
        let phi = 1.618033988749895;
        let opts = GapOptions {
            count_equal: Some(phi - 1.0),
            ..GapOptions::default()
        };
        let r = gap_report(&w, &opts).unwrap();
        assert_eq!(r.min_gap.vec.as_deref(), Some(&[-1, 1][..]));
        assert_eq!(r.max_gap_tail.vec.as_deref(), Some(&[1, 0][..]));
        let unit = gaps(&w)
            .unwrap()
            .iter()
            .filter(|g| (*g - 1.0).abs() < 1e-12)
            .count();
        assert_eq!(unit + r.equal_count.unwrap(), w.len() - 1);
    }

    #[test]
    fn single_point_rejected() {
        let w = enumerate_x(&Base::integer(2).unwrap(), 1, 0.5, DEFAULT_STATE_BUDGET).unwrap();
        assert!(gap_report(&w, &GapOptions::default()).is_err());
    }
}
