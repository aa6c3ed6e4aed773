use std::cmp::Ordering;

use serde::Serialize;

use crate::algebraic::{Base, BaseSpec, ClassTag, NumberClass};
use crate::error::{precondition, Result, SpectraError};
use crate::spectrum::{min_positive_bfs, BfsOptions, BfsResult};

/// Depth used for the accumulation trace when the caller sets none.
pub const DEFAULT_TRACE_DEPTH: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscreteReason {
    Pisot,
    /// `q >= m + 1`.
    LargeBase,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "reason", rename_all = "snake_case")]
pub enum Verdict {
    Discrete(DiscreteReason),
    Accumulates,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerdictReport {
    pub base: BaseSpec,
    pub m: i64,
    pub verdict: Verdict,
    pub class: NumberClass,
    /// Lower bound on `|y|` for nonzero `y` in the spectrum when `q >= m + 1`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub separation_floor: Option<f64>,
    pub bfs: BfsResult,
    pub status: &'static str,
}

impl VerdictReport {
    /// `ell_n` by depth.
    pub fn ell_trace(&self) -> Vec<(usize, f64)> {
        self.bfs.trace.iter().map(|r| (r.depth, r.min.approx)).collect()
    }
}

/// Discreteness verdict for `X^m(q)` and `Y^m(q)`: discrete exactly when `q` is
/// Pisot or `q >= m + 1`. The attached search is a cross-check.
pub fn accumulation_verdict(base: &Base, m: i64, opts: &BfsOptions, max_bits: u32) -> Result<VerdictReport> {
    if m < 1 {
        return precondition("height m must be at least 1");
    }
    let class = base.classify(1e-12, max_bits)?;
    if class.tag == ClassTag::Inconclusive {
        return Err(SpectraError::Inconclusive { bits: class.bits });
    }
    let large = base.cmp_int(m + 1) != Ordering::Less;
    let verdict = if large {
        Verdict::Discrete(DiscreteReason::LargeBase)
    } else if class.tag.is_pisot() {
        Verdict::Discrete(DiscreteReason::Pisot)
    } else {
        Verdict::Accumulates
    };
    let separation_floor = large.then(|| {
        if base.cmp_int(m + 1) == Ordering::Equal {
            1.0
        } else {
            1.0 - m as f64 / (base.to_f64() - 1.0)
        }
    });
    let mut opts = opts.clone();
    if verdict == Verdict::Accumulates && opts.max_depth.is_none() {
        opts.max_depth = Some(DEFAULT_TRACE_DEPTH);
    }
    let bfs = min_positive_bfs(base, m, &opts)?;
    Ok(VerdictReport {
        base: base.spec(),
        m,
        verdict,
        class,
        separation_floor,
        bfs,
        status: "cross-check, not a proof",
    })
}
