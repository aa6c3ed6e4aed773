use std::cmp::Ordering;

use num_complex::Complex64;
use serde::Serialize;

use super::direction::{choose_w, on_unit_circle, Direction, UNIT_TOLERANCE};
use crate::algebraic::{Base, BaseSpec};
use crate::error::{precondition, Result, SpectraError};
use crate::expansions::{
    greedy_expansion, lazy_constrained, periodic_completion, DigitSequence, Eventual, SignPattern, Tail,
};

/// The pattern `P'` of indices with `Re(w p^-i) <= 0`, and the least `k` for
/// which `P' ∪ {1..k}` has capacity at least one.
#[derive(Clone, Debug, Serialize)]
pub struct PatternChoice {
    /// `P' ∪ {1, ..., k}`.
    pub pattern: SignPattern,
    pub p_prime: SignPattern,
    pub k: usize,
    pub capacity_lo: f64,
    pub capacity_hi: f64,
    /// `Re(w p^-k) > 0`.
    pub k_term_positive: bool,
}

fn check_height_window(base: &Base, m: i64) -> Result<()> {
    if m < 1 {
        return precondition("height m must be at least 1");
    }
    if base.cmp_int(m) != Ordering::Greater || base.cmp_int(m + 1) != Ordering::Less {
        return precondition("witness construction needs m < q < m + 1");
    }
    Ok(())
}

/// Indices past the horizon materialized so the lazy corridor stays wide enough.
fn corridor_margin(q: f64, m: i64) -> usize {
    let slack = 1.0 - (q - 1.0) / m as f64;
    ((1.0 / slack).ln() / q.ln()).ceil().clamp(0.0, 1e4) as usize + 8
}

fn steering(w: Complex64, p: Complex64, i: usize) -> f64 {
    let u = p / p.norm();
    (w * Complex64::from_polar(1.0, -(i as f64) * u.arg())).re
}

pub fn build_p_and_k(base: &Base, m: i64, p: Complex64, dir: &Direction, horizon: usize) -> Result<PatternChoice> {
    check_height_window(base, m)?;
    let w = dir.w();
    let p_prime = match dir.period {
        Some(n) => {
            let bits = (1..=n).map(|i| steering(w, p, i) <= 0.0).collect();
            SignPattern::new([], 1, Eventual::Periodic(bits))?
        }
        None => {
            let top = horizon + corridor_margin(base.to_f64(), m) + 1;
            let members = (1..top).filter(|&i| steering(w, p, i) <= 0.0);
            SignPattern::new(members, top, Eventual::Unknown)?
        }
    };
    let field = base.field();
    let one = field.int(1);
    for k in 0..=horizon {
        let pattern = p_prime.with_prefix(k);
        let cap = pattern.capacity(&field, m)?;
        if field.cmp(&cap.lo, &one)? != Ordering::Less {
            let k_term_positive = if k == 0 { w.re > 0.0 } else { steering(w, p, k) > 0.0 };
            return Ok(PatternChoice {
                capacity_lo: field.approx(&cap.lo),
                capacity_hi: field.approx(&cap.hi),
                pattern,
                p_prime,
                k,
                k_term_positive,
            });
        }
        if field.cmp(&cap.hi, &one)? != Ordering::Less {
            return Err(SpectraError::HorizonTooShort {
                horizon,
                what: format!("capacity at k = {k} straddles 1"),
            });
        }
    }
    Err(SpectraError::HorizonTooShort {
        horizon,
        what: "no k up to the horizon reaches capacity 1".into(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessStep {
    /// `p` real and greater than one.
    RealAboveOne,
    /// `p = 1`.
    One,
    /// `|p| > 1`, `p` not a positive real.
    Outside,
    /// `|p| = 1`, `p != 1`.
    UnitCircle,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceRow {
    pub n: usize,
    pub re: f64,
    pub im: f64,
    pub modulus: f64,
    /// `Re(w S_n)`.
    pub steered_re: f64,
    /// Rounding bound on every component above.
    pub err: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualRow {
    pub n: usize,
    /// `|sum_(i<=n) s_i q^-i|`.
    pub residual: f64,
    /// `m q^-n / (q - 1)`.
    pub bound: f64,
    /// `residual <= bound`, decided exactly.
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Replication {
    /// Steered value of one block.
    pub block_value: f64,
    pub block_len: usize,
    pub first_epsilon: f64,
    /// Start index of every placed block.
    pub shifts: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessVerdict {
    /// The series at `p` stays away from zero.
    NonzeroAtP { value: f64, certified: bool },
    /// Digit sums grow without bound.
    DivergentSum { per_period: Option<i64>, partial_sum: i64, certified: bool },
    /// `Re(w S_N) < 0` for every `N >= k` up to the horizon.
    NegativeSteered { max_steered: f64, certified: bool },
    /// Replicated blocks push `Re(w S_N)` down by at least half a block each.
    Unbounded { blocks: usize, last_steered: f64, certified: bool },
    /// Count of separated values of `|S_N|`.
    DistinctModuli { count: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessReport {
    pub base: BaseSpec,
    pub m: i64,
    pub p_re: f64,
    pub p_im: f64,
    pub horizon: usize,
    pub step: WitnessStep,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direction: Option<Direction>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub choice: Option<PatternChoice>,
    /// Membership of `1..=horizon` in `P'`.
    pub p_prime_trace: Vec<Option<bool>>,
    /// Output of the lazy step before any replication.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lazy_digits: Option<DigitSequence>,
    pub digits: DigitSequence,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sign_rules_ok: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prefix_structure_ok: Option<bool>,
    pub q_residuals: Vec<ResidualRow>,
    pub p_trace: Vec<TraceRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replication: Option<Replication>,
    pub verdict: WitnessVerdict,
    pub status: &'static str,
}

impl WitnessReport {
    pub fn digit_vec(&self) -> Vec<i64> {
        self.digits.take(self.horizon + 1).unwrap_or_else(|| self.digits.prefix.clone())
    }
}

/// Partial sums `S_n = sum_(i<=n) s_i w p^-i` with running rounding bounds.
pub fn p_trace(digits: &[i64], w: Complex64, p: Complex64) -> Vec<TraceRow> {
    let inv = p.inv();
    let mut pow = w;
    let mut s = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut out = Vec::with_capacity(digits.len());
    for (i, &d) in digits.iter().enumerate() {
        if i > 0 {
            pow *= inv;
        }
        let term = pow * d as f64;
        s += term;
        err += term.norm() * 16.0 * (i as f64 + 2.0) * f64::EPSILON + s.norm() * 2.0 * f64::EPSILON;
        out.push(TraceRow {
            n: i,
            re: s.re,
            im: s.im,
            modulus: s.norm(),
            steered_re: s.re,
            err,
        });
    }
    out
}

/// Exact residual trace of `sum_(i<=n) s_i q^-i` against zero.
fn q_residuals(base: &Base, digits: &[i64], m: i64) -> Result<Vec<ResidualRow>> {
    let k = base.field();
    let q = base.to_f64();
    let mut acc = k.zero();
    let mut out = Vec::with_capacity(digits.len());
    for (n, &s) in digits.iter().enumerate() {
        acc = k.shift_add(&acc, s);
        let abs = if k.sign(&acc)? == Ordering::Less { k.neg(&acc) } else { acc.clone() };
        let lhs = k.sub(&k.mul_q(&abs), &abs);
        let scale = q.powi(-(n as i32));
        out.push(ResidualRow {
            n,
            residual: k.approx(&abs) * scale,
            bound: m as f64 * scale / (q - 1.0),
            pass: k.cmp(&lhs, &k.int(m))? != Ordering::Greater,
        });
    }
    Ok(out)
}

fn prefix_structure_holds(digits: &[i64], k: usize, m: i64) -> bool {
    k == 0
        || (digits.len() > k
            && digits[1..k].iter().all(|&s| s == m)
            && (1..=m).contains(&digits[k]))
}

fn distinct_moduli(trace: &[TraceRow]) -> usize {
    let mut v: Vec<(f64, f64)> = trace.iter().map(|r| (r.modulus, r.err)).collect();
    v.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut count = 0;
    let mut last: Option<(f64, f64)> = None;
    for (x, e) in v {
        if last.is_none_or(|(y, f)| x - y > 2.0 * (e + f)) {
            count += 1;
            last = Some((x, e));
        }
    }
    count
}

/// Digits `(-1, c_1, c_2, ...)` from the greedy expansion of one.
fn greedy_of_one(base: &Base, m: i64, horizon: usize) -> Result<DigitSequence> {
    let g = greedy_expansion(base, m, &base.field().int(1), horizon)?;
    let mut prefix = g.prefix;
    prefix[0] = -1;
    DigitSequence::new(prefix, g.tail, m)
}

fn steer(trace: &mut [TraceRow], w: Complex64) {
    for r in trace {
        r.steered_re = (w * Complex64::new(r.re, r.im)).re;
    }
}

/// Builds a digit sequence with `sum s_i q^-i = 0` whose partial sums at `p`
/// avoid zero, following the case split on `p`.
pub fn build_witness(base: &Base, m: i64, p: Complex64, horizon: usize) -> Result<WitnessReport> {
    check_height_window(base, m)?;
    let q = base.to_f64();
    if p.im == 0.0 && (p.re - q).abs() <= UNIT_TOLERANCE * q {
        return precondition("p must differ from q");
    }
    let mut report = WitnessReport {
        base: base.spec(),
        m,
        p_re: p.re,
        p_im: p.im,
        horizon,
        step: WitnessStep::Outside,
        direction: None,
        choice: None,
        p_prime_trace: vec![],
        lazy_digits: None,
        digits: DigitSequence::new(vec![-1], Tail::Truncated, m)?,
        sign_rules_ok: None,
        prefix_structure_ok: None,
        q_residuals: vec![],
        p_trace: vec![],
        replication: None,
        verdict: WitnessVerdict::DistinctModuli { count: 0 },
        status: "cross-check, not a proof",
    };
    if (p - 1.0).norm() <= UNIT_TOLERANCE {
        step_one(base, m, horizon, &mut report)?;
    } else if p.im == 0.0 && p.re > 1.0 {
        step_real(base, m, p.re, horizon, &mut report)?;
    } else if on_unit_circle(p) {
        steered(base, m, p, horizon, WitnessStep::UnitCircle, &mut report)?;
    } else if p.norm() > 1.0 {
        steered(base, m, p, horizon, WitnessStep::Outside, &mut report)?;
    } else {
        return precondition("p must satisfy |p| >= 1");
    }
    Ok(report)
}

fn step_real(base: &Base, m: i64, p: f64, horizon: usize, r: &mut WitnessReport) -> Result<()> {
    r.step = WitnessStep::RealAboveOne;
    let seq = greedy_of_one(base, m, horizon)?;
    let digits = seq.take(horizon + 1).expect("greedy emits every digit");
    r.q_residuals = q_residuals(base, &digits, m)?;
    r.p_trace = p_trace(&digits, Complex64::new(1.0, 0.0), Complex64::new(p, 0.0));
    let last = r.p_trace.last().expect("nonempty");
    // sum_(i>=1) s_i p^-i is decreasing in p and equals 1 at q
    let tail = if seq.finitely_supported() == Some(true) {
        0.0
    } else {
        m as f64 * p.powi(-(horizon as i32)) / (p - 1.0)
    };
    let certified = if p < base.to_f64() {
        last.re > last.err
    } else {
        last.re + tail < -last.err
    };
    r.verdict = WitnessVerdict::NonzeroAtP {
        value: last.re,
        certified,
    };
    r.digits = seq;
    Ok(())
}

fn step_one(base: &Base, m: i64, horizon: usize, r: &mut WitnessReport) -> Result<()> {
    r.step = WitnessStep::One;
    let seq = greedy_of_one(base, m, horizon)?;
    let (seq, per_period) = if seq.finitely_supported() == Some(true) {
        let c = periodic_completion(base, &seq.prefix, m)?;
        (c.sequence, Some(c.digit_sum))
    } else {
        (seq, None)
    };
    let digits = seq.take(horizon + 1).expect("digits up to the horizon");
    r.q_residuals = q_residuals(base, &digits, m)?;
    r.p_trace = p_trace(&digits, Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
    let partial_sum: i64 = digits.iter().sum();
    let certified = match per_period {
        Some(s) => s > 0,
        None => digits[1..].iter().all(|&s| s >= 0) && partial_sum > 0,
    };
    r.verdict = WitnessVerdict::DivergentSum {
        per_period,
        partial_sum,
        certified,
    };
    r.digits = seq;
    Ok(())
}

fn steered(base: &Base, m: i64, p: Complex64, horizon: usize, step: WitnessStep, r: &mut WitnessReport) -> Result<()> {
    r.step = step;
    let dir = choose_w(p, m, horizon)?;
    let w = dir.w();
    let choice = build_p_and_k(base, m, p, &dir, horizon)?;
    let lazy = lazy_constrained(base, m, &choice.pattern, horizon)?;
    let lazy_vec = lazy.take(horizon + 1).unwrap_or_else(|| lazy.prefix.clone());
    r.p_prime_trace = (1..=horizon).map(|i| choice.p_prime.member(i)).collect();
    r.sign_rules_ok = Some(choice.pattern.admits(&lazy_vec, m));
    r.prefix_structure_ok = Some(prefix_structure_holds(&lazy_vec, choice.k, m));
    let k = choice.k;
    let finite_block = (step == WitnessStep::UnitCircle && lazy.finitely_supported() == Some(true))
        .then(|| lazy.prefix.clone());
    let digits = match &finite_block {
        Some(block) => {
            let (digits, rep) = replicate(block, w, p, horizon);
            r.replication = Some(rep);
            digits
        }
        None => lazy_vec.clone(),
    };
    r.q_residuals = q_residuals(base, &digits, m)?;
    let mut trace = p_trace(&digits, Complex64::new(1.0, 0.0), p);
    steer(&mut trace, w);
    let negative = trace[k.min(trace.len() - 1)..]
        .iter()
        .all(|t| t.steered_re < -t.err);
    let max_steered = trace[k.min(trace.len() - 1)..]
        .iter()
        .map(|t| t.steered_re)
        .fold(f64::NEG_INFINITY, f64::max);
    r.verdict = match (step, &r.replication) {
        (WitnessStep::Outside, _) => WitnessVerdict::NegativeSteered {
            max_steered,
            certified: negative,
        },
        (_, Some(rep)) => {
            let half = rep.block_value / 2.0;
            let certified = rep.shifts.iter().enumerate().all(|(j, &s)| {
                let end = (s + rep.block_len - 1).min(trace.len() - 1);
                trace[end].steered_re <= (j + 1) as f64 * half + trace[end].err
            });
            WitnessVerdict::Unbounded {
                blocks: rep.shifts.len(),
                last_steered: trace.last().map_or(0.0, |t| t.steered_re),
                certified: certified && negative,
            }
        }
        _ => WitnessVerdict::DistinctModuli {
            count: distinct_moduli(&trace),
        },
    };
    r.p_trace = trace;
    r.digits = match finite_block {
        Some(_) => DigitSequence::new(digits, Tail::Truncated, m)?,
        None => lazy.clone(),
    };
    r.lazy_digits = Some(lazy);
    r.direction = Some(dir);
    r.choice = Some(choice);
    Ok(())
}

/// Copies of a zero-valued block at shifts `r_j` with `p^-r_j` near 1; the
/// closeness threshold starts at `|c| / (2 sum |s_i|)` and halves per block.
fn replicate(block: &[i64], w: Complex64, p: Complex64, horizon: usize) -> (Vec<i64>, Replication) {
    let n = block.len() - 1;
    let c: f64 = p_trace(block, w, p).last().map_or(0.0, |t| t.re);
    let mass: i64 = block.iter().map(|s| s.abs()).sum();
    let first_epsilon = c.abs() / (2.0 * mass as f64);
    let mut digits = vec![0; horizon + 1];
    let mut shifts = vec![0];
    let mut eps = first_epsilon;
    let mut last = 0;
    loop {
        eps /= 2.0;
        let start = last + n + 1;
        let found = (start..=horizon).find(|&r| (p.powi(-(r as i32)) - 1.0).norm() < eps);
        match found {
            Some(r) => {
                shifts.push(r);
                last = r;
            }
            None => break,
        }
    }
    for &s in &shifts {
        for (i, &d) in block.iter().enumerate() {
            if s + i <= horizon {
                digits[s + i] = d;
            }
        }
    }
    (
        digits,
        Replication {
            block_value: c,
            block_len: block.len(),
            first_epsilon,
            shifts,
        },
    )
}
