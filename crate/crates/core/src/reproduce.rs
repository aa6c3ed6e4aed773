//! Registry of desk-scale experiments with pass/fail checks.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebraic::{power_base, Base, ClassTag, IntPolynomial, ZqElement, ZqRing};
use crate::error::{precondition, Result, SpectraError};
use crate::expansions::{lazy_constrained, verify_expansion, Eventual, SignPattern};
use crate::spectrum::naive::brute_force_vectors;
use crate::spectrum::{
    enumerate_a, enumerate_x, enumerate_y, liminf_estimate, limsup_estimate, min_positive_bfs, BfsOptions,
    LimsupVerdict,
};
use crate::witness::{accumulation_verdict, build_witness, Verdict, WitnessVerdict};

#[derive(Clone, Debug, Serialize)]
pub struct ReproduceCase {
    pub id: &'static str,
    pub criterion: u8,
    pub base: &'static str,
    pub m: i64,
    pub expected: &'static str,
    pub schedule: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseOutcome {
    pub id: String,
    pub pass: bool,
    pub measured: BTreeMap<String, Value>,
    pub budget_exhausted: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

const CASES: &[ReproduceCase] = &[
    ReproduceCase {
        id: "lemma21-ii",
        criterion: 1,
        base: "3",
        m: 2,
        expected: "search closes with smallest positive value exactly 1",
        schedule: "depth until closure",
    },
    ReproduceCase {
        id: "golden-closure",
        criterion: 2,
        base: "x^2-x-1",
        m: 1,
        expected: "closed state set {phi-1, 1, phi}, smallest value phi-1",
        schedule: "depth until closure",
    },
    ReproduceCase {
        id: "thm14-ii-sqrt2",
        criterion: 3,
        base: "x^2-2",
        m: 1,
        expected: "smallest values follow (sqrt2-1)^k for k = 1..5",
        schedule: "depths 1..12",
    },
    ReproduceCase {
        id: "classify-suite",
        criterion: 4,
        base: "x^3-x-1, x^4-x^3-1, x^2-2, x^3-2, x^8-x^6-1",
        m: 0,
        expected: "Pisot, Pisot, not, not, not; square of the last is Pisot",
        schedule: "-",
    },
    ReproduceCase {
        id: "prop16",
        criterion: 4,
        base: "x^8-x^6-1",
        m: 1,
        expected: "q and q^3 not Pisot, q^2 Pisot; tail gaps decrease",
        schedule: "bounds 4, 8, 16",
    },
    ReproduceCase {
        id: "discreteness-verdicts",
        criterion: 5,
        base: "phi, P1, P2, 2, 3 | sqrt2, cbrt2, sqrt(P2), 1.8",
        m: 1,
        expected: "discrete for the first group, accumulating with a 5x trace drop for the second",
        schedule: "depth 4 against depth 12",
    },
    ReproduceCase {
        id: "witness",
        criterion: 6,
        base: "1.8",
        m: 1,
        expected: "certified traces for p = -1.2, 2i, i",
        schedule: "horizon 60",
    },
    ReproduceCase {
        id: "lazy-contract",
        criterion: 7,
        base: "1.1, 1.3, 1.6, 1.9, 2.5",
        m: 1,
        expected: "sign rules and residual bound, rejection exactly when capacity < 1",
        schedule: "50 cases, horizon 80",
    },
    ReproduceCase {
        id: "tail-gaps",
        criterion: 8,
        base: "x^4-x-1",
        m: 1,
        expected: "tail gap strictly decreasing",
        schedule: "bounds 10, 30, 90",
    },
    ReproduceCase {
        id: "aq-density",
        criterion: 9,
        base: "1.35",
        m: 1,
        expected: "covering radius of A(q) in [-2, 2] smaller at degree 14 than 7",
        schedule: "degrees 7..14",
    },
    ReproduceCase {
        id: "oracle-equivalence",
        criterion: 10,
        base: "20 bases",
        m: 1,
        expected: "X, Y and the positive search match brute force",
        schedule: "degree <= 6",
    },
];

pub fn cases() -> &'static [ReproduceCase] {
    CASES
}

type Measured = BTreeMap<String, Value>;

fn root(coeffs: &[i64]) -> Result<Base> {
    Base::from_root_index(&IntPolynomial::from_i64s(coeffs), 0)
}

/// Runs one registered case; budget exhaustion is reported in the outcome.
pub fn run_case(id: &str, budget: usize) -> Result<CaseOutcome> {
    let f: fn(usize, &mut Measured) -> Result<bool> = match id {
        "lemma21-ii" => integer_base_exact,
        "golden-closure" => golden_closure,
        "thm14-ii-sqrt2" => sqrt2_trace,
        "classify-suite" => classify_suite,
        "prop16" => prop16,
        "discreteness-verdicts" => discreteness_verdicts,
        "witness" => witness_runs,
        "lazy-contract" => lazy_contract,
        "tail-gaps" => tail_gaps,
        "aq-density" => aq_density,
        "oracle-equivalence" => oracle_equivalence,
        _ => return precondition(format!("unknown case {id:?}")),
    };
    let mut measured = Measured::new();
    let (pass, budget_exhausted, error) = match f(budget, &mut measured) {
        Ok(p) => (p, false, None),
        Err(e @ SpectraError::BudgetExhausted(_)) => (false, true, Some(e.to_string())),
        Err(e) => (false, false, Some(e.to_string())),
    };
    Ok(CaseOutcome {
        id: id.to_string(),
        pass,
        measured,
        budget_exhausted,
        error,
    })
}

pub fn run_all(budget: usize) -> Vec<CaseOutcome> {
    CASES
        .iter()
        .map(|c| run_case(c.id, budget).expect("registered case"))
        .collect()
}

fn bfs(base: &Base, m: i64, budget: usize, depth: Option<usize>) -> Result<crate::spectrum::BfsResult> {
    min_positive_bfs(
        base,
        m,
        &BfsOptions {
            max_depth: depth,
            state_budget: budget,
        },
    )
}

fn integer_base_exact(budget: usize, out: &mut Measured) -> Result<bool> {
    let r = bfs(&Base::integer(3)?, 2, budget, None)?;
    let ell = r.ell().and_then(|p| p.vec.clone());
    out.insert("closed".into(), json!(r.closed));
    out.insert("depth".into(), json!(r.depth()));
    out.insert("ell".into(), json!(ell));
    Ok(r.closed && ell == Some(vec![1]))
}

fn golden_closure(budget: usize, out: &mut Measured) -> Result<bool> {
    let r = bfs(&root(&[-1, -1, 1])?, 1, budget, None)?;
    let ell = r.ell().and_then(|p| p.vec.clone());
    let states: BTreeSet<Vec<i64>> = r
        .states
        .iter()
        .flatten()
        .filter_map(|p| p.vec.clone())
        .collect();
    let want: BTreeSet<Vec<i64>> = [vec![-1, 1], vec![1, 0], vec![0, 1]].into_iter().collect();
    out.insert("closed".into(), json!(r.closed));
    out.insert("ell".into(), json!(ell));
    out.insert("states".into(), json!(states));
    Ok(r.closed && ell == Some(vec![-1, 1]) && states == want)
}

/// `(sqrt2 - 1)^k` as `[a, b]` meaning `a + b sqrt2`.
fn pell_powers(n: usize) -> Vec<[i64; 2]> {
    let mut v = [1i64, 0];
    (0..n)
        .map(|_| {
            v = [-v[0] + 2 * v[1], v[0] - v[1]];
            v
        })
        .collect()
}

fn sqrt2_trace(budget: usize, out: &mut Measured) -> Result<bool> {
    let b = root(&[-2, 0, 1])?;
    let depths: Vec<usize> = (1..=12).collect();
    let est = liminf_estimate(&b, 1, &depths, budget)?;
    let rows: Vec<(usize, Vec<i64>, f64)> = est
        .rows
        .iter()
        .map(|r| (r.depth, r.min.vec.clone().unwrap_or_default(), r.min.approx))
        .collect();
    let mut at = Vec::new();
    let mut ok = true;
    let mut last_depth = 0;
    for [a, c] in pell_powers(5) {
        let oracle = a as f64 + c as f64 * std::f64::consts::SQRT_2;
        match rows.iter().find(|(_, v, _)| v == &vec![a, c]) {
            Some((d, _, x)) => {
                ok &= *d >= last_depth && (x - oracle).abs() < 1e-9;
                last_depth = *d;
                at.push(json!({"depth": d, "value": x, "vec": [a, c]}));
            }
            None => {
                ok = false;
                at.push(json!({"missing": [a, c]}));
            }
        }
    }
    out.insert("pell_hits".into(), json!(at));
    Ok(ok)
}

fn classify_suite(_: usize, out: &mut Measured) -> Result<bool> {
    let suite: [(&[i64], bool); 5] = [
        (&[-1, -1, 0, 1], true),
        (&[-1, 0, 0, -1, 1], true),
        (&[-2, 0, 1], false),
        (&[-2, 0, 0, 1], false),
        (&[-1, 0, 0, 0, 0, 0, -1, 0, 1], false),
    ];
    let mut ok = true;
    for (c, want) in suite {
        let b = root(c)?;
        let tag = b.classify(1e-12, 512)?.tag;
        ok &= tag != ClassTag::Inconclusive && tag.is_pisot() == want;
        out.insert(format!("{c:?}"), json!(tag));
    }
    let sq = Base::from_algebraic(power_base(&root(&[-1, 0, 0, 0, 0, 0, -1, 0, 1])?.algebraic(), 2)?)?;
    let tag = sq.classify(1e-12, 512)?.tag;
    out.insert("square of x^8-x^6-1 root".into(), json!(tag));
    Ok(ok && tag.is_pisot())
}

fn prop16(budget: usize, out: &mut Measured) -> Result<bool> {
    let q = root(&[-1, 0, 0, 0, 0, 0, -1, 0, 1])?;
    let mut ok = true;
    for (k, want) in [(1, false), (2, true), (3, false)] {
        let b = Base::from_algebraic(power_base(&q.algebraic(), k)?)?;
        let tag = b.classify(1e-12, 512)?.tag;
        ok &= tag != ClassTag::Inconclusive && tag.is_pisot() == want;
        out.insert(format!("power {k}"), json!(tag));
    }
    let est = limsup_estimate(&q, 1, &[4.0, 8.0, 16.0], 0.5, budget)?;
    let gaps: Vec<f64> = est.rows.iter().map(|r| r.max_gap_tail.approx).collect();
    out.insert("tail gaps".into(), json!(gaps));
    Ok(ok && est.verdict == LimsupVerdict::Decreasing)
}

fn discreteness_verdicts(budget: usize, out: &mut Measured) -> Result<bool> {
    let opts = BfsOptions {
        max_depth: None,
        state_budget: budget,
    };
    let discrete: [(&str, Base, i64); 5] = [
        ("phi", root(&[-1, -1, 1])?, 1),
        ("P1", root(&[-1, -1, 0, 1])?, 1),
        ("P2", root(&[-1, 0, 0, -1, 1])?, 1),
        ("2", Base::integer(2)?, 1),
        ("3", Base::integer(3)?, 2),
    ];
    let mut ok = true;
    for (name, b, m) in discrete {
        let v = accumulation_verdict(&b, m, &opts, 512)?;
        ok &= matches!(v.verdict, Verdict::Discrete(_));
        out.insert(name.into(), json!({"verdict": v.verdict, "closed": v.bfs.closed}));
    }
    let accumulating: [(&str, Base); 4] = [
        ("sqrt2", root(&[-2, 0, 1])?),
        ("cbrt2", root(&[-2, 0, 0, 1])?),
        ("sqrt(P2)", root(&[-1, 0, 0, 0, 0, 0, -1, 0, 1])?),
        ("1.8", Base::numeric("1.8", 1e-9)?),
    ];
    let opts = BfsOptions {
        max_depth: Some(12),
        state_budget: budget,
    };
    for (name, b) in accumulating {
        let v = accumulation_verdict(&b, 1, &opts, 512)?;
        let trace = v.ell_trace();
        let at4 = trace.iter().find(|r| r.0 == 4).map(|r| r.1);
        let last = trace.last().map(|r| r.1);
        let ratio = at4.zip(last).map(|(a, b)| a / b);
        ok &= v.verdict == Verdict::Accumulates && ratio.is_some_and(|r| r >= 5.0);
        out.insert(name.into(), json!({"verdict": v.verdict, "drop": ratio, "trace": trace}));
    }
    Ok(ok)
}

fn witness_runs(_: usize, out: &mut Measured) -> Result<bool> {
    let b = Base::numeric("1.8", 1e-9)?;
    let mut ok = true;
    for (name, p) in [
        ("-1.2", Complex64::new(-1.2, 0.0)),
        ("2i", Complex64::new(0.0, 2.0)),
        ("i", Complex64::new(0.0, 1.0)),
    ] {
        let r = build_witness(&b, 1, p, 60)?;
        let digits = r.digit_vec();
        let residual_ok = r.q_residuals.iter().all(|x| x.pass);
        let trace_ok = match &r.verdict {
            WitnessVerdict::NegativeSteered { certified, .. } => *certified,
            WitnessVerdict::Unbounded { certified, .. } => *certified,
            WitnessVerdict::DistinctModuli { count } => *count >= 20,
            _ => false,
        };
        ok &= digits[0] == -1
            && r.sign_rules_ok == Some(true)
            && r.prefix_structure_ok == Some(true)
            && residual_ok
            && trace_ok;
        out.insert(
            name.into(),
            json!({
                "k": r.choice.as_ref().map(|c| c.k),
                "verdict": r.verdict,
                "residual_at_horizon": r.q_residuals.last().map(|x| x.residual),
            }),
        );
    }
    Ok(ok)
}

/// The fixed grid of `(q, m, P)` used by the lazy contract check.
pub fn lazy_grid() -> Result<Vec<(Base, i64, SignPattern)>> {
    let bases = [("1.1", 1), ("1.3", 1), ("1.6", 1), ("1.9", 1), ("2.5", 2)];
    let patterns = [
        SignPattern::all(),
        SignPattern::residues(2, &[0])?,
        SignPattern::residues(2, &[1])?,
        SignPattern::residues(3, &[0])?,
        SignPattern::residues(3, &[1, 2])?,
        SignPattern::residues(4, &[1])?,
        SignPattern::finite([1])?,
        SignPattern::finite([1, 2])?,
        SignPattern::finite(1..=6)?,
        SignPattern::new([1, 3], 10, Eventual::In)?,
    ];
    let mut out = Vec::new();
    for (q, m) in bases {
        let b = Base::numeric(q, 1e-9)?;
        for p in &patterns {
            out.push((b.clone(), m, p.clone()));
        }
    }
    Ok(out)
}

fn lazy_contract(_: usize, out: &mut Measured) -> Result<bool> {
    let horizon = 80;
    let (mut passed, mut rejected, mut failed) = (0, 0, Vec::new());
    for (i, (b, m, p)) in lazy_grid()?.into_iter().enumerate() {
        let k = b.field();
        let below = k.cmp(&p.capacity(&k, m)?.hi, &k.int(1))? == Ordering::Less;
        let good = match lazy_constrained(&b, m, &p, horizon) {
            Err(SpectraError::CapacityViolated { .. }) => {
                rejected += 1;
                below
            }
            Err(e) => return Err(e),
            Ok(seq) => {
                let digits = seq.take(horizon + 1).unwrap_or_default();
                !below && p.admits(&digits, m) && verify_expansion(&b, &seq, &k.zero(), horizon)?.pass
            }
        };
        if good {
            passed += 1;
        } else {
            failed.push(i);
        }
    }
    out.insert("passed".into(), json!(passed));
    out.insert("rejected".into(), json!(rejected));
    out.insert("failed".into(), json!(failed));
    Ok(failed.is_empty())
}

fn tail_gaps(budget: usize, out: &mut Measured) -> Result<bool> {
    let q = root(&[-1, -1, 0, 0, 1])?;
    let est = limsup_estimate(&q, 1, &[10.0, 30.0, 90.0], 0.5, budget)?;
    let gaps: Vec<f64> = est.rows.iter().map(|r| r.max_gap_tail.approx).collect();
    out.insert("q".into(), json!(q.to_f64()));
    out.insert("tail gaps".into(), json!(gaps));
    Ok(est.verdict == LimsupVerdict::Decreasing)
}

fn aq_density(budget: usize, out: &mut Measured) -> Result<bool> {
    let b = Base::numeric("1.35", 1e-9)?;
    let mut radii = Vec::new();
    for n in 7..=14 {
        let w = enumerate_a(&b, n, 2.0, budget)?;
        if w.budget_exhausted {
            return Err(SpectraError::BudgetExhausted(format!("A(q) degree {n}")));
        }
        radii.push(w.covering_radius.unwrap_or(f64::INFINITY));
    }
    out.insert("covering radii, degrees 7..14".into(), json!(radii));
    Ok(radii[radii.len() - 1] < radii[0])
}

/// Bases for the brute-force comparison; all satisfy `q^7 > 2`.
pub fn oracle_corpus() -> Vec<(&'static str, Vec<i64>, i64)> {
    vec![
        ("phi", vec![-1, -1, 1], 1),
        ("P1", vec![-1, -1, 0, 1], 1),
        ("P2", vec![-1, 0, 0, -1, 1], 1),
        ("sqrt2", vec![-2, 0, 1], 1),
        ("cbrt2", vec![-2, 0, 0, 1], 1),
        ("sqrt3", vec![-3, 0, 1], 1),
        ("tribonacci", vec![-1, -1, -1, 1], 1),
        ("x^4-x-1", vec![-1, -1, 0, 0, 1], 1),
        ("x^3-x^2-1", vec![-1, 0, -1, 1], 1),
        ("1+sqrt2", vec![-1, -2, 1], 2),
        ("2", vec![-2, 1], 1),
        ("3", vec![-3, 1], 2),
        ("sqrt5", vec![-5, 0, 1], 2),
        ("x^2-2x-1", vec![-1, -2, 1], 1),
        ("x^2-3x+1", vec![1, -3, 1], 2),
        ("x^3-3x-1", vec![-1, -3, 0, 1], 1),
        ("x^3-x-2", vec![-2, -1, 0, 1], 1),
        ("sqrt2 m=2", vec![-2, 0, 1], 2),
        ("phi m=2", vec![-1, -1, 1], 2),
        ("x^2-x-3", vec![-3, -1, 1], 2),
    ]
}

/// Smallest positive value in `(0, m / (q - 1)]` over strings of degree at most `d`.
fn smallest_positive(ring: &ZqRing, alphabet: &[i64], d: usize, m: i64) -> Result<Option<Vec<i64>>> {
    let cap = BigRational::from_integer(m.into());
    let mut best: Option<ZqElement> = None;
    for v in brute_force_vectors(ring, alphabet, d, |v| {
        let scaled = ring.sub(&ring.shift_add(v, 0)?, v)?;
        Ok(ring.sign(v)? == Ordering::Greater && ring.cmp_rational(&scaled, &cap)? != Ordering::Greater)
    })? {
        let e = ZqElement::from_coeffs(v);
        if best.as_ref().map_or(Ok(true), |b| ring.cmp(&e, b).map(|o| o.is_lt()))? {
            best = Some(e);
        }
    }
    Ok(best.map(|e| e.coeffs().to_vec()))
}

fn oracle_equivalence(budget: usize, out: &mut Measured) -> Result<bool> {
    let n = 6;
    let bound = 2.0;
    let br = BigRational::from_integer(2.into());
    let mut failed = Vec::new();
    for (name, c, m) in oracle_corpus() {
        let b = root(&c)?;
        let ring = b.zq()?;
        let xs = enumerate_x(&b, m, bound, budget)?;
        let ys = enumerate_y(&b, m, n, bound, budget)?;
        let pos: Vec<i64> = (0..=m).collect();
        let sym: Vec<i64> = (-m..=m).collect();
        let want_x = brute_force_vectors(&ring, &pos, n, |v| Ok(ring.cmp_rational(v, &br)? != Ordering::Greater))?;
        let want_y = brute_force_vectors(&ring, &sym, n, |v| {
            Ok(ring.cmp_rational(v, &br)? != Ordering::Greater
                && ring.cmp_rational(&ring.neg(v), &br)? != Ordering::Greater)
        })?;
        let got_x: BTreeSet<Vec<i64>> = xs.vectors().unwrap_or_default().into_iter().collect();
        let got_y: BTreeSet<Vec<i64>> = ys.vectors().unwrap_or_default().into_iter().collect();
        let bfs_ok = match bfs(&b, m, budget, Some(n)) {
            Ok(r) => r
                .trace
                .iter()
                .map(|row| Ok(smallest_positive(&ring, &sym, row.depth, m)? == row.min.vec))
                .collect::<Result<Vec<bool>>>()?
                .into_iter()
                .all(|x| x),
            // no value fits in (0, m / (q - 1)] when q > m + 1
            Err(SpectraError::Precondition(_)) => smallest_positive(&ring, &sym, n, m)?.is_none(),
            Err(e) => return Err(e),
        };
        let ok = got_x == want_x && got_y == want_y && bfs_ok;
        if !ok {
            failed.push(name);
        }
    }
    out.insert("cases".into(), json!(oracle_corpus().len()));
    out.insert("failed".into(), json!(failed));
    Ok(failed.is_empty())
}
