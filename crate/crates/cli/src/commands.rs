
use num_complex::Complex64;
use serde_json::{json, Value};
use spectra::algebraic::{parse_rational, Base, IntPolynomial};
use spectra::expansions::{greedy_expansion, lazy_constrained, verify_expansion, DigitSequence, SignPattern};
use spectra::reproduce;
use spectra::spectrum::{
    enumerate_a, enumerate_x, enumerate_y, gap_report, liminf_estimate, BfsOptions, GapOptions, SpectrumWindow,
};
use spectra::witness::{accumulation_verdict, build_witness};

use crate::output::{join, Output};
use crate::{BaseArgs, CliError, Command, ExpandMode, KindArg, Settings, WindowArgs};

fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}

pub fn resolve_base(a: &BaseArgs) -> Result<Base, CliError> {
    match (&a.poly, &a.base) {
        (Some(p), None) => {
            let poly = IntPolynomial::parse(p)?;
            Ok(match &a.interval {
                Some(iv) => Base::from_interval_text(&poly, iv)?,
                None => Base::from_root_index(&poly, a.root_index.unwrap_or(0))?,
            })
        }
        (None, Some(text)) => match text.trim().parse::<i64>() {
            Ok(n) => Ok(Base::integer(n)?),
            Err(_) => Ok(Base::numeric(text, a.tolerance)?),
        },
        _ => usage("give exactly one of --poly or --base"),
    }
}

fn window(a: &WindowArgs, s: &Settings) -> Result<SpectrumWindow, CliError> {
    let base = resolve_base(&a.base)?;
    let need_degree = || a.degree.ok_or_else(|| CliError::Usage("--degree is required for this kind".into()));
    Ok(match a.kind {
        KindArg::X => enumerate_x(&base, a.m, a.bound, s.budget)?,
        KindArg::Y => enumerate_y(&base, a.m, need_degree()?, a.bound, s.budget)?,
        KindArg::A => enumerate_a(&base, need_degree()?, a.bound, s.budget)?,
    })
}

fn fmt_vec(v: &Option<Vec<i64>>) -> String {
    v.as_deref().map(join).unwrap_or_default()
}

fn sequence_rows(seq: &DigitSequence, horizon: usize) -> Vec<Vec<String>> {
    let digits = seq.take(horizon + 1).unwrap_or_else(|| seq.prefix.clone());
    digits
        .iter()
        .enumerate()
        .map(|(i, d)| vec![i.to_string(), d.to_string()])
        .collect()
}

pub fn dispatch(cmd: &Command, s: &Settings) -> Result<Output, CliError> {
    match cmd {
        Command::Classify { base, m } => classify(base, *m, s),
        Command::Spectrum(a) => {
            let w = window(a, s)?;
            let rows = w
                .points
                .iter()
                .enumerate()
                .map(|(i, p)| vec![i.to_string(), p.approx.to_string(), fmt_vec(&p.vec), join(&p.digits)])
                .collect();
            Ok(Output {
                exhausted: w.budget_exhausted,
                result: serde_json::to_value(&w)?,
                headers: vec!["index", "value", "vector", "digits"],
                rows,
            })
        }
        Command::Gaps {
            window: a,
            tail_fraction,
            bins,
            count_equal,
        } => {
            let w = window(a, s)?;
            let opts = GapOptions {
                tail_fraction: *tail_fraction,
                bins: *bins,
                count_equal: *count_equal,
            };
            let g = gap_report(&w, &opts)?;
            let rows = g
                .histogram
                .iter()
                .map(|b| vec![b.lo.to_string(), b.hi.to_string(), b.count.to_string()])
                .collect();
            Ok(Output {
                exhausted: w.budget_exhausted,
                result: serde_json::to_value(&g)?,
                headers: vec!["gap_lo", "gap_hi", "count"],
                rows,
            })
        }
        Command::Minpos { base, m, max_depth } => {
            let b = resolve_base(base)?;
            let depths: Vec<usize> = (0..=*max_depth).collect();
            let est = liminf_estimate(&b, *m, &depths, s.budget)?;
            let rows = est
                .bfs
                .trace
                .iter()
                .map(|r| {
                    vec![
                        r.depth.to_string(),
                        r.min.approx.to_string(),
                        fmt_vec(&r.min.vec),
                        join(&r.min.digits),
                        r.total_states.to_string(),
                    ]
                })
                .collect();
            Ok(Output {
                exhausted: est.bfs.budget_exhausted,
                result: serde_json::to_value(&est)?,
                headers: vec!["depth", "min", "vector", "digits", "states"],
                rows,
            })
        }
        Command::Expand {
            base,
            m,
            mode,
            x,
            pattern,
            horizon,
        } => {
            let b = resolve_base(base)?;
            let k = b.field();
            let (seq, target) = match mode {
                ExpandMode::Greedy => {
                    let t = k.rational(parse_rational(x)?);
                    (greedy_expansion(&b, *m, &t, *horizon)?, t)
                }
                ExpandMode::Lazy => {
                    let p = SignPattern::parse(pattern)?;
                    (lazy_constrained(&b, *m, &p, *horizon)?, k.zero())
                }
            };
            let cert = verify_expansion(&b, &seq, &target, *horizon)?;
            Ok(Output {
                exhausted: false,
                rows: sequence_rows(&seq, *horizon),
                result: json!({ "sequence": seq, "certificate": cert }),
                headers: vec!["index", "digit"],
            })
        }
        Command::Witness { base, m, p, horizon } => {
            let b = resolve_base(base)?;
            let p = parse_complex(p)?;
            let r = build_witness(&b, *m, p, *horizon)?;
            let digits = r.digit_vec();
            let rows = r
                .p_trace
                .iter()
                .zip(&r.q_residuals)
                .map(|(t, q)| {
                    vec![
                        t.n.to_string(),
                        digits.get(t.n).map_or(String::new(), i64::to_string),
                        q.residual.to_string(),
                        q.bound.to_string(),
                        t.re.to_string(),
                        t.im.to_string(),
                        t.modulus.to_string(),
                        t.steered_re.to_string(),
                        t.err.to_string(),
                    ]
                })
                .collect();
            Ok(Output {
                exhausted: false,
                result: serde_json::to_value(&r)?,
                headers: vec![
                    "n",
                    "digit",
                    "q_residual",
                    "q_bound",
                    "p_re",
                    "p_im",
                    "p_modulus",
                    "steered_re",
                    "err",
                ],
                rows,
            })
        }
        Command::Aq { base, degrees, bound } => {
            let b = resolve_base(base)?;
            let degrees = degrees
                .split(',')
                .map(|d| d.trim().parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CliError::Usage(format!("--degrees: {e}")))?;
            let mut table = Vec::new();
            let mut exhausted = false;
            for n in degrees {
                let w = enumerate_a(&b, n, *bound, s.budget)?;
                exhausted |= w.budget_exhausted;
                table.push(json!({"degree": n, "points": w.len(), "covering_radius": w.covering_radius}));
            }
            let radii: Vec<f64> = table.iter().filter_map(|r| r["covering_radius"].as_f64()).collect();
            let decreasing = radii.len() == table.len() && radii.windows(2).all(|w| w[1] < w[0]);
            let rows = table
                .iter()
                .map(|r| {
                    ["degree", "points", "covering_radius"]
                        .iter()
                        .map(|k| r[*k].to_string())
                        .collect()
                })
                .collect();
            Ok(Output {
                exhausted,
                result: json!({"base": b.spec(), "bound": bound, "rows": table, "decreasing": decreasing}),
                headers: vec!["degree", "points", "covering_radius"],
                rows,
            })
        }
        Command::Reproduce { case } => reproduce_cmd(case, s),
    }
}

fn classify(base: &BaseArgs, m: Option<i64>, s: &Settings) -> Result<Output, CliError> {
    let b = resolve_base(base)?;
    let class = b.classify(1e-12, s.precision)?;
    let verdict = match m {
        Some(m) => {
            let opts = BfsOptions {
                max_depth: None,
                state_budget: s.budget,
            };
            Some(accumulation_verdict(&b, m, &opts, s.precision)?)
        }
        None => None,
    };
    let rows = class
        .evidence
        .iter()
        .map(|e| {
            vec![
                e.re.to_string(),
                e.im.to_string(),
                e.modulus_lo.to_string(),
                e.modulus_hi.to_string(),
                serde_json::to_value(e.location)
                    .ok()
                    .and_then(|v| v.as_str().map(str::to_string))
                    .unwrap_or_default(),
                e.is_base.to_string(),
            ]
        })
        .collect();
    let inconclusive = class.tag == spectra::algebraic::ClassTag::Inconclusive;
    let out = Output {
        exhausted: false,
        result: json!({ "base": b.spec(), "class": class, "verdict": verdict }),
        headers: vec!["re", "im", "modulus_lo", "modulus_hi", "location", "is_base"],
        rows,
    };
    if inconclusive {
        return Err(spectra::SpectraError::Inconclusive { bits: s.precision }.into());
    }
    Ok(out)
}

fn reproduce_cmd(case: &str, s: &Settings) -> Result<Output, CliError> {
    if case == "list" {
        let cases = reproduce::cases();
        return Ok(Output {
            exhausted: false,
            result: serde_json::to_value(cases)?,
            headers: vec!["id", "criterion", "base", "m", "expected", "schedule"],
            rows: cases
                .iter()
                .map(|c| {
                    vec![
                        c.id.into(),
                        c.criterion.to_string(),
                        c.base.into(),
                        c.m.to_string(),
                        c.expected.into(),
                        c.schedule.into(),
                    ]
                })
                .collect(),
        });
    }
    let outcomes = if case == "all" {
        reproduce::run_all(s.budget)
    } else {
        vec![reproduce::run_case(case, s.budget)?]
    };
    for o in &outcomes {
        eprintln!("{:<20} {}", o.id, if o.pass { "pass" } else { "FAIL" });
    }
    let rows = outcomes
        .iter()
        .map(|o| {
            vec![
                o.id.clone(),
                o.pass.to_string(),
                o.budget_exhausted.to_string(),
                Value::from(serde_json::to_value(&o.measured).unwrap_or_default()).to_string(),
                o.error.clone().unwrap_or_default(),
            ]
        })
        .collect();
    Ok(Output {
        exhausted: false,
        result: serde_json::to_value(&outcomes)?,
        headers: vec!["id", "pass", "budget_exhausted", "measured", "error"],
        rows,
    })
}

fn parse_complex(text: &str) -> Result<Complex64, CliError> {
    let bad = || CliError::Usage(format!("--p expects re,im; got {text:?}"));
    let (re, im) = text.split_once(',').ok_or_else(bad)?;
    let re: f64 = re.trim().parse().map_err(|_| bad())?;
    let im: f64 = im.trim().parse().map_err(|_| bad())?;
    if !(re.is_finite() && im.is_finite()) {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

