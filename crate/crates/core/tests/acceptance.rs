//! The ten acceptance criteria, one pass/fail line each.

mod support;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spectra::algebraic::{power_base, Base, IntPolynomial};
use spectra::expansions::{lazy_constrained, Eventual, SignPattern};
use spectra::spectrum::{
    enumerate_a, enumerate_x, enumerate_y, limsup_estimate, min_positive_bfs, BfsOptions, LimsupVerdict,
    DEFAULT_STATE_BUDGET,
};
use spectra::witness::{accumulation_verdict, build_witness, Verdict, WitnessVerdict};
use spectra::SpectraError;
use support::*;

type Check = Result<String, String>;

fn base(coeffs: &[i64]) -> Base {
    Base::from_root_index(&IntPolynomial::from_i64s(coeffs), 0).unwrap()
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn bfs_until_closed(b: &Base, m: i64) -> spectra::spectrum::BfsResult {
    min_positive_bfs(b, m, &BfsOptions::default()).unwrap()
}

fn criterion_1() -> Check {
    let r = bfs_until_closed(&Base::integer(3).unwrap(), 2);
    let ell = r.ell().and_then(|p| p.vec.clone());
    ensure(r.closed, "search did not close")?;
    ensure(ell == Some(vec![1]), format!("smallest value {ell:?}, expected exactly 1"))?;
    Ok(format!("closed at depth {}, smallest value exactly 1", r.depth()))
}

fn criterion_2() -> Check {
    let r = bfs_until_closed(&base(&[-1, -1, 1]), 1);
    // hand expansion: phi - 1 = [-1, 1], 1 = [1, 0], phi = [0, 1]
    let want: BTreeSet<Vec<i64>> = [vec![-1, 1], vec![1, 0], vec![0, 1]].into();
    let got: BTreeSet<Vec<i64>> = r.states.iter().flatten().filter_map(|p| p.vec.clone()).collect();
    ensure(r.closed, "search did not close")?;
    ensure(got == want, format!("state set {got:?}"))?;
    let ell = r.ell().and_then(|p| p.vec.clone());
    ensure(ell == Some(vec![-1, 1]), format!("smallest value {ell:?}"))?;
    Ok("states {phi-1, 1, phi}, smallest value phi-1".into())
}

fn criterion_3() -> Check {
    let r = min_positive_bfs(
        &base(&[-2, 0, 1]),
        1,
        &BfsOptions {
            max_depth: Some(12),
            state_budget: DEFAULT_STATE_BUDGET,
        },
    )
    .unwrap();
    let sqrt2 = std::f64::consts::SQRT_2;
    // (sqrt2 - 1)^k = a + b sqrt2 by integer recurrence
    let mut pell = vec![];
    let (mut a, mut b) = (1i64, 0i64);
    for _ in 0..5 {
        (a, b) = (-a + 2 * b, a - b);
        pell.push(vec![a, b]);
    }
    let mut last = 0;
    let mut depths = vec![];
    for v in &pell {
        let row = r
            .trace
            .iter()
            .find(|row| row.min.vec.as_ref() == Some(v))
            .ok_or_else(|| format!("{v:?} never the minimum"))?;
        let oracle = v[0] as f64 + v[1] as f64 * sqrt2;
        ensure((row.min.approx - oracle).abs() < 1e-9, format!("{v:?} approx {}", row.min.approx))?;
        ensure(row.depth >= last, "depths decrease")?;
        last = row.depth;
        depths.push(row.depth);
    }
    Ok(format!("Pell values at depths {depths:?}"))
}

fn criterion_4() -> Check {
    let suite: [&[i64]; 5] = [
        &[-1, -1, 0, 1],
        &[-1, 0, 0, -1, 1],
        &[-2, 0, 1],
        &[-2, 0, 0, 1],
        &[-1, 0, 0, 0, 0, 0, -1, 0, 1],
    ];
    let mut slowest = Duration::ZERO;
    let mut tags = vec![];
    for c in suite {
        let t = Instant::now();
        let b = base(c);
        let approx = real_root(c, 1.0, 2.0);
        ensure((b.to_f64() - approx).abs() < 1e-9, format!("{c:?} root {}", b.to_f64()))?;
        let tag = b.classify(1e-12, 512).map_err(|e| e.to_string())?.tag;
        let want = is_pisot(c, b.to_f64());
        ensure(tag.is_pisot() == want, format!("{c:?}: {tag:?}, oracle Pisot = {want}"))?;
        slowest = slowest.max(t.elapsed());
        tags.push(want);
    }
    ensure(tags == [true, true, false, false, false], "oracle disagrees with the expected classes")?;
    let t = Instant::now();
    let q = base(&[-1, 0, 0, 0, 0, 0, -1, 0, 1]);
    let sq = Base::from_algebraic(power_base(&q.algebraic(), 2).unwrap()).unwrap();
    ensure((sq.to_f64() - q.to_f64().powi(2)).abs() < 1e-12, "square value")?;
    // q^2 is a root of y^4 - y^3 - 1
    ensure(is_pisot(&[-1, 0, 0, -1, 1], sq.to_f64()), "oracle: q^2 not Pisot")?;
    ensure(sq.is_pisot(512).unwrap(), "power_base(q, 2) not classified Pisot")?;
    slowest = slowest.max(t.elapsed());
    ensure(slowest < Duration::from_secs(1), format!("slowest classification {slowest:?}"))?;
    Ok(format!("five classes and the square match, slowest {slowest:?}"))
}

fn criterion_5() -> Check {
    let opts = BfsOptions::default();
    let discrete: [(&str, Base, i64); 5] = [
        ("phi", base(&[-1, -1, 1]), 1),
        ("P1", base(&[-1, -1, 0, 1]), 1),
        ("P2", base(&[-1, 0, 0, -1, 1]), 1),
        ("2", Base::integer(2).unwrap(), 1),
        ("3", Base::integer(3).unwrap(), 2),
    ];
    for (name, b, m) in discrete {
        let v = accumulation_verdict(&b, m, &opts, 512).map_err(|e| e.to_string())?;
        ensure(matches!(v.verdict, Verdict::Discrete(_)), format!("{name}: {:?}", v.verdict))?;
    }
    let accumulating: [(&str, Base, Vec<i64>); 4] = [
        ("sqrt2", base(&[-2, 0, 1]), vec![-2, 0, 1]),
        ("cbrt2", base(&[-2, 0, 0, 1]), vec![-2, 0, 0, 1]),
        ("sqrt(P2)", base(&[-1, 0, 0, 0, 0, 0, -1, 0, 1]), vec![-1, 0, 0, 0, 0, 0, -1, 0, 1]),
        ("1.8", Base::numeric("1.8", 1e-9).unwrap(), vec![]),
    ];
    let mut drops = vec![];
    for (name, b, poly) in accumulating {
        let q = b.to_f64();
        ensure(1.0 < q && q < 2.0, format!("{name}: need 1 < q < 2"))?;
        if !poly.is_empty() {
            ensure(!is_pisot(&poly, q), format!("{name}: oracle says Pisot"))?;
        }
        let v = accumulation_verdict(&b, 1, &opts, 512).map_err(|e| e.to_string())?;
        ensure(v.verdict == Verdict::Accumulates, format!("{name}: {:?}", v.verdict))?;
        let trace = v.ell_trace();
        let at4 = trace.iter().find(|r| r.0 == 4).ok_or("no depth 4")?.1;
        let (depth, last) = *trace.last().unwrap();
        // depth-4 minimum against brute force over strings of degree <= 4
        let brute = brute_min_f64(q, 4);
        ensure((at4 - brute).abs() < 1e-9, format!("{name}: depth 4 {at4} vs brute {brute}"))?;
        ensure(at4 / last >= 5.0, format!("{name}: drop {} by depth {depth}", at4 / last))?;
        drops.push(format!("{name} x{:.1}", at4 / last));
    }
    Ok(format!("drops from depth 4: {}", drops.join(", ")))
}

/// Smallest positive value in `(0, 1 / (q - 1)]` over `{-1, 0, 1}` strings of degree <= n.
fn brute_min_f64(q: f64, n: usize) -> f64 {
    strings(&[-1, 0, 1], n + 1)
        .iter()
        .map(|s| s.iter().rev().fold(0.0, |acc, &c| acc * q + c as f64))
        .filter(|&x| x > 1e-12 && x * (q - 1.0) <= 1.0 + 1e-12)
        .fold(f64::INFINITY, f64::min)
}

fn criterion_6() -> Check {
    let b = Base::numeric("1.8", 1e-9).unwrap();
    let q = rat(9, 5);
    let mut notes = vec![];
    for (name, p) in [
        ("-1.2", Complex64::new(-1.2, 0.0)),
        ("2i", Complex64::new(0.0, 2.0)),
        ("i", Complex64::new(0.0, 1.0)),
    ] {
        let r = build_witness(&b, 1, p, 60).map_err(|e| e.to_string())?;
        let digits = r.digit_vec();
        ensure(digits.len() == 61 && digits[0] == -1, format!("{name}: digits {:?}", &digits[..3]))?;
        let dir = r.direction.as_ref().ok_or("no direction")?;
        let w = Complex64::new(dir.w_re, dir.w_im);
        ensure(w.re > 0.0 && (w.norm() - 1.0).abs() < 1e-12, format!("{name}: w = {w}"))?;
        let k = r.choice.as_ref().ok_or("no k")?.k;
        // sign rules of the lazy digits against P' U {1..k}, recomputed here
        let lazy = r.lazy_digits.as_ref().unwrap();
        let lazy = lazy.take(61).unwrap_or_else(|| lazy.prefix.clone());
        for (i, &s) in lazy.iter().enumerate().skip(1) {
            let in_p = i <= k || (w * p.powi(-(i as i32))).re <= 0.0;
            let ok = if in_p { (0..=1).contains(&s) } else { (-1..=0).contains(&s) };
            ensure(ok, format!("{name}: digit {s} at {i}, in P = {in_p}"))?;
        }
        if k > 0 {
            ensure(lazy[1..k].iter().all(|&s| s == 1) && lazy[k] >= 1, format!("{name}: prefix structure"))?;
        }
        for n in 0..=60 {
            let (res, ok) = exact_residual(&digits[..=n], &q, 1);
            ensure(ok, format!("{name}: residual at {n} is {res}"))?;
        }
        let sums: Vec<Complex64> = (0..=60)
            .map(|n| (0..=n).map(|i| w * p.powi(-(i as i32)) * digits[i] as f64).sum())
            .collect();
        match &r.verdict {
            WitnessVerdict::NegativeSteered { certified, .. } => {
                ensure(*certified, format!("{name}: not certified"))?;
                let worst = sums[k..].iter().map(|s| s.re).fold(f64::NEG_INFINITY, f64::max);
                ensure(worst < -1e-9, format!("{name}: max Re(w S_N) = {worst}"))?;
                notes.push(format!("{name}: k={k}, max Re(wS) {worst:.3}"));
            }
            WitnessVerdict::DistinctModuli { .. } | WitnessVerdict::Unbounded { .. } => {
                let mut moduli: Vec<f64> = sums.iter().map(|s| s.norm()).collect();
                moduli.sort_by(f64::total_cmp);
                moduli.dedup_by(|a, b| (*a - *b).abs() <= 1e-9);
                let diverging = matches!(r.verdict, WitnessVerdict::Unbounded { certified: true, .. });
                ensure(moduli.len() >= 20 || diverging, format!("{name}: {} distinct moduli", moduli.len()))?;
                notes.push(format!("{name}: {} distinct |S_N|", moduli.len()));
            }
            v => return Err(format!("{name}: unexpected verdict {v:?}")),
        }
    }
    Ok(notes.join("; "))
}

fn criterion_7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut accepted, mut rejected) = (0, 0);
    for case in 0..50 {
        let m: i64 = rng.gen_range(1..=3);
        // q = num / 100 strictly between 1 and m + 1
        let num: i64 = rng.gen_range(101..(m + 1) * 100);
        let q = rat(num, 100);
        let threshold: usize = rng.gen_range(1..=8);
        let explicit: Vec<usize> = (1..threshold).filter(|_| rng.gen_bool(0.5)).collect();
        let len: usize = rng.gen_range(1..=5);
        let mut bits: Vec<bool> = (0..len).map(|_| rng.gen_bool(0.4)).collect();
        if rng.gen_bool(0.2) {
            bits.iter_mut().for_each(|b| *b = false);
        }
        let cap = if bits.iter().any(|&b| b) || !explicit.is_empty() {
            exact_capacity(&q, m, &explicit, threshold, &bits)
        } else {
            num_rational::BigRational::zero()
        };
        let rejects = cap < rat(1, 1);
        let pattern = SignPattern::new(explicit.clone(), threshold, Eventual::Periodic(bits.clone())).unwrap();
        let b = Base::numeric(&format!("{}", num as f64 / 100.0), 1e-9).unwrap();
        match lazy_constrained(&b, m, &pattern, 80) {
            Err(SpectraError::CapacityViolated { .. }) => {
                ensure(rejects, format!("case {case}: rejected with capacity {cap}"))?;
                rejected += 1;
            }
            Err(e) => return Err(format!("case {case}: {e}")),
            Ok(seq) => {
                ensure(!rejects, format!("case {case}: accepted with capacity {cap}"))?;
                let d = seq.take(81).unwrap();
                ensure(d[0] == -1, "s_0")?;
                for (i, &s) in d.iter().enumerate().skip(1) {
                    let in_p = if i < threshold {
                        explicit.contains(&i)
                    } else {
                        bits[(i - threshold) % len]
                    };
                    let ok = if in_p { (0..=m).contains(&s) } else { (-m..=0).contains(&s) };
                    ensure(ok, format!("case {case}: digit {s} at {i}"))?;
                }
                let (res, ok) = exact_residual(&d, &q, m);
                ensure(ok, format!("case {case}: residual {res} at horizon 80"))?;
                accepted += 1;
            }
        }
    }
    Ok(format!("{accepted} expanded, {rejected} rejected"))
}

fn criterion_8() -> Check {
    let poly = [-1, -1, 0, 0, 1];
    let q = real_root(&poly, 1.0, 2.0);
    ensure((q - 1.22).abs() < 0.005, format!("root {q}"))?;
    let b = base(&poly);
    let bounds = [10.0, 30.0, 90.0];
    let est = limsup_estimate(&b, 1, &bounds, 0.5, DEFAULT_STATE_BUDGET).map_err(|e| e.to_string())?;
    let mut oracle = vec![];
    for (row, &bound) in est.rows.iter().zip(&bounds) {
        let g = tail_gap(&x_values(q, 1, bound), bound, 0.5);
        ensure((g - row.max_gap_tail.approx).abs() < 1e-9, format!("B={bound}: {g} vs {}", row.max_gap_tail.approx))?;
        oracle.push(g);
    }
    ensure(oracle.windows(2).all(|w| w[1] < w[0]), format!("gaps {oracle:?}"))?;
    ensure(est.verdict == LimsupVerdict::Decreasing, "library verdict")?;
    Ok(format!("tail gaps {oracle:.4?}"))
}

fn criterion_9() -> Check {
    let b = Base::numeric("1.35", 1e-9).unwrap();
    let mut radii = vec![];
    for n in [7, 14] {
        let w = enumerate_a(&b, n, 2.0, DEFAULT_STATE_BUDGET).map_err(|e| e.to_string())?;
        let lib = w.covering_radius.ok_or("empty window")?;
        let oracle = a_covering_radius(1.35, n, 2.0);
        ensure((lib - oracle).abs() < 1e-9, format!("degree {n}: {lib} vs {oracle}"))?;
        radii.push(oracle);
    }
    ensure(radii[1] < radii[0], format!("radii {radii:?}"))?;
    Ok(format!("covering radius {:.4} -> {:.4}", radii[0], radii[1]))
}

fn criterion_10() -> Check {
    let corpus: [(&[i64], i64); 20] = [
        (&[-1, -1, 1], 1),
        (&[-1, -1, 0, 1], 1),
        (&[-1, 0, 0, -1, 1], 1),
        (&[-2, 0, 1], 1),
        (&[-2, 0, 0, 1], 1),
        (&[-3, 0, 1], 1),
        (&[-1, -1, -1, 1], 1),
        (&[-1, -1, 0, 0, 1], 1),
        (&[-1, 0, -1, 1], 1),
        (&[-1, -2, 1], 2),
        (&[-2, 1], 1),
        (&[-3, 1], 2),
        (&[-5, 0, 1], 2),
        (&[-1, -2, 1], 1),
        (&[1, -3, 1], 2),
        (&[-1, -3, 0, 1], 1),
        (&[-2, -1, 0, 1], 1),
        (&[-2, 0, 1], 2),
        (&[-1, -1, 1], 2),
        (&[-3, -1, 1], 2),
    ];
    let n = 6;
    for (c, m) in corpus {
        let b = base(c);
        let q = b.to_f64();
        let oracle = brute_windows(c, q, m, n, 2);
        let x: BTreeSet<Vec<i64>> = enumerate_x(&b, m, 2.0, DEFAULT_STATE_BUDGET)
            .unwrap()
            .vectors()
            .unwrap()
            .into_iter()
            .collect();
        // every X value in [0, 2] has degree <= 6 because q^7 > 2
        ensure(q.powi(7) > 2.0, "corpus base too small")?;
        ensure(x == oracle.x, format!("{c:?} m={m}: X differs"))?;
        let y: BTreeSet<Vec<i64>> = enumerate_y(&b, m, n, 2.0, DEFAULT_STATE_BUDGET)
            .unwrap()
            .vectors()
            .unwrap()
            .into_iter()
            .collect();
        ensure(y == oracle.y, format!("{c:?} m={m}: Y differs"))?;
        let opts = BfsOptions {
            max_depth: Some(n),
            state_budget: DEFAULT_STATE_BUDGET,
        };
        match min_positive_bfs(&b, m, &opts) {
            Ok(r) => {
                for row in &r.trace {
                    let want = brute_min_positive(c, q, m, row.depth);
                    ensure(row.min.vec == want, format!("{c:?} m={m} depth {}: {:?} vs {want:?}", row.depth, row.min.vec))?;
                }
            }
            Err(SpectraError::Precondition(_)) => {
                ensure(brute_min_positive(c, q, m, n).is_none(), format!("{c:?} m={m}: search refused"))?;
            }
            Err(e) => return Err(e.to_string()),
        }
    }
    Ok("20 bases: X, Y and smallest positive values equal brute force".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check, u64); 10] = [
        ("exact smallest value for q = 3, m = 2", criterion_1, 1),
        ("golden ratio closure", criterion_2, 1),
        ("sqrt2 Pell decrease", criterion_3, 10),
        ("classification suite", criterion_4, 5),
        ("discreteness verdicts", criterion_5, 60),
        ("witness certification", criterion_6, 5),
        ("lazy expansion contract", criterion_7, 10),
        ("tail gaps for q^4 = q + 1", criterion_8, 30),
        ("A(q) covering radius", criterion_9, 10),
        ("brute-force equivalence", criterion_10, 30),
    ];
    let mut failed = 0;
    for (i, (name, f, limit)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let res = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let took = t.elapsed();
        let res = res.and_then(|s| {
            if took <= Duration::from_secs(*limit) {
                Ok(s)
            } else {
                Err(format!("took {took:?}, limit {limit} s"))
            }
        });
        match res {
            Ok(s) => println!("criterion {:>2} PASS  {name} ({took:.2?}): {s}", i + 1),
            Err(s) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({took:.2?}): {s}", i + 1);
            }
        }
    }
    println!("acceptance: {} of 10 passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
