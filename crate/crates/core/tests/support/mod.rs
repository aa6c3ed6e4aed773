//! Independent reference computations for the integration tests. Nothing here
//! calls into the library.
#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Every digit string of length `len` over `alphabet`.
pub fn strings(alphabet: &[i64], len: usize) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * alphabet.len());
        for s in &out {
            for &a in alphabet {
                let mut t: Vec<i64> = s.clone();
                t.push(a);
                next.push(t);
            }
        }
        out = next;
    }
    out
}

/// `sum digits[i] x^i` reduced modulo the monic `minpoly` (ascending coefficients).
pub fn reduce(digits: &[i64], minpoly: &[i64]) -> Vec<i64> {
    let d = minpoly.len() - 1;
    assert_eq!(minpoly[d], 1, "monic");
    let mut r: Vec<i64> = digits.to_vec();
    r.resize(r.len().max(d), 0);
    for top in (d..r.len()).rev() {
        let c = r[top];
        if c != 0 {
            for (j, &a) in minpoly.iter().enumerate().take(d) {
                r[top - d + j] -= c * a;
            }
            r[top] = 0;
        }
    }
    r.truncate(d);
    r
}

pub fn eval(vec: &[i64], q: f64) -> f64 {
    vec.iter().rev().fold(0.0, |acc, &c| acc * q + c as f64)
}

/// Whether the element with canonical vector `v` is at most the integer `b`;
/// near-ties are settled by the fact that the only rational elements are constants.
pub fn le_int(v: &[i64], q: f64, b: i64) -> bool {
    let x = eval(v, q);
    if (x - b as f64).abs() > 1e-9 * (1.0 + x.abs()) {
        return x < b as f64;
    }
    v[0] <= b && v[1..].iter().all(|&c| c == 0) || x < b as f64
}

/// `(q - 1) v` as a canonical vector.
pub fn times_q_minus_one(v: &[i64], minpoly: &[i64]) -> Vec<i64> {
    let mut shifted = vec![0];
    shifted.extend_from_slice(v);
    let qv = reduce(&shifted, minpoly);
    qv.iter().zip(v).map(|(a, b)| a - b).collect()
}

pub struct Corpus {
    pub x: BTreeSet<Vec<i64>>,
    pub y: BTreeSet<Vec<i64>>,
}

/// Canonical vectors of all strings of degree at most `n` with values in
/// `[0, bound]` (digits `0..=m`) and `[-bound, bound]` (digits `-m..=m`).
pub fn brute_windows(minpoly: &[i64], q: f64, m: i64, n: usize, bound: i64) -> Corpus {
    let pos: Vec<i64> = (0..=m).collect();
    let sym: Vec<i64> = (-m..=m).collect();
    let x = strings(&pos, n + 1)
        .into_iter()
        .map(|s| reduce(&s, minpoly))
        .filter(|v| le_int(v, q, bound))
        .collect();
    let y = strings(&sym, n + 1)
        .into_iter()
        .map(|s| reduce(&s, minpoly))
        .filter(|v| le_int(v, q, bound) && le_int(&v.iter().map(|c| -c).collect::<Vec<_>>(), q, bound))
        .collect();
    Corpus { x, y }
}

/// Smallest positive element of `(0, m / (q - 1)]` over strings of degree at most `n`.
pub fn brute_min_positive(minpoly: &[i64], q: f64, m: i64, n: usize) -> Option<Vec<i64>> {
    let sym: Vec<i64> = (-m..=m).collect();
    let mut best: Option<(f64, Vec<i64>)> = None;
    for s in strings(&sym, n + 1) {
        let v = reduce(&s, minpoly);
        if v.iter().all(|&c| c == 0) {
            continue;
        }
        let x = eval(&v, q);
        if x <= 0.0 || !le_int(&times_q_minus_one(&v, minpoly), q, m) {
            continue;
        }
        if best.as_ref().is_none_or(|(b, _)| x < *b) {
            best = Some((x, v));
        }
    }
    best.map(|(_, v)| v)
}

/// All complex roots of a polynomial (ascending coefficients) by Durand-Kerner.
pub fn roots(coeffs: &[i64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n] as f64;
    let c: Vec<f64> = coeffs.iter().map(|&a| a as f64 / lead).collect();
    let p = |z: Complex64| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32)).collect();
    for _ in 0..2000 {
        let prev = z.clone();
        for i in 0..n {
            let denom = (0..n)
                .filter(|&j| j != i)
                .fold(Complex64::new(1.0, 0.0), |acc, j| acc * (z[i] - z[j]));
            let zi = z[i];
            z[i] = zi - p(zi) / denom;
        }
        if z.iter().zip(&prev).all(|(a, b)| (a - b).norm() < 1e-15) {
            break;
        }
    }
    z
}

/// Pisot test for the root of `coeffs` closest to `q`: monic, and every other
/// root strictly inside the unit disk by a clear margin.
pub fn is_pisot(coeffs: &[i64], q: f64) -> bool {
    if *coeffs.last().unwrap() != 1 {
        return false;
    }
    let mut r = roots(coeffs);
    r.sort_by(|a, b| (a - q).norm().total_cmp(&(b - q).norm()));
    assert!((r[0] - q).norm() < 1e-8, "base is a root");
    let rest: Vec<f64> = r[1..].iter().map(|z| z.norm()).collect();
    assert!(rest.iter().all(|&x| (x - 1.0).abs() > 1e-6), "oracle cannot decide");
    rest.iter().all(|&x| x < 1.0)
}

/// Largest real root of a polynomial by bisection on `[lo, hi]`.
pub fn real_root(coeffs: &[i64], mut lo: f64, mut hi: f64) -> f64 {
    let p = |x: f64| coeffs.iter().rev().fold(0.0, |acc, &a| acc * x + a as f64);
    let sign_lo = p(lo).signum();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if p(mid).signum() == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `|sum_(i<=n) s_i q^-i|` and whether it is within `m q^-n / (q - 1)`, exactly.
pub fn exact_residual(digits: &[i64], q: &BigRational, m: i64) -> (BigRational, bool) {
    let inv = q.recip();
    let mut pow = BigRational::one();
    let mut sum = BigRational::zero();
    for (i, &s) in digits.iter().enumerate() {
        if i > 0 {
            pow = &pow * &inv;
        }
        sum += &pow * BigRational::from_integer(s.into());
    }
    let bound = &pow * BigRational::from_integer(m.into()) / (q - BigRational::one());
    let abs = sum.abs();
    let ok = abs <= bound;
    (abs, ok)
}

/// `m sum_(i in P) q^-i` for `P` = explicit members below `threshold` plus the
/// indices `i >= threshold` with `bits[(i - threshold) % len]`.
pub fn exact_capacity(q: &BigRational, m: i64, explicit: &[usize], threshold: usize, bits: &[bool]) -> BigRational {
    let inv = q.recip();
    let pow = |k: usize| -> BigRational {
        let mut p = BigRational::one();
        for _ in 0..k {
            p = &p * &inv;
        }
        p
    };
    let mut sum = BigRational::zero();
    for &i in explicit.iter().filter(|&&i| i < threshold) {
        sum += pow(i);
    }
    let period = pow(bits.len());
    let block: BigRational = bits
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(j, _)| pow(threshold + j))
        .fold(BigRational::zero(), |a, b| a + b);
    sum += block / (BigRational::one() - period);
    sum * BigRational::from_integer(m.into())
}

/// Sorted, tolerance-deduplicated values of height-`m` nonnegative-digit
/// polynomials in `[0, bound]`, grown by `x -> q x + s` from the digits.
pub fn x_values(q: f64, m: i64, bound: f64) -> Vec<f64> {
    let dedup = |mut v: Vec<f64>| {
        v.sort_by(f64::total_cmp);
        v.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * (1.0 + b.abs()));
        v
    };
    let mut all = dedup((0..=m).map(|s| s as f64).filter(|&x| x <= bound).collect());
    let mut frontier = all.clone();
    loop {
        let grown: Vec<f64> = frontier
            .iter()
            .flat_map(|&x| (0..=m).map(move |s| q * x + s as f64))
            .filter(|&x| x <= bound + 1e-9)
            .collect();
        let merged = dedup(all.iter().copied().chain(grown.iter().copied()).collect());
        if merged.len() == all.len() {
            return all;
        }
        let old = all;
        frontier = dedup(grown)
            .into_iter()
            .filter(|x| {
                let i = old.partition_point(|y| *y < *x - 1e-9 * (1.0 + x.abs()));
                i == old.len() || (old[i] - x).abs() > 1e-9 * (1.0 + x.abs())
            })
            .collect();
        all = merged;
    }
}

/// Largest gap whose left end is at least `f * bound`, else the last gap.
pub fn tail_gap(values: &[f64], bound: f64, f: f64) -> f64 {
    let gaps: Vec<(f64, f64)> = values.windows(2).map(|w| (w[0], w[1] - w[0])).collect();
    let tail: Vec<f64> = gaps.iter().filter(|(l, _)| *l >= f * bound).map(|g| g.1).collect();
    if tail.is_empty() {
        gaps.last().map_or(0.0, |g| g.1)
    } else {
        tail.into_iter().fold(0.0, f64::max)
    }
}

/// Covering radius of the values of all `+-1` strings of degree exactly `n` in `[-b, b]`.
pub fn a_covering_radius(q: f64, n: usize, b: f64) -> f64 {
    let mut v: Vec<f64> = strings(&[-1, 1], n + 1)
        .iter()
        .map(|s| s.iter().rev().fold(0.0, |acc, &c| acc * q + c as f64))
        .filter(|x| x.abs() <= b)
        .collect();
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| (*a - *b).abs() <= 1e-9);
    let inner = v.windows(2).map(|w| (w[1] - w[0]) / 2.0).fold(0.0, f64::max);
    inner.max(v[0] + b).max(b - v[v.len() - 1])
}
