use std::cmp::Ordering;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use super::kernel::{sort_by_kernel, sort_dedup, AnyKernel, Kernel};
use crate::algebraic::{Base, BaseSpec, ZqRing};
use crate::error::{precondition, Result};

/// Default cap on stored states for enumerations and searches.
pub const DEFAULT_STATE_BUDGET: usize = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Kind {
    X,
    Y,
    A,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WindowPoint {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vec: Option<Vec<i64>>,
    pub approx: f64,
    /// Witness coefficients, constant term first.
    pub digits: Vec<i64>,
}

/// Sorted, deduplicated slice of a spectrum.
#[derive(Clone, Debug, Serialize)]
pub struct SpectrumWindow {
    pub base: BaseSpec,
    pub m: i64,
    pub kind: Kind,
    pub degree: Option<usize>,
    pub bound: f64,
    pub complete: bool,
    pub exact: bool,
    pub budget_exhausted: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub covering_radius: Option<f64>,
    pub points: Vec<WindowPoint>,
    #[serde(skip)]
    pub(crate) ring: Option<ZqRing>,
    #[serde(skip)]
    pub(crate) tolerance: f64,
}

impl SpectrumWindow {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.approx).collect()
    }

    /// Canonical vectors, present in exact mode.
    pub fn vectors(&self) -> Option<Vec<Vec<i64>>> {
        self.points.iter().map(|p| p.vec.clone()).collect()
    }

    pub fn ring(&self) -> Option<&ZqRing> {
        self.ring.as_ref()
    }
}

pub(crate) struct Node<E> {
    pub value: E,
    pub digits: Vec<i64>,
}

/// One level step: `q * x + s` for every frontier node and digit, filtered by `keep`.
fn grow<K: Kernel>(
    k: &K,
    frontier: &[Node<K::Elem>],
    alphabet: &[i64],
    keep: &(dyn Fn(&K::Elem) -> Result<bool> + Sync),
) -> Result<Vec<Node<K::Elem>>> {
    let parts = frontier
        .par_iter()
        .map(|n| {
            let mut out = Vec::new();
            for &s in alphabet {
                let v = k.shift_add(&n.value, s)?;
                if keep(&v)? {
                    let mut digits = Vec::with_capacity(n.digits.len() + 1);
                    digits.push(s);
                    digits.extend_from_slice(&n.digits);
                    out.push(Node { value: v, digits });
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(parts.into_iter().flatten().collect())
}

fn bound_rational(bound: f64) -> Result<BigRational> {
    if !(bound.is_finite() && bound > 0.0) {
        return precondition("bound must be a positive finite number");
    }
    Ok(BigRational::from_float(bound).expect("finite"))
}

fn check_height(m: i64) -> Result<()> {
    if m < 1 {
        return precondition("height m must be at least 1");
    }
    Ok(())
}

struct Grown<E> {
    nodes: Vec<Node<E>>,
    exhausted: bool,
}

/// Union of levels, each new level deduplicated against everything seen.
fn cumulative<K: Kernel>(
    k: &K,
    alphabet: &[i64],
    max_levels: Option<usize>,
    budget: usize,
    keep: &(dyn Fn(&K::Elem) -> Result<bool> + Sync),
) -> Result<Grown<K::Elem>> {
    let mut seen = K::Seen::default();
    let mut all = Vec::new();
    let mut frontier: Vec<Node<K::Elem>> = Vec::new();
    let mut seeds = Vec::new();
    for &s in alphabet {
        let v = k.int(s);
        if keep(&v)? {
            seeds.push(Node { value: v, digits: vec![s] });
        }
    }
    sort_dedup(k, &mut seeds, |n| &n.value)?;
    for n in seeds {
        k.insert(&mut seen, &n.value);
        frontier.push(n);
    }
    let mut level = 0;
    let mut exhausted = false;
    while !frontier.is_empty() && max_levels.is_none_or(|n| level < n) {
        let mut next = grow(k, &frontier, alphabet, keep)?;
        sort_dedup(k, &mut next, |n| &n.value)?;
        next.retain(|n| k.insert(&mut seen, &n.value));
        all.append(&mut frontier);
        frontier = next;
        level += 1;
        if all.len() + frontier.len() > budget {
            exhausted = true;
            break;
        }
    }
    all.append(&mut frontier);
    Ok(Grown {
        nodes: all,
        exhausted,
    })
}

fn finish<K: Kernel>(
    k: &K,
    mut nodes: Vec<Node<K::Elem>>,
    keep: impl Fn(&K::Elem) -> Result<bool>,
) -> Result<Vec<WindowPoint>> {
    let mut kept = Vec::with_capacity(nodes.len());
    for n in nodes.drain(..) {
        if keep(&n.value)? {
            kept.push(n);
        }
    }
    sort_by_kernel(k, &mut kept, |n| &n.value)?;
    Ok(kept
        .into_iter()
        .map(|n| WindowPoint {
            vec: k.vec(&n.value),
            approx: k.approx(&n.value),
            digits: n.digits,
        })
        .collect())
}

fn abs_le<K: Kernel>(k: &K, x: &K::Elem, b: &BigRational) -> Result<bool> {
    Ok(k.cmp_rational(&k.abs(x)?, b)? != Ordering::Greater)
}

/// `|x| <= max(B, m / (q - 1))`: beyond that every further level grows strictly.
fn within_radius<K: Kernel>(k: &K, x: &K::Elem, b: &BigRational, m: i64) -> Result<bool> {
    Ok(abs_le(k, x, b)? || k.within_c(&k.abs(x)?, m)?)
}

fn window_shell(base: &Base, m: i64, kind: Kind, degree: Option<usize>, bound: f64) -> SpectrumWindow {
    SpectrumWindow {
        base: base.spec(),
        m,
        kind,
        degree,
        bound,
        complete: false,
        exact: false,
        budget_exhausted: false,
        covering_radius: None,
        points: vec![],
        ring: None,
        tolerance: base.tolerance(),
    }
}

fn x_points<K: Kernel>(k: &K, m: i64, b: &BigRational, budget: usize) -> Result<(Vec<WindowPoint>, bool)> {
    let alphabet: Vec<i64> = (0..=m).collect();
    let keep = |x: &K::Elem| -> Result<bool> { Ok(k.cmp_rational(x, b)? != Ordering::Greater) };
    let g = cumulative(k, &alphabet, None, budget, &keep)?;
    Ok((finish(k, g.nodes, keep)?, g.exhausted))
}

/// Every element of `X^m(q)` in `[0, B]`, each exactly once.
pub fn enumerate_x(base: &Base, m: i64, bound: f64, budget: usize) -> Result<SpectrumWindow> {
    check_height(m)?;
    let b = bound_rational(bound)?;
    let mut w = window_shell(base, m, Kind::X, None, bound);
    let (points, exhausted) = match AnyKernel::for_base(base)? {
        AnyKernel::Exact(k) => {
            w.exact = true;
            let r = x_points(&k, m, &b, budget)?;
            w.ring = Some(k.ring);
            r
        }
        AnyKernel::Numeric(k) => x_points(&k, m, &b, budget)?,
    };
    w.points = points;
    w.budget_exhausted = exhausted;
    w.complete = !exhausted;
    Ok(w)
}

fn y_points<K: Kernel>(
    k: &K,
    m: i64,
    n: usize,
    b: &BigRational,
    budget: usize,
) -> Result<(Vec<WindowPoint>, bool)> {
    let alphabet: Vec<i64> = (-m..=m).collect();
    let prune = |x: &K::Elem| within_radius(k, x, b, m);
    let g = cumulative(k, &alphabet, Some(n), budget, &prune)?;
    Ok((finish(k, g.nodes, |x| abs_le(k, x, b))?, g.exhausted))
}

/// Whether degree `n` reaches every point of `Y^m(q)` in `[-B, B]`.
///
/// Needs `q > m + 1`: a value whose top coefficient sits at degree `N` then has
/// modulus at least `q^N (1 - m / (q - 1))`.
pub fn y_degree_suffices(q: f64, m: i64, n: usize, bound: f64) -> bool {
    let m = m as f64;
    if q <= m + 1.0 {
        return false;
    }
    let floor = 1.0 - m / (q - 1.0);
    let need = (bound / floor).ln() / q.ln();
    // small relative margin against rounding in the logarithms
    (n as f64) >= need + 1e-9 * need.abs().max(1.0)
}

/// Values of height-`m` polynomials of degree at most `n` in `[-B, B]`.
pub fn enumerate_y(base: &Base, m: i64, n: usize, bound: f64, budget: usize) -> Result<SpectrumWindow> {
    check_height(m)?;
    let b = bound_rational(bound)?;
    let mut w = window_shell(base, m, Kind::Y, Some(n), bound);
    let (points, exhausted) = match AnyKernel::for_base(base)? {
        AnyKernel::Exact(k) => {
            w.exact = true;
            let r = y_points(&k, m, n, &b, budget)?;
            w.ring = Some(k.ring);
            r
        }
        AnyKernel::Numeric(k) => y_points(&k, m, n, &b, budget)?,
    };
    w.points = points;
    w.budget_exhausted = exhausted;
    w.complete = !exhausted && base.cmp_int(m + 1) == Ordering::Greater
        && y_degree_suffices(base.to_f64(), m, n, bound);
    Ok(w)
}

fn a_points<K: Kernel>(
    k: &K,
    n: usize,
    b: &BigRational,
    budget: usize,
) -> Result<(Vec<WindowPoint>, bool)> {
    let alphabet = [-1, 1];
    let prune = |x: &K::Elem| within_radius(k, x, b, 1);
    let mut level: Vec<Node<K::Elem>> = alphabet
        .iter()
        .map(|&s| Node {
            value: k.int(s),
            digits: vec![s],
        })
        .collect();
    let mut exhausted = false;
    for _ in 0..n {
        level = grow(k, &level, &alphabet, &prune)?;
        sort_dedup(k, &mut level, |x| &x.value)?;
        if level.len() > budget {
            exhausted = true;
            break;
        }
    }
    Ok((finish(k, level, |x| abs_le(k, x, b))?, exhausted))
}

/// Largest distance from a point of `[-B, B]` to the sorted `values`.
pub fn covering_radius(values: &[f64], bound: f64) -> Option<f64> {
    let (first, last) = (values.first()?, values.last()?);
    let inner = values
        .windows(2)
        .map(|w| (w[1] - w[0]) / 2.0)
        .fold(0.0, f64::max);
    Some(inner.max(first + bound).max(bound - last))
}

/// Values `sum a_i q^i` with every `a_i = +-1` and degree exactly `n`, clipped to `[-B, B]`.
pub fn enumerate_a(base: &Base, n: usize, bound: f64, budget: usize) -> Result<SpectrumWindow> {
    let b = bound_rational(bound)?;
    if base.cmp_int(2) == Ordering::Greater {
        return precondition("A(q) enumeration needs 1 < q <= 2");
    }
    let mut w = window_shell(base, 1, Kind::A, Some(n), bound);
    let (points, exhausted) = match AnyKernel::for_base(base)? {
        AnyKernel::Exact(k) => {
            w.exact = true;
            let r = a_points(&k, n, &b, budget)?;
            w.ring = Some(k.ring);
            r
        }
        AnyKernel::Numeric(k) => a_points(&k, n, &b, budget)?,
    };
    w.points = points;
    w.budget_exhausted = exhausted;
    w.covering_radius = covering_radius(&w.values(), bound);
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraic::IntPolynomial;

    fn golden() -> Base {
        Base::from_root_index(&IntPolynomial::from_i64s(&[-1, -1, 1]), 0).unwrap()
    }

    #[test]
    fn binary_and_ternary() {
        let w = enumerate_x(&Base::integer(2).unwrap(), 1, 7.0, DEFAULT_STATE_BUDGET).unwrap();
        assert_eq!(w.values(), (0..=7).map(f64::from).collect::<Vec<_>>());
        assert!(w.complete && w.exact);
        let w = enumerate_x(&Base::integer(3).unwrap(), 2, 8.0, DEFAULT_STATE_BUDGET).unwrap();
        assert_eq!(w.values(), (0..=8).map(f64::from).collect::<Vec<_>>());
    }

    #[test]
    fn golden_small_window() {
        let w = enumerate_x(&golden(), 1, 2.0, DEFAULT_STATE_BUDGET).unwrap();
        let v = w.values();
        assert_eq!(v.len(), 3);
        assert!((v[2] - 1.618033988749895).abs() < 1e-15);
    }

    #[test]
    fn balanced_ternary() {
        let w = enumerate_y(&Base::integer(3).unwrap(), 1, 2, 13.0, DEFAULT_STATE_BUDGET).unwrap();
        assert_eq!(w.values(), (-13..=13).map(f64::from).collect::<Vec<_>>());
    }

    #[test]
    fn sqrt2_minimal_positive() {
        let b = Base::from_root_index(&IntPolynomial::from_i64s(&[-2, 0, 1]), 0).unwrap();
        let w = enumerate_y(&b, 1, 3, 1.0, DEFAULT_STATE_BUDGET).unwrap();
        let p = w.points.iter().find(|p| p.approx > 0.0).unwrap();
        assert_eq!(p.vec.as_deref(), Some(&[3, -2][..]));
        assert!((p.approx - (3.0 - 2.0 * 2f64.sqrt())).abs() < 1e-15);
        assert!(!w.complete);
    }

    #[test]
    fn odd_integers_for_a2() {
        let w = enumerate_a(&Base::integer(2).unwrap(), 2, 7.0, DEFAULT_STATE_BUDGET).unwrap();
        assert_eq!(w.values(), vec![-7.0, -5.0, -3.0, -1.0, 1.0, 3.0, 5.0, 7.0]);
        assert_eq!(w.covering_radius, Some(1.0));
        let w = enumerate_a(&Base::integer(2).unwrap(), 0, 7.0, DEFAULT_STATE_BUDGET).unwrap();
        assert_eq!(w.values(), vec![-1.0, 1.0]);
    }

    #[test]
    fn de_vries_completeness_flag() {
        let w = enumerate_y(&Base::integer(3).unwrap(), 1, 3, 13.0, DEFAULT_STATE_BUDGET).unwrap();
        assert!(w.complete);
        assert!(!y_degree_suffices(3.0, 1, 1, 13.0));
    }

    #[test]
    fn numeric_mode() {
        let b = Base::numeric("1.5", 1e-9).unwrap();
        let w = enumerate_x(&b, 1, 3.0, DEFAULT_STATE_BUDGET).unwrap();
        assert!(!w.exact);
        assert_eq!(w.values()[..4], [0.0, 1.0, 1.5, 2.25]);
        assert!(enumerate_a(&Base::numeric("2.5", 1e-9).unwrap(), 3, 2.0, 100).is_err());
    }
}
