use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;

use super::kernel::{sort_dedup, AnyKernel, Kernel};
use super::window::{WindowPoint, DEFAULT_STATE_BUDGET};
use crate::algebraic::{Base, BaseSpec};
use crate::error::{precondition, Result};

#[derive(Clone, Debug)]
pub struct BfsOptions {
    pub max_depth: Option<usize>,
    pub state_budget: usize,
}

impl Default for BfsOptions {
    fn default() -> Self {
        BfsOptions {
            max_depth: None,
            state_budget: DEFAULT_STATE_BUDGET,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DepthRow {
    pub depth: usize,
    /// Smallest state seen up to this depth.
    pub min: WindowPoint,
    pub new_states: usize,
    pub total_states: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct BfsResult {
    pub base: BaseSpec,
    pub m: i64,
    /// The cap `m / (q - 1)`.
    pub cap: f64,
    pub exact: bool,
    pub trace: Vec<DepthRow>,
    pub closed: bool,
    pub budget_exhausted: bool,
    /// The full state set, sorted, when the search closed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub states: Option<Vec<WindowPoint>>,
}

impl BfsResult {
    /// Current smallest positive value found.
    pub fn min(&self) -> &WindowPoint {
        &self.trace.last().expect("seeded search").min
    }

    /// Exact minimum when the state set closed.
    pub fn ell(&self) -> Option<&WindowPoint> {
        self.closed.then(|| self.min())
    }

    pub fn depth(&self) -> usize {
        self.trace.last().map_or(0, |r| r.depth)
    }
}

struct ArenaNode {
    parent: Option<u32>,
    digit: i64,
    negated: bool,
}

struct Candidate<E> {
    value: E,
    parent: u32,
    digit: i64,
    negated: bool,
}

/// Coefficients of a state, rebuilt by walking parent links.
fn digits_of(arena: &[ArenaNode], mut i: usize) -> Vec<i64> {
    let mut chain = vec![];
    loop {
        chain.push(i);
        match arena[i].parent {
            Some(p) => i = p as usize,
            None => break,
        }
    }
    let mut digits: Vec<i64> = Vec::with_capacity(chain.len());
    for &j in chain.iter().rev() {
        digits.insert(0, arena[j].digit);
        if arena[j].negated {
            digits.iter_mut().for_each(|d| *d = -*d);
        }
    }
    digits
}

fn point<K: Kernel>(k: &K, arena: &[ArenaNode], values: &[K::Elem], i: usize) -> WindowPoint {
    WindowPoint {
        vec: k.vec(&values[i]),
        approx: k.approx(&values[i]),
        digits: digits_of(arena, i),
    }
}

fn run<K: Kernel>(k: &K, m: i64, opts: &BfsOptions) -> Result<(Vec<DepthRow>, bool, bool, Option<Vec<WindowPoint>>)> {
    let mut seen = K::Seen::default();
    let mut values: Vec<K::Elem> = vec![];
    let mut arena: Vec<ArenaNode> = vec![];
    for s in 1..=m {
        let v = k.int(s);
        if k.within_c(&v, m)? && k.insert(&mut seen, &v) {
            values.push(v);
            arena.push(ArenaNode {
                parent: None,
                digit: s,
                negated: false,
            });
        }
    }
    if values.is_empty() {
        return precondition("no seed lies in (0, m/(q-1)]");
    }
    let mut best = 0;
    for i in 1..values.len() {
        if k.order(&values[i], &values[best])? == Ordering::Less {
            best = i;
        }
    }
    let mut trace = vec![DepthRow {
        depth: 0,
        min: point(k, &arena, &values, best),
        new_states: values.len(),
        total_states: values.len(),
    }];
    let mut frontier = 0..values.len();
    let mut depth = 0;
    let mut closed = false;
    let mut exhausted = false;
    while opts.max_depth.is_none_or(|d| depth < d) {
        depth += 1;
        let parts = frontier
            .clone()
            .into_par_iter()
            .map(|i| {
                let mut out = Vec::new();
                for s in -m..=m {
                    let v = k.shift_add(&values[i], s)?;
                    let sign = k.sign(&v)?;
                    if sign == Ordering::Equal {
                        continue;
                    }
                    let negated = sign == Ordering::Less;
                    let v = if negated { k.neg(&v) } else { v };
                    if k.within_c(&v, m)? {
                        out.push(Candidate {
                            value: v,
                            parent: i as u32,
                            digit: s,
                            negated,
                        });
                    }
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut cands: Vec<Candidate<K::Elem>> = parts.into_iter().flatten().collect();
        sort_dedup(k, &mut cands, |c| &c.value)?;
        let start = values.len();
        for c in cands {
            if k.insert(&mut seen, &c.value) {
                values.push(c.value);
                arena.push(ArenaNode {
                    parent: Some(c.parent),
                    digit: c.digit,
                    negated: c.negated,
                });
            }
        }
        for i in start..values.len() {
            if k.order(&values[i], &values[best])? == Ordering::Less {
                best = i;
            }
        }
        trace.push(DepthRow {
            depth,
            min: point(k, &arena, &values, best),
            new_states: values.len() - start,
            total_states: values.len(),
        });
        if values.len() == start {
            closed = true;
            break;
        }
        if values.len() > opts.state_budget {
            exhausted = true;
            break;
        }
        frontier = start..values.len();
    }
    let states = if closed {
        let mut idx: Vec<(usize, K::Elem)> = values.iter().cloned().enumerate().collect();
        super::kernel::sort_by_kernel(k, &mut idx, |p| &p.1)?;
        Some(idx.into_iter().map(|(i, _)| point(k, &arena, &values, i)).collect())
    } else {
        None
    };
    Ok((trace, closed, exhausted, states))
}

/// Breadth-first search for the smallest positive value of a height-`m`
/// polynomial at `q`, restricted to states in `(0, m/(q-1)]`.
///
/// The search is closed when a full round adds no state; the minimum over the
/// state set is then exact.
pub fn min_positive_bfs(base: &Base, m: i64, opts: &BfsOptions) -> Result<BfsResult> {
    if m < 1 {
        return precondition("height m must be at least 1");
    }
    let q = base.to_f64();
    let (exact, (trace, closed, budget_exhausted, states)) = match AnyKernel::for_base(base)? {
        AnyKernel::Exact(k) => (true, run(&k, m, opts)?),
        AnyKernel::Numeric(k) => (false, run(&k, m, opts)?),
    };
    Ok(BfsResult {
        base: base.spec(),
        m,
        cap: m as f64 / (q - 1.0),
        exact,
        trace,
        closed,
        budget_exhausted,
        states,
    })
}
