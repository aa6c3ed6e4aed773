use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};
use std::fmt::Debug;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use ordered_float::OrderedFloat;

use crate::algebraic::{Base, ZqElement, ZqRing};
use crate::error::{Result, SpectraError};

/// Arithmetic needed by the level-set enumerations, either exact in `Z[q]`
/// or floating point with a relative tolerance.
pub(crate) trait Kernel: Sync {
    type Elem: Clone + Send + Sync + Debug;
    type Seen: Default + Send;

    fn int(&self, n: i64) -> Self::Elem;
    /// `q * x + s`.
    fn shift_add(&self, x: &Self::Elem, s: i64) -> Result<Self::Elem>;
    fn neg(&self, x: &Self::Elem) -> Self::Elem;
    fn approx(&self, x: &Self::Elem) -> f64;
    /// Strict total order used for sorting.
    fn order(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Ordering>;
    /// Equality: exact, or within tolerance.
    fn same(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
    fn sign(&self, x: &Self::Elem) -> Result<Ordering>;
    fn cmp_rational(&self, x: &Self::Elem, r: &BigRational) -> Result<Ordering>;
    /// Whether `0 <= x <= m / (q - 1)`, decided without dividing.
    fn within_c(&self, x: &Self::Elem, m: i64) -> Result<bool>;
    fn insert(&self, seen: &mut Self::Seen, x: &Self::Elem) -> bool;
    fn vec(&self, x: &Self::Elem) -> Option<Vec<i64>>;

    fn abs(&self, x: &Self::Elem) -> Result<Self::Elem> {
        Ok(if self.sign(x)? == Ordering::Less {
            self.neg(x)
        } else {
            x.clone()
        })
    }
}

pub(crate) struct ExactKernel {
    pub ring: ZqRing,
}

impl Kernel for ExactKernel {
    type Elem = ZqElement;
    type Seen = HashSet<ZqElement>;

    fn int(&self, n: i64) -> ZqElement {
        self.ring.int(n)
    }

    fn shift_add(&self, x: &ZqElement, s: i64) -> Result<ZqElement> {
        self.ring.shift_add(x, s)
    }

    fn neg(&self, x: &ZqElement) -> ZqElement {
        self.ring.neg(x)
    }

    fn approx(&self, x: &ZqElement) -> f64 {
        self.ring.value_f64(x)
    }

    fn order(&self, a: &ZqElement, b: &ZqElement) -> Result<Ordering> {
        self.ring.cmp(a, b)
    }

    fn same(&self, a: &ZqElement, b: &ZqElement) -> bool {
        a == b
    }

    fn sign(&self, x: &ZqElement) -> Result<Ordering> {
        self.ring.sign(x)
    }

    fn cmp_rational(&self, x: &ZqElement, r: &BigRational) -> Result<Ordering> {
        self.ring.cmp_rational(x, r)
    }

    fn within_c(&self, x: &ZqElement, m: i64) -> Result<bool> {
        if self.ring.sign(x)? == Ordering::Less {
            return Ok(false);
        }
        let qx = self.ring.shift_add(x, -m)?;
        let d = self.ring.sub(&qx, x)?;
        Ok(self.ring.sign(&d)? != Ordering::Greater)
    }

    fn insert(&self, seen: &mut HashSet<ZqElement>, x: &ZqElement) -> bool {
        seen.insert(x.clone())
    }

    fn vec(&self, x: &ZqElement) -> Option<Vec<i64>> {
        Some(x.coeffs().to_vec())
    }
}

pub(crate) struct NumericKernel {
    pub q: f64,
    pub tol: f64,
}

impl NumericKernel {
    fn slack(&self, a: f64, b: f64) -> f64 {
        self.tol * (1.0 + a.abs().max(b.abs()))
    }

    fn tolerant_cmp(&self, a: f64, b: f64) -> Ordering {
        if (a - b).abs() <= self.slack(a, b) {
            Ordering::Equal
        } else {
            a.total_cmp(&b)
        }
    }
}

impl Kernel for NumericKernel {
    type Elem = f64;
    type Seen = BTreeSet<OrderedFloat<f64>>;

    fn int(&self, n: i64) -> f64 {
        n as f64
    }

    fn shift_add(&self, x: &f64, s: i64) -> Result<f64> {
        let v = self.q * x + s as f64;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(SpectraError::Overflow)
        }
    }

    fn neg(&self, x: &f64) -> f64 {
        -x
    }

    fn approx(&self, x: &f64) -> f64 {
        *x
    }

    fn order(&self, a: &f64, b: &f64) -> Result<Ordering> {
        Ok(a.total_cmp(b))
    }

    fn same(&self, a: &f64, b: &f64) -> bool {
        self.tolerant_cmp(*a, *b) == Ordering::Equal
    }

    fn sign(&self, x: &f64) -> Result<Ordering> {
        Ok(self.tolerant_cmp(*x, 0.0))
    }

    fn cmp_rational(&self, x: &f64, r: &BigRational) -> Result<Ordering> {
        Ok(self.tolerant_cmp(*x, r.to_f64().unwrap_or(f64::NAN)))
    }

    fn within_c(&self, x: &f64, m: i64) -> Result<bool> {
        let lhs = (self.q - 1.0) * x;
        Ok(*x >= 0.0 && self.tolerant_cmp(lhs, m as f64) != Ordering::Greater)
    }

    fn insert(&self, seen: &mut Self::Seen, x: &f64) -> bool {
        let t = self.slack(*x, *x);
        let hit = seen
            .range(OrderedFloat(x - t)..=OrderedFloat(x + t))
            .next()
            .is_some();
        if !hit {
            seen.insert(OrderedFloat(*x));
        }
        !hit
    }

    fn vec(&self, _: &f64) -> Option<Vec<i64>> {
        None
    }
}

/// Runs `f` with the exact kernel when `Z[q]` is available, else numerically.
pub(crate) enum AnyKernel {
    Exact(ExactKernel),
    Numeric(NumericKernel),
}

impl AnyKernel {
    pub fn for_base(base: &Base) -> Result<Self> {
        match base.zq() {
            Ok(ring) => Ok(AnyKernel::Exact(ExactKernel { ring })),
            Err(SpectraError::ExactModeUnavailable) => Ok(AnyKernel::Numeric(NumericKernel {
                q: base.to_f64(),
                tol: base.tolerance(),
            })),
            Err(e) => Err(e),
        }
    }
}

/// Stable sort by the kernel order, surfacing the first comparison failure.
pub(crate) fn sort_by_kernel<K: Kernel, T>(
    k: &K,
    items: &mut [T],
    key: impl Fn(&T) -> &K::Elem,
) -> Result<()> {
    let mut err = None;
    items.sort_by(|a, b| match k.order(key(a), key(b)) {
        Ok(o) => o,
        Err(e) => {
            err.get_or_insert(e);
            Ordering::Equal
        }
    });
    err.map_or(Ok(()), Err)
}

/// Sorts, then drops every item equal to the last kept one.
pub(crate) fn sort_dedup<K: Kernel, T>(
    k: &K,
    items: &mut Vec<T>,
    key: impl Fn(&T) -> &K::Elem,
) -> Result<()> {
    sort_by_kernel(k, items, &key)?;
    let mut out: Vec<T> = Vec::with_capacity(items.len());
    for it in items.drain(..) {
        if out.last().is_some_and(|l| k.same(key(l), key(&it))) {
            continue;
        }
        out.push(it);
    }
    *items = out;
    Ok(())
}
