use std::fmt;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::interval::Interval;
use super::poly::{cauchy_bound, IntPolynomial, Sturm};
use crate::error::{precondition, Result, SpectraError};

/// A real root together with a rational enclosure `[lo, hi]`.
#[derive(Clone, Debug, PartialEq)]
pub struct RealRoot {
    pub lo: BigRational,
    pub hi: BigRational,
    pub approx: f64,
    pub radius: f64,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn sign_of(v: &BigRational) -> i8 {
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

/// Bisects `(lo, hi)`, which holds exactly one simple root, until `hi - lo <= width`.
/// An exact rational root collapses the interval to a point.
fn refine(p: &IntPolynomial, lo: &mut BigRational, hi: &mut BigRational, width: &BigRational) {
    if lo == hi {
        return;
    }
    if p.degree() == 1 {
        let c = p.coeffs();
        let r = BigRational::new(-c[0].clone(), c[1].clone());
        *lo = r.clone();
        *hi = r;
        return;
    }
    let mut slo = sign_of(&p.eval_rational(lo));
    if slo == 0 {
        *hi = lo.clone();
        return;
    }
    if sign_of(&p.eval_rational(hi)) == 0 {
        *lo = hi.clone();
        return;
    }
    let two = rat(2);
    while &(&*hi - &*lo) > width {
        let mid = (&*lo + &*hi) / &two;
        let s = sign_of(&p.eval_rational(&mid));
        if s == 0 {
            *lo = mid.clone();
            *hi = mid;
            return;
        }
        if s == slo {
            *lo = mid;
            slo = s;
        } else {
            *hi = mid;
        }
    }
}

fn isolate_squarefree(p: &IntPolynomial) -> Vec<(BigRational, BigRational)> {
    if p.degree() == 0 {
        return vec![];
    }
    let sturm = Sturm::new(p);
    let m = BigRational::from_integer(cauchy_bound(p));
    let mut out = Vec::new();
    let mut stack = vec![(-m.clone(), m)];
    while let Some((lo, hi)) = stack.pop() {
        match sturm.count(&lo, &hi) {
            0 => {}
            1 => out.push((lo, hi)),
            _ => {
                // Split at a non-root so both halves keep non-root endpoints.
                let width = &hi - &lo;
                let mut mid = &lo + &width / rat(2);
                let mut k = 2u32;
                while p.eval_rational(&mid).is_zero() {
                    let off = BigRational::new(
                        (BigInt::one() << k as usize) + 1,
                        BigInt::one() << (k + 1) as usize,
                    );
                    mid = &lo + &width * off;
                    k += 1;
                }
                stack.push((lo, mid.clone()));
                stack.push((mid, hi));
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

fn radius_to_width(radius: f64) -> BigRational {
    let r = if radius.is_finite() && radius > 0.0 {
        radius
    } else {
        1e-12
    };
    BigRational::from_float(2.0 * r).unwrap_or_else(|| rat(1))
}

/// Isolates every real root of `p` and refines each enclosure to radius `radius`.
///
/// Roots are returned in ascending order; repeated factors are removed first.
pub fn isolate_real_roots(p: &IntPolynomial, radius: f64) -> Result<Vec<RealRoot>> {
    if p.is_zero() {
        return precondition("zero polynomial has no isolated roots");
    }
    if p.degree() == 0 {
        return precondition("constant polynomial has no roots");
    }
    let sf = p.squarefree_part();
    let width = radius_to_width(radius);
    Ok(isolate_squarefree(&sf)
        .into_iter()
        .map(|(mut lo, mut hi)| {
            refine(&sf, &mut lo, &mut hi, &width);
            let approx = ((&lo + &hi) / rat(2)).to_f64().unwrap_or(f64::NAN);
            let radius = ((&hi - &lo) / rat(2)).to_f64().unwrap_or(f64::NAN);
            RealRoot {
                lo,
                hi,
                approx,
                radius,
            }
        })
        .collect())
}

/// Real algebraic number: a primitive squarefree integer polynomial plus an
/// interval holding exactly one of its real roots.
///
/// The enclosure cache only ever narrows; concurrent refiners may race, and
/// whichever narrower interval lands last is kept.
pub struct AlgebraicNumber {
    poly: IntPolynomial,
    isolating: (BigRational, BigRational),
    cache: RwLock<(BigRational, BigRational)>,
    approx: f64,
}

impl Clone for AlgebraicNumber {
    fn clone(&self) -> Self {
        AlgebraicNumber {
            poly: self.poly.clone(),
            isolating: self.isolating.clone(),
            cache: RwLock::new(self.cache.read().unwrap().clone()),
            approx: self.approx,
        }
    }
}

impl fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgebraicNumber({} ~ {})", self.poly, self.approx)
    }
}

impl AlgebraicNumber {
    fn build(poly: IntPolynomial, lo: BigRational, hi: BigRational) -> Self {
        let mut l = lo.clone();
        let mut h = hi.clone();
        refine(&poly, &mut l, &mut h, &BigRational::new(BigInt::one(), BigInt::one() << 60));
        let approx = ((&l + &h) / rat(2)).to_f64().unwrap_or(f64::NAN);
        AlgebraicNumber {
            poly,
            isolating: (lo, hi),
            cache: RwLock::new((l, h)),
            approx,
        }
    }

    /// Selects the `index`-th real root (0-based, ascending).
    pub fn from_root_index(poly: &IntPolynomial, index: usize) -> Result<Self> {
        let sf = poly.squarefree_part();
        if sf.degree() == 0 {
            return precondition("polynomial has no roots");
        }
        let roots = isolate_squarefree(&sf);
        let Some((lo, hi)) = roots.get(index).cloned() else {
            return precondition(format!(
                "root index {index} out of range: {} real roots",
                roots.len()
            ));
        };
        Ok(Self::build(sf, lo, hi))
    }

    /// Selects the unique root in `[lo, hi]`; fails unless exactly one lies there.
    pub fn from_interval(poly: &IntPolynomial, lo: BigRational, hi: BigRational) -> Result<Self> {
        let sf = poly.squarefree_part();
        if sf.degree() == 0 {
            return precondition("polynomial has no roots");
        }
        if lo > hi {
            return precondition("empty root interval");
        }
        let sturm = Sturm::new(&sf);
        let at_lo = sf.eval_rational(&lo).is_zero();
        let count = sturm.count(&lo, &hi) + usize::from(at_lo);
        if count != 1 {
            return precondition(format!(
                "interval [{lo}, {hi}] holds {count} roots of {sf}, expected exactly one"
            ));
        }
        if at_lo {
            return Ok(Self::build(sf, lo.clone(), lo));
        }
        Ok(Self::build(sf, lo, hi))
    }

    pub fn from_integer(n: i64) -> Self {
        let p = IntPolynomial::from_i64s(&[-n, 1]);
        Self::build(p, rat(n), rat(n))
    }

    pub fn from_rational(r: &BigRational) -> Self {
        let p = IntPolynomial::new(vec![-r.numer().clone(), r.denom().clone()]).primitive();
        Self::build(p, r.clone(), r.clone())
    }

    pub fn poly(&self) -> &IntPolynomial {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    pub fn isolating_interval(&self) -> &(BigRational, BigRational) {
        &self.isolating
    }

    pub fn to_f64(&self) -> f64 {
        self.approx
    }

    /// Rational value when the number has degree one.
    pub fn as_rational(&self) -> Option<BigRational> {
        (self.poly.degree() == 1).then(|| {
            let c = self.poly.coeffs();
            BigRational::new(-c[0].clone(), c[1].clone())
        })
    }

    /// Rational enclosure of width at most `2^-bits`.
    pub fn enclosure(&self, bits: u32) -> (BigRational, BigRational) {
        let width = BigRational::new(BigInt::one(), BigInt::one() << bits as usize);
        {
            let c = self.cache.read().unwrap();
            if &c.1 - &c.0 <= width {
                return c.clone();
            }
        }
        let (mut lo, mut hi) = self.cache.read().unwrap().clone();
        refine(&self.poly, &mut lo, &mut hi, &width);
        let mut c = self.cache.write().unwrap();
        if &hi - &lo < &c.1 - &c.0 {
            *c = (lo.clone(), hi.clone());
        }
        (lo, hi)
    }

    /// Fixed-point enclosure on the `2^-bits` grid.
    pub fn interval(&self, bits: u32) -> Interval {
        let (lo, hi) = self.enclosure(bits + 2);
        Interval::from_bounds(&lo, &hi, bits)
    }

    /// Current enclosure radius; shrinks monotonically under refinement.
    pub fn radius(&self) -> f64 {
        let c = self.cache.read().unwrap();
        ((&c.1 - &c.0) / rat(2)).to_f64().unwrap_or(f64::NAN)
    }

    /// Certified comparison with an integer.
    pub fn cmp_int(&self, n: i64) -> std::cmp::Ordering {
        let r = rat(n);
        if self.poly.eval_rational(&r).is_zero() {
            let (lo, hi) = self.enclosure(8);
            if lo <= r && r <= hi {
                return std::cmp::Ordering::Equal;
            }
        }
        let mut bits = 16;
        loop {
            let (lo, hi) = self.enclosure(bits);
            if hi < r {
                return std::cmp::Ordering::Less;
            }
            if lo > r {
                return std::cmp::Ordering::Greater;
            }
            bits *= 2;
        }
    }

    /// Whether `poly` shows a cheap sign of reducibility (rational root at degree >= 2).
    pub fn reducibility_hint(&self) -> Option<String> {
        if self.poly.degree() >= 2 {
            if let Some(r) = self.poly.rational_root(1_000_000) {
                return Some(format!("{} has the rational root {r}", self.poly));
            }
        }
        None
    }
}

pub(crate) fn check_base(q: &AlgebraicNumber) -> Result<()> {
    if q.cmp_int(1) != std::cmp::Ordering::Greater {
        return Err(SpectraError::Precondition(format!(
            "base must exceed 1, got {}",
            q.to_f64()
        )));
    }
    Ok(())
}
