use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::interval::{eval_int_poly_positive, Interval};
use super::number::AlgebraicNumber;
use crate::error::{Result, SpectraError};

const MAX_BITS: u32 = 1 << 13;

/// Canonical representative of an element of `Z[q]`: coefficients of
/// `1, q, ..., q^(d-1)` after reduction by the monic minimal polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ZqElement(Box<[i64]>);

impl ZqElement {
    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn from_coeffs(c: Vec<i64>) -> Self {
        ZqElement(c.into_boxed_slice())
    }
}

/// The lattice `Z[q]` for an algebraic integer `q`, with `i64` coordinates.
///
/// All arithmetic is checked; coordinate overflow surfaces as
/// [`SpectraError::Overflow`].
#[derive(Clone, Debug)]
pub struct ZqRing {
    alg: Arc<AlgebraicNumber>,
    red: Vec<i64>,
    pows: Vec<f64>,
    q: f64,
}

impl ZqRing {
    pub fn new(alg: Arc<AlgebraicNumber>) -> Result<Self> {
        if !alg.poly().is_monic() {
            return Err(SpectraError::ExactModeUnavailable);
        }
        let c = alg.poly().to_i64_vec().ok_or(SpectraError::Overflow)?;
        let d = c.len() - 1;
        let red = c[..d].to_vec();
        // correctly rounded powers from a tight enclosure
        let iv = alg.interval(256);
        let mut pow = Interval::from_i64(1, 256);
        let mut pows = Vec::with_capacity(d);
        for i in 0..d {
            if i > 0 {
                pow = pow.mul(&iv);
            }
            pows.push(pow.mid_f64());
        }
        let q = alg.to_f64();
        Ok(ZqRing { alg, red, pows, q })
    }

    pub fn base(&self) -> &Arc<AlgebraicNumber> {
        &self.alg
    }

    pub fn degree(&self) -> usize {
        self.red.len()
    }

    pub fn q_f64(&self) -> f64 {
        self.q
    }

    pub fn zero(&self) -> ZqElement {
        ZqElement(vec![0; self.degree()].into_boxed_slice())
    }

    pub fn int(&self, n: i64) -> ZqElement {
        let mut v = vec![0; self.degree()];
        v[0] = n;
        ZqElement(v.into_boxed_slice())
    }

    /// `q * x + s`.
    pub fn shift_add(&self, x: &ZqElement, s: i64) -> Result<ZqElement> {
        let d = self.degree();
        let top = x.0[d - 1];
        let mut out = vec![0i64; d];
        for i in 0..d {
            let lower = if i == 0 { 0 } else { x.0[i - 1] };
            let t = top.checked_mul(self.red[i]).ok_or(SpectraError::Overflow)?;
            out[i] = lower.checked_sub(t).ok_or(SpectraError::Overflow)?;
        }
        out[0] = out[0].checked_add(s).ok_or(SpectraError::Overflow)?;
        Ok(ZqElement(out.into_boxed_slice()))
    }

    /// Canonical vector of `sum s_i q^i` (digits in ascending order).
    pub fn from_digits(&self, digits: &[i64]) -> Result<ZqElement> {
        let mut acc = self.zero();
        for &s in digits.iter().rev() {
            acc = self.shift_add(&acc, s)?;
        }
        Ok(acc)
    }

    pub fn add(&self, a: &ZqElement, b: &ZqElement) -> Result<ZqElement> {
        a.0.iter()
            .zip(b.0.iter())
            .map(|(x, y)| x.checked_add(*y).ok_or(SpectraError::Overflow))
            .collect::<Result<Vec<_>>>()
            .map(ZqElement::from_coeffs)
    }

    pub fn sub(&self, a: &ZqElement, b: &ZqElement) -> Result<ZqElement> {
        a.0.iter()
            .zip(b.0.iter())
            .map(|(x, y)| x.checked_sub(*y).ok_or(SpectraError::Overflow))
            .collect::<Result<Vec<_>>>()
            .map(ZqElement::from_coeffs)
    }

    pub fn neg(&self, a: &ZqElement) -> ZqElement {
        ZqElement(a.0.iter().map(|x| -x).collect())
    }

    /// Floating value and a rigorous bound on its error.
    pub fn approx(&self, x: &ZqElement) -> (f64, f64) {
        let mut v = 0.0;
        let mut mag = 0.0;
        for (a, p) in x.0.iter().zip(&self.pows) {
            let t = *a as f64 * p;
            v += t;
            mag += t.abs();
        }
        let err = mag * (2 * self.degree() + 4) as f64 * f64::EPSILON;
        (v, err)
    }

    pub fn value_f64(&self, x: &ZqElement) -> f64 {
        self.approx(x).0
    }

    pub fn eval_interval(&self, x: &ZqElement, bits: u32) -> Interval {
        eval_int_poly_positive(&x.0, &self.alg.interval(bits))
    }

    /// Certified sign. A nonzero vector is a nonzero real number when the
    /// minimal polynomial is irreducible, so the refinement terminates.
    pub fn sign(&self, x: &ZqElement) -> Result<Ordering> {
        let (v, err) = self.approx(x);
        if v.abs() > err {
            return Ok(if v > 0.0 {
                Ordering::Greater
            } else {
                Ordering::Less
            });
        }
        if x.is_zero() {
            return Ok(Ordering::Equal);
        }
        let mut bits = 64;
        while bits <= MAX_BITS {
            match self.eval_interval(x, bits).sign() {
                Some(Ordering::Equal) | None => bits *= 2,
                Some(s) => return Ok(s),
            }
        }
        Err(SpectraError::MaybeReducible(
            "nonzero Z[q] vector evaluates to zero".into(),
        ))
    }

    pub fn cmp(&self, a: &ZqElement, b: &ZqElement) -> Result<Ordering> {
        if a == b {
            return Ok(Ordering::Equal);
        }
        let (va, ea) = self.approx(a);
        let (vb, eb) = self.approx(b);
        if (va - vb).abs() > (ea + eb) * 1.01 {
            return Ok(va.total_cmp(&vb));
        }
        self.sign(&self.sub(a, b)?)
    }

    /// Certified comparison with a rational number.
    pub fn cmp_rational(&self, x: &ZqElement, r: &BigRational) -> Result<Ordering> {
        if x.0[1..].iter().all(|&c| c == 0) {
            return Ok(BigRational::from_integer(BigInt::from(x.0[0])).cmp(r));
        }
        let (v, err) = self.approx(x);
        let rf = r.to_f64().unwrap_or(f64::NAN);
        if (v - rf).abs() > err + rf.abs() * 4.0 * f64::EPSILON {
            return Ok(v.total_cmp(&rf));
        }
        // an element with a nonzero irrational part is never rational
        let mut bits = 64;
        while bits <= MAX_BITS {
            if let Some(s) = self.eval_interval(x, bits).cmp_rational(r) {
                if s != Ordering::Equal {
                    return Ok(s);
                }
            }
            bits *= 2;
        }
        Err(SpectraError::MaybeReducible(
            "irrational Z[q] element equals a rational".into(),
        ))
    }

    pub fn is_rational_zero(&self, x: &ZqElement) -> bool {
        x.0.iter().all(|c| c.is_zero())
    }
}
