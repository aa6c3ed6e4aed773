use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Closed interval `[lo, hi] / 2^bits` with outward rounding on every operation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: BigInt,
    hi: BigInt,
    bits: u32,
}

fn floor_div_pow2(x: &BigInt, bits: u32) -> BigInt {
    // `>>` on BigInt rounds toward negative infinity.
    x >> bits as usize
}

fn ceil_div_pow2(x: &BigInt, bits: u32) -> BigInt {
    -((-x) >> bits as usize)
}

impl Interval {
    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn point_int(n: &BigInt, bits: u32) -> Self {
        let v = n << bits as usize;
        Interval {
            lo: v.clone(),
            hi: v,
            bits,
        }
    }

    pub fn from_i64(n: i64, bits: u32) -> Self {
        Self::point_int(&BigInt::from(n), bits)
    }

    pub fn from_rational(r: &BigRational, bits: u32) -> Self {
        Self::from_bounds(r, r, bits)
    }

    /// Smallest grid interval containing `[lo, hi]`.
    pub fn from_bounds(lo: &BigRational, hi: &BigRational, bits: u32) -> Self {
        let scale = BigInt::from(1) << bits as usize;
        let l = (lo.numer() * &scale).div_floor(lo.denom());
        let h = (hi.numer() * &scale).div_ceil(hi.denom());
        Interval { lo: l, hi: h, bits }
    }

    pub fn add(&self, o: &Self) -> Self {
        debug_assert_eq!(self.bits, o.bits);
        Interval {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
            bits: self.bits,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        debug_assert_eq!(self.bits, o.bits);
        Interval {
            lo: &self.lo - &o.hi,
            hi: &self.hi - &o.lo,
            bits: self.bits,
        }
    }

    pub fn neg(&self) -> Self {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
            bits: self.bits,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        debug_assert_eq!(self.bits, o.bits);
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let mn = c.iter().min().unwrap();
        let mx = c.iter().max().unwrap();
        Interval {
            lo: floor_div_pow2(mn, self.bits),
            hi: ceil_div_pow2(mx, self.bits),
            bits: self.bits,
        }
    }

    pub fn mul_int(&self, n: &BigInt) -> Self {
        let a = &self.lo * n;
        let b = &self.hi * n;
        if n.is_negative() {
            Interval {
                lo: b,
                hi: a,
                bits: self.bits,
            }
        } else {
            Interval {
                lo: a,
                hi: b,
                bits: self.bits,
            }
        }
    }

    pub fn mul_rational(&self, r: &BigRational) -> Self {
        let a = &self.lo * r.numer();
        let b = &self.hi * r.numer();
        let (mn, mx) = if a <= b { (a, b) } else { (b, a) };
        Interval {
            lo: mn.div_floor(r.denom()),
            hi: mx.div_ceil(r.denom()),
            bits: self.bits,
        }
    }

    /// Certified sign: `None` when the interval straddles zero without being `{0}`.
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Certified comparison with a rational, `None` if undecided.
    pub fn cmp_rational(&self, r: &BigRational) -> Option<Ordering> {
        self.sub(&Self::from_rational(r, self.bits)).sign()
    }

    pub fn lo_rational(&self) -> BigRational {
        BigRational::new(self.lo.clone(), BigInt::from(1) << self.bits as usize)
    }

    pub fn hi_rational(&self) -> BigRational {
        BigRational::new(self.hi.clone(), BigInt::from(1) << self.bits as usize)
    }

    /// Outward-rounded `f64` bounds.
    pub fn to_f64_bounds(&self) -> (f64, f64) {
        let lo = self.lo_rational().to_f64().unwrap_or(f64::NEG_INFINITY);
        let hi = self.hi_rational().to_f64().unwrap_or(f64::INFINITY);
        (lo.next_down(), hi.next_up())
    }

    pub fn mid_f64(&self) -> f64 {
        BigRational::new(&self.lo + &self.hi, BigInt::from(2) << self.bits as usize)
            .to_f64()
            .unwrap_or(f64::NAN)
    }

    pub fn abs_upper_f64(&self) -> f64 {
        let (lo, hi) = self.to_f64_bounds();
        lo.abs().max(hi.abs())
    }
}

/// Evaluates `sum c_i x^i` for rational coefficients over an interval argument.
pub(crate) fn eval_rational_poly(coeffs: &[BigRational], x: &Interval) -> Interval {
    let bits = x.bits();
    let mut acc = Interval::from_i64(0, bits);
    for c in coeffs.iter().rev() {
        acc = acc.mul(x).add(&Interval::from_rational(c, bits));
    }
    acc
}

/// Evaluates `sum a_i x^i` for integer coefficients over a positive interval argument.
///
/// Positivity of `x` lets every power be bounded endpoint-wise, which is
/// tighter than Horner on wide intervals.
pub(crate) fn eval_int_poly_positive(coeffs: &[i64], x: &Interval) -> Interval {
    let bits = x.bits();
    let mut acc = Interval::from_i64(0, bits);
    let mut pow = Interval::from_i64(1, bits);
    for (i, &a) in coeffs.iter().enumerate() {
        if i > 0 {
            pow = pow.mul(x);
        }
        if a != 0 {
            acc = acc.add(&pow.mul_int(&BigInt::from(a)));
        }
    }
    acc
}
