use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::interval::{eval_rational_poly, Interval};
use super::number::AlgebraicNumber;
use super::poly::RatPoly;
use crate::error::{Result, SpectraError};

const MAX_SIGN_BITS: u32 = 1 << 14;

/// Element of `Q(q)` in the power basis `1, q, ..., q^(d-1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElem(pub(crate) Vec<BigRational>);

impl FieldElem {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }
}

/// Exact arithmetic in `Q(q) = Q[x] / (minpoly)`, with certified signs.
///
/// Irreducibility of the minimal polynomial is an input contract: a nonzero
/// element is then a nonzero real number and sign refinement terminates.
#[derive(Clone, Debug)]
pub struct NumberField {
    alg: Arc<AlgebraicNumber>,
    /// Monic modulus: `x^d = -(m_0 + m_1 x + ... + m_(d-1) x^(d-1))`.
    modulus: Vec<BigRational>,
}

impl NumberField {
    pub fn new(alg: Arc<AlgebraicNumber>) -> Self {
        let p = alg.poly().to_rat().monic();
        let d = p.degree();
        let modulus = p.coeffs[..d].to_vec();
        NumberField { alg, modulus }
    }

    pub fn base(&self) -> &Arc<AlgebraicNumber> {
        &self.alg
    }

    pub fn degree(&self) -> usize {
        self.modulus.len()
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem(vec![BigRational::zero(); self.degree()])
    }

    pub fn rational(&self, r: BigRational) -> FieldElem {
        let mut e = self.zero();
        e.0[0] = r;
        e
    }

    pub fn int(&self, n: i64) -> FieldElem {
        self.rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// The generator `q`.
    pub fn gen(&self) -> FieldElem {
        self.reduce(vec![BigRational::zero(), BigRational::one()])
    }

    fn reduce(&self, mut c: Vec<BigRational>) -> FieldElem {
        let d = self.degree();
        while c.len() > d {
            let top = c.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let off = c.len() - d;
            for (i, m) in self.modulus.iter().enumerate() {
                c[off + i] -= &top * m;
            }
        }
        c.resize(d, BigRational::zero());
        FieldElem(c)
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        FieldElem(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        FieldElem(a.0.iter().zip(&b.0).map(|(x, y)| x - y).collect())
    }

    pub fn neg(&self, a: &FieldElem) -> FieldElem {
        FieldElem(a.0.iter().map(|x| -x).collect())
    }

    pub fn add_int(&self, a: &FieldElem, n: i64) -> FieldElem {
        let mut r = a.clone();
        r.0[0] += BigRational::from_integer(BigInt::from(n));
        r
    }

    pub fn scale_int(&self, a: &FieldElem, n: i64) -> FieldElem {
        let n = BigRational::from_integer(BigInt::from(n));
        FieldElem(a.0.iter().map(|x| x * &n).collect())
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let d = self.degree();
        let mut out = vec![BigRational::zero(); 2 * d - 1];
        for (i, x) in a.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        self.reduce(out)
    }

    /// `q * a`.
    pub fn mul_q(&self, a: &FieldElem) -> FieldElem {
        let mut c = Vec::with_capacity(self.degree() + 1);
        c.push(BigRational::zero());
        c.extend(a.0.iter().cloned());
        self.reduce(c)
    }

    /// `q * a + s`.
    pub fn shift_add(&self, a: &FieldElem, s: i64) -> FieldElem {
        self.add_int(&self.mul_q(a), s)
    }

    pub fn inv(&self, a: &FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return Err(SpectraError::Precondition("inverse of zero".into()));
        }
        // extended Euclid: track s with s*a = r (mod modulus)
        let mut f = self.modulus.clone();
        f.push(BigRational::one());
        let (mut r0, mut r1) = (RatPoly::new(f), RatPoly::new(a.0.clone()));
        let (mut s0, mut s1) = (RatPoly::new(vec![]), RatPoly::new(vec![BigRational::one()]));
        while !r1.is_zero() {
            let (quot, rem) = r0.div_rem(&r1);
            let s2 = s0.sub(&quot.mul(&s1));
            r0 = r1;
            r1 = rem;
            s0 = s1;
            s1 = s2;
        }
        if r0.degree() != 0 {
            return Err(SpectraError::MaybeReducible(
                "element shares a factor with the minimal polynomial".into(),
            ));
        }
        let c = r0.leading();
        Ok(self.reduce(s0.coeffs.iter().map(|x| x / &c).collect()))
    }

    /// `q^k` for any integer `k`.
    pub fn pow_q(&self, k: i64) -> Result<FieldElem> {
        let mut r = self.int(1);
        for _ in 0..k.unsigned_abs() {
            r = self.mul_q(&r);
        }
        if k < 0 {
            r = self.inv(&r)?;
        }
        Ok(r)
    }

    pub fn eval_interval(&self, a: &FieldElem, bits: u32) -> Interval {
        eval_rational_poly(&a.0, &self.alg.interval(bits))
    }

    /// Certified sign; exact zero detection through the coefficient vector.
    pub fn sign(&self, a: &FieldElem) -> Result<Ordering> {
        if a.is_zero() {
            return Ok(Ordering::Equal);
        }
        let mut bits = 64;
        while bits <= MAX_SIGN_BITS {
            if let Some(s) = self.eval_interval(a, bits).sign() {
                if s != Ordering::Equal {
                    return Ok(s);
                }
            }
            bits *= 2;
        }
        Err(SpectraError::MaybeReducible(
            "nonzero element with unresolvable sign".into(),
        ))
    }

    pub fn cmp(&self, a: &FieldElem, b: &FieldElem) -> Result<Ordering> {
        self.sign(&self.sub(a, b))
    }

    /// Nearly correctly rounded `f64` value.
    pub fn to_f64(&self, a: &FieldElem) -> Result<f64> {
        if a.is_zero() {
            return Ok(0.0);
        }
        let mut bits = 64;
        while bits <= MAX_SIGN_BITS {
            let iv = self.eval_interval(a, bits);
            if iv.sign().is_some_and(|s| s != Ordering::Equal) {
                let lo = iv.lo_rational();
                let hi = iv.hi_rational();
                let w = (&hi - &lo).abs();
                let tol = lo.abs().min(hi.abs()) * BigRational::new(BigInt::one(), BigInt::one() << 60);
                if w <= tol {
                    return Ok(iv.mid_f64());
                }
            }
            bits *= 2;
        }
        Err(SpectraError::MaybeReducible(
            "nonzero element with unresolvable value".into(),
        ))
    }

    /// Certified `floor(a)`.
    pub fn floor(&self, a: &FieldElem) -> Result<i64> {
        let guess = self.approx(a).floor();
        if !guess.is_finite() || guess.abs() > 9.0e15 {
            return Err(SpectraError::Overflow);
        }
        let mut f = guess as i64;
        while self.sign(&self.add_int(a, -f))? == Ordering::Less {
            f -= 1;
        }
        while self.sign(&self.add_int(a, -(f + 1)))? != Ordering::Less {
            f += 1;
        }
        Ok(f)
    }

    pub fn approx(&self, a: &FieldElem) -> f64 {
        self.to_f64(a)
            .unwrap_or_else(|_| self.eval_interval(a, 128).mid_f64())
    }

    /// Certified `a <= bound` for a rational bound.
    pub fn le_rational(&self, a: &FieldElem, bound: &BigRational) -> Result<bool> {
        let d = self.sub(a, &self.rational(bound.clone()));
        Ok(self.sign(&d)? != Ordering::Greater)
    }

    pub fn from_f64_exact(&self, x: f64) -> Option<FieldElem> {
        BigRational::from_float(x).map(|r| self.rational(r))
    }

    pub fn to_rational(&self, a: &FieldElem) -> Option<BigRational> {
        a.0[1..].iter().all(|c| c.is_zero()).then(|| a.0[0].clone())
    }

    pub fn q_f64(&self) -> f64 {
        self.alg.to_f64()
    }

    pub fn coeffs_f64(a: &FieldElem) -> Vec<f64> {
        a.0.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }
}
