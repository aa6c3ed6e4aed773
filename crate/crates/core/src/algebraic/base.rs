use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::classify::{classify_base, ClassTag, NumberClass};
use super::field::NumberField;
use super::number::{check_base, AlgebraicNumber};
use super::poly::IntPolynomial;
use super::zq::ZqRing;
use crate::error::{precondition, Result, SpectraError};

/// Default relative tolerance for numeric-mode deduplication.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// A base `q > 1`: either an algebraic number with certified enclosure, or a
/// decimal value used in numeric mode with a declared comparison tolerance.
#[derive(Clone, Debug)]
pub enum Base {
    Algebraic(Arc<AlgebraicNumber>),
    Numeric {
        text: String,
        value: BigRational,
        tolerance: f64,
    },
}

/// JSON description of a base.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct BaseSpec {
    pub poly: Vec<String>,
    pub root: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decimal: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

/// Parses an exact decimal such as `1.35`, `-2`, `3e-2` or a fraction `7/5`.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || SpectraError::Parse(format!("not a rational number: {text:?}"));
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (mant, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let n = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| bad())?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut r = if scale >= 0 {
        BigRational::from_integer(n * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(n, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        r = -r;
    }
    Ok(r)
}

impl Base {
    /// Selects the `index`-th real root above 1 (0-based, ascending).
    pub fn from_root_index(poly: &IntPolynomial, index: usize) -> Result<Self> {
        let mut seen = 0;
        for i in 0.. {
            let q = match AlgebraicNumber::from_root_index(poly, i) {
                Ok(q) => q,
                Err(_) => break,
            };
            if q.cmp_int(1) == Ordering::Greater {
                if seen == index {
                    return Ok(Base::Algebraic(Arc::new(q)));
                }
                seen += 1;
            }
        }
        precondition(format!("root index {index} out of range: {seen} real roots above 1"))
    }

    pub fn from_interval(poly: &IntPolynomial, lo: BigRational, hi: BigRational) -> Result<Self> {
        let q = AlgebraicNumber::from_interval(poly, lo, hi)?;
        check_base(&q)?;
        Ok(Base::Algebraic(Arc::new(q)))
    }

    /// Parses `"lo..hi"` and selects the root in that interval.
    pub fn from_interval_text(poly: &IntPolynomial, text: &str) -> Result<Self> {
        let (lo, hi) = text
            .split_once("..")
            .ok_or_else(|| SpectraError::Parse(format!("expected lo..hi, got {text:?}")))?;
        Self::from_interval(poly, parse_rational(lo)?, parse_rational(hi)?)
    }

    pub fn from_algebraic(q: AlgebraicNumber) -> Result<Self> {
        check_base(&q)?;
        Ok(Base::Algebraic(Arc::new(q)))
    }

    /// Integer base `n >= 2`.
    pub fn integer(n: i64) -> Result<Self> {
        Self::from_algebraic(AlgebraicNumber::from_integer(n))
    }

    /// Decimal base handled in numeric mode.
    pub fn numeric(text: &str, tolerance: f64) -> Result<Self> {
        let value = parse_rational(text)?;
        if value <= BigRational::one() {
            return precondition(format!("base must exceed 1, got {text}"));
        }
        if !(tolerance.is_finite() && tolerance >= 0.0) {
            return precondition("tolerance must be a nonnegative finite number");
        }
        Ok(Base::Numeric {
            text: text.trim().to_string(),
            value,
            tolerance,
        })
    }

    /// The base as an algebraic number; decimals become degree-one numbers.
    pub fn algebraic(&self) -> Arc<AlgebraicNumber> {
        match self {
            Base::Algebraic(q) => q.clone(),
            Base::Numeric { value, .. } => Arc::new(AlgebraicNumber::from_rational(value)),
        }
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, Base::Numeric { .. })
    }

    pub fn tolerance(&self) -> f64 {
        match self {
            Base::Algebraic(_) => DEFAULT_TOLERANCE,
            Base::Numeric { tolerance, .. } => *tolerance,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Base::Algebraic(q) => q.to_f64(),
            Base::Numeric { value, .. } => value.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// Exact `Z[q]` kernel, available for algebraic integers only.
    pub fn zq(&self) -> Result<ZqRing> {
        match self {
            Base::Algebraic(q) => ZqRing::new(q.clone()),
            Base::Numeric { .. } => Err(SpectraError::ExactModeUnavailable),
        }
    }

    pub fn field(&self) -> NumberField {
        NumberField::new(self.algebraic())
    }

    /// Certified comparison with an integer.
    pub fn cmp_int(&self, n: i64) -> Ordering {
        match self {
            Base::Algebraic(q) => q.cmp_int(n),
            Base::Numeric { value, .. } => value.cmp(&BigRational::from_integer(n.into())),
        }
    }

    /// Pisot classification; a decimal base is treated as the exact rational it spells.
    pub fn classify(&self, target_radius: f64, max_bits: u32) -> Result<NumberClass> {
        classify_base(&self.algebraic(), target_radius, max_bits)
    }

    pub fn is_pisot(&self, max_bits: u32) -> Result<bool> {
        let c = self.classify(1e-12, max_bits)?;
        if c.tag == ClassTag::Inconclusive {
            return Err(SpectraError::Inconclusive { bits: c.bits });
        }
        Ok(c.tag.is_pisot())
    }

    pub fn spec(&self) -> BaseSpec {
        let q = self.algebraic();
        let poly = q.poly().coeffs().iter().map(|c| c.to_string()).collect();
        match self {
            Base::Algebraic(_) => BaseSpec {
                poly,
                root: q.to_f64(),
                decimal: None,
                tolerance: None,
            },
            Base::Numeric { text, tolerance, .. } => BaseSpec {
                poly,
                root: q.to_f64(),
                decimal: Some(text.clone()),
                tolerance: Some(*tolerance),
            },
        }
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Base::Algebraic(q) => write!(f, "root {:.10} of {}", q.to_f64(), q.poly()),
            Base::Numeric { text, .. } => write!(f, "{text}"),
        }
    }
}
