use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::algebraic::{Base, ZqElement, ZqRing};
use crate::error::{precondition, Result};

/// Coefficients `s_0, ..., s_n` of `sum s_i q^i` with `|s_i| <= height`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DigitString {
    pub digits: Vec<i64>,
    pub height: i64,
}

impl DigitString {
    pub fn new(digits: Vec<i64>, height: i64) -> Result<Self> {
        if height < 0 {
            return precondition("height must be nonnegative");
        }
        if let Some(s) = digits.iter().find(|s| s.abs() > height) {
            return precondition(format!("digit {s} exceeds height {height}"));
        }
        Ok(DigitString { digits, height })
    }

    pub fn degree(&self) -> usize {
        self.digits.len().saturating_sub(1)
    }

    /// Horner evaluation in floating point.
    pub fn value_f64(&self, q: f64) -> f64 {
        self.digits.iter().rev().fold(0.0, |acc, &s| acc * q + s as f64)
    }
}

/// Canonical `Z[q]` vector of a digit string.
pub fn zq_canonicalize(digits: &DigitString, base: &Base) -> Result<ZqElement> {
    base.zq()?.from_digits(&digits.digits)
}

/// Certified order of two `Z[q]` elements.
pub fn zq_compare(ring: &ZqRing, a: &ZqElement, b: &ZqElement) -> Result<Ordering> {
    ring.cmp(a, b)
}
