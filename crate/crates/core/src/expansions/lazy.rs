use std::cmp::Ordering;

use serde::Serialize;

use super::pattern::{Capacity, Eventual, SignPattern};
use super::sequence::{DigitSequence, Tail};
use crate::algebraic::{Base, FieldElem, NumberField};
use crate::error::{precondition, Result, SpectraError};

/// One emitted digit with the corridor it was chosen in (floating copies).
#[derive(Clone, Debug, Serialize)]
pub struct LazyStep {
    pub index: usize,
    pub digit: i64,
    /// Scaled remaining target `q^i (1 + sum_(j<=i) s_j q^-j)` after the step.
    pub residual: f64,
    pub min_tail: f64,
    pub max_tail: f64,
}

/// Streaming lazy expansion: `s_0 = -1`, `s_i` in `0..=m` for `i` in `P`,
/// `s_i` in `-m..=0` otherwise, with `sum s_i q^-i = 0`.
///
/// Each digit has the least modulus keeping the scaled remainder between the
/// smallest and largest value the remaining tail can still produce. Indices
/// past the threshold of an unknown pattern only take the digit 0.
pub struct LazyExpansion {
    field: NumberField,
    m: i64,
    pattern: SignPattern,
    capacity: Capacity,
    rem: FieldElem,
    max_tail: FieldElem,
    min_tail: FieldElem,
    next: usize,
}

impl LazyExpansion {
    pub fn new(base: &Base, m: i64, pattern: SignPattern) -> Result<Self> {
        if m < 1 {
            return precondition("height m must be at least 1");
        }
        if base.cmp_int(m + 1) != Ordering::Less {
            return precondition("lazy expansion needs m > q - 1");
        }
        let k = base.field();
        let capacity = pattern.capacity(&k, m)?;
        let one = k.int(1);
        if k.cmp(&capacity.hi, &one)? == Ordering::Less {
            return Err(SpectraError::CapacityViolated {
                capacity: k.approx(&capacity.hi),
            });
        }
        if k.cmp(&capacity.lo, &one)? == Ordering::Less {
            return Err(SpectraError::HorizonTooShort {
                horizon: pattern.threshold(),
                what: format!(
                    "capacity bounds [{:.6}, {:.6}] straddle 1",
                    k.approx(&capacity.lo),
                    k.approx(&capacity.hi)
                ),
            });
        }
        // m * sum of q^-i over the indices whose membership is known
        let known = match pattern.eventual() {
            Eventual::Unknown => {
                let t = pattern.threshold() as i64;
                let geo = k.sub(&k.int(1), &k.pow_q(1 - t)?);
                k.scale_int(&k.mul(&geo, &k.inv(&k.add_int(&k.gen(), -1))?), m)
            }
            _ => k.scale_int(&k.inv(&k.add_int(&k.gen(), -1))?, m),
        };
        let max_tail = capacity.lo.clone();
        let min_tail = k.sub(&max_tail, &known);
        Ok(LazyExpansion {
            field: k,
            m,
            pattern,
            capacity,
            rem: one,
            max_tail,
            min_tail,
            next: 0,
        })
    }

    pub fn capacity(&self) -> &Capacity {
        &self.capacity
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    /// Scaled remainder after the digits emitted so far.
    pub fn remainder(&self) -> &FieldElem {
        &self.rem
    }

    fn step(&mut self) -> Result<LazyStep> {
        let k = &self.field;
        let i = self.next;
        self.next += 1;
        if i == 0 {
            return Ok(LazyStep {
                index: 0,
                digit: -1,
                residual: 1.0,
                min_tail: k.approx(&self.min_tail),
                max_tail: k.approx(&self.max_tail),
            });
        }
        let member = self.pattern.member(i);
        let m = self.m;
        let mut max_t = k.mul_q(&self.max_tail);
        let mut min_t = k.mul_q(&self.min_tail);
        match member {
            Some(true) => max_t = k.add_int(&max_t, -m),
            Some(false) => min_t = k.add_int(&min_t, m),
            None => {}
        }
        let qr = k.mul_q(&self.rem);
        let s = match member {
            Some(true) => {
                let need = -k.floor(&k.neg(&k.sub(&qr, &max_t)))?;
                need.max(0)
            }
            Some(false) => k.floor(&k.sub(&qr, &min_t))?.min(0),
            None => 0,
        };
        let r = k.add_int(&qr, -s);
        let inside = k.cmp(&r, &min_t)? != Ordering::Less && k.cmp(&r, &max_t)? != Ordering::Greater;
        if s.abs() > m || !inside {
            return Err(SpectraError::HorizonTooShort {
                horizon: i,
                what: "no digit keeps the remainder inside the corridor".into(),
            });
        }
        self.rem = r;
        self.max_tail = max_t;
        self.min_tail = min_t;
        Ok(LazyStep {
            index: i,
            digit: s,
            residual: k.approx(&self.rem),
            min_tail: k.approx(&self.min_tail),
            max_tail: k.approx(&self.max_tail),
        })
    }
}

impl Iterator for LazyExpansion {
    type Item = Result<LazyStep>;

    fn next(&mut self) -> Option<Self::Item> {
        Some(self.step())
    }
}

/// Digits `s_0, ..., s_N` of the lazy constrained expansion; the tail is zero
/// when the remainder vanishes exactly.
pub fn lazy_constrained(base: &Base, m: i64, pattern: &SignPattern, horizon: usize) -> Result<DigitSequence> {
    let mut it = LazyExpansion::new(base, m, pattern.clone())?;
    let mut digits = Vec::with_capacity(horizon + 1);
    for _ in 0..=horizon {
        digits.push(it.step()?.digit);
        if it.rem.is_zero() {
            return DigitSequence::new(digits, Tail::Zero, m);
        }
    }
    DigitSequence::new(digits, Tail::Truncated, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_indices_give_lazy_expansion_of_one() {
        let b = Base::numeric("1.5", 1e-9).unwrap();
        let s = lazy_constrained(&b, 1, &SignPattern::all(), 40).unwrap();
        assert_eq!(s.prefix[0], -1);
        assert!(s.prefix[1..].iter().all(|&d| d == 0 || d == 1));
        let v: f64 = s.prefix.iter().enumerate().map(|(i, &d)| d as f64 * 1.5f64.powi(-(i as i32))).sum();
        assert!(v.abs() <= 1.5f64.powi(-40) * 2.0);
    }

    #[test]
    fn even_pattern_signs() {
        let b = Base::numeric("1.2", 1e-9).unwrap();
        let p = SignPattern::residues(2, &[0]).unwrap();
        let s = lazy_constrained(&b, 1, &p, 60).unwrap();
        for (i, &d) in s.prefix.iter().enumerate().skip(1) {
            if i % 2 == 0 {
                assert!((0..=1).contains(&d));
            } else {
                assert!((-1..=0).contains(&d));
            }
        }
    }

    #[test]
    fn capacity_violation_rejected() {
        let b = Base::numeric("1.9", 1e-9).unwrap();
        let e = lazy_constrained(&b, 1, &SignPattern::finite([1]).unwrap(), 10).unwrap_err();
        match e {
            SpectraError::CapacityViolated { capacity } => assert!((capacity - 1.0 / 1.9).abs() < 1e-12),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn height_must_exceed_q_minus_one() {
        let b = Base::numeric("2.5", 1e-9).unwrap();
        assert!(lazy_constrained(&b, 1, &SignPattern::all(), 10).is_err());
    }
}
