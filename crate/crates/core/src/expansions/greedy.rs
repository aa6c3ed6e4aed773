use std::cmp::Ordering;

use super::sequence::{DigitSequence, Tail};
use crate::algebraic::{Base, FieldElem};
use crate::error::{precondition, Result};

/// Greedy digits of `x = sum_(i>=1) c_i q^-i` with `c_i` in `0..=m`, to `n` digits.
///
/// The returned sequence has `s_0 = 0`; the tail is zero once the remainder
/// vanishes exactly.
pub fn greedy_expansion(base: &Base, m: i64, x: &FieldElem, n: usize) -> Result<DigitSequence> {
    if m < 1 {
        return precondition("height m must be at least 1");
    }
    let k = base.field();
    if k.sign(x)? == Ordering::Less {
        return precondition("greedy target must be nonnegative");
    }
    // (q - 1) x <= m
    let scaled = k.sub(&k.mul_q(x), x);
    if k.cmp(&scaled, &k.int(m))? == Ordering::Greater {
        return precondition("greedy target exceeds m / (q - 1)");
    }
    let mut digits = vec![0];
    let mut r = x.clone();
    for _ in 0..n {
        if r.is_zero() {
            return DigitSequence::new(digits, Tail::Zero, m);
        }
        let qr = k.mul_q(&r);
        let c = k.floor(&qr)?.min(m);
        r = k.add_int(&qr, -c);
        digits.push(c);
    }
    let tail = if r.is_zero() { Tail::Zero } else { Tail::Truncated };
    DigitSequence::new(digits, tail, m)
}
