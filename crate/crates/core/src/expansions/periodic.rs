use serde::Serialize;

use super::sequence::{DigitSequence, Tail};
use crate::algebraic::Base;
use crate::error::{Result, SpectraError};

#[derive(Clone, Debug, Serialize)]
pub struct PeriodicCompletion {
    pub sequence: DigitSequence,
    /// `s_0 + ... + s_n` over one period.
    pub digit_sum: i64,
}

/// Repeats a block whose value `sum s_i q^-i` is exactly zero.
pub fn periodic_completion(base: &Base, block: &[i64], height: i64) -> Result<PeriodicCompletion> {
    if block.is_empty() {
        return Err(SpectraError::Precondition("empty block".into()));
    }
    let k = base.field();
    // sum s_i q^(n-i), zero iff the value is
    let mut acc = k.zero();
    for &s in block {
        acc = k.shift_add(&acc, s);
    }
    if !acc.is_zero() {
        let n = block.len() as i32 - 1;
        return Err(SpectraError::NonzeroValue {
            value: k.approx(&acc) * base.to_f64().powi(-n),
        });
    }
    Ok(PeriodicCompletion {
        sequence: DigitSequence::new(vec![], Tail::Periodic(block.to_vec()), height)?,
        digit_sum: block.iter().sum(),
    })
}
