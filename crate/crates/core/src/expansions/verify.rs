use std::cmp::Ordering;

use serde::Serialize;

use super::sequence::DigitSequence;
use crate::algebraic::{Base, FieldElem};
use crate::error::{Result, SpectraError};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualCertificate {
    pub horizon: usize,
    /// `|sum_(i<=N) s_i q^-i - target|`.
    pub residual: f64,
    /// `m q^-N / (q - 1)`.
    pub tail_bound: f64,
    /// Decided exactly in `Q(q)`.
    pub pass: bool,
}

/// Checks the partial sum to `horizon` against `target` and the tail bound.
pub fn verify_expansion(
    base: &Base,
    seq: &DigitSequence,
    target: &FieldElem,
    horizon: usize,
) -> Result<ResidualCertificate> {
    let digits = seq.take(horizon + 1).ok_or_else(|| SpectraError::HorizonTooShort {
        horizon,
        what: format!("sequence has only {} digits", seq.prefix.len()),
    })?;
    let k = base.field();
    // D = sum s_i q^(N-i) - target q^N; pass iff |D| (q - 1) <= m
    let mut acc = k.zero();
    for &s in &digits {
        acc = k.shift_add(&acc, s);
    }
    let d = k.sub(&acc, &k.mul(target, &k.pow_q(horizon as i64)?));
    let abs = if k.sign(&d)? == Ordering::Less { k.neg(&d) } else { d };
    let lhs = k.sub(&k.mul_q(&abs), &abs);
    let pass = k.cmp(&lhs, &k.int(seq.height))? != Ordering::Greater;
    let q = base.to_f64();
    let scale = q.powi(-(horizon as i32));
    Ok(ResidualCertificate {
        horizon,
        residual: k.approx(&abs) * scale,
        tail_bound: seq.height as f64 * scale / (q - 1.0),
        pass,
    })
}
