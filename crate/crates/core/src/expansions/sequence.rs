use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{precondition, Result};

/// What follows the stored prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tail {
    /// Generation stopped; later digits are unknown.
    Truncated,
    /// Every later digit is zero.
    Zero,
    /// The block repeats forever.
    Periodic(Vec<i64>),
}

/// Coefficient sequence `s_0, s_1, ...` of `sum s_i q^-i`, bounded by `height`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitSequence {
    pub prefix: Vec<i64>,
    pub tail: Tail,
    pub height: i64,
}

impl DigitSequence {
    pub fn new(prefix: Vec<i64>, tail: Tail, height: i64) -> Result<Self> {
        let period: &[i64] = match &tail {
            Tail::Periodic(p) if p.is_empty() => return precondition("empty period"),
            Tail::Periodic(p) => p,
            _ => &[],
        };
        if prefix.iter().chain(period).any(|s| s.abs() > height) {
            return precondition(format!("digit exceeds height {height}"));
        }
        Ok(DigitSequence { prefix, tail, height })
    }

    /// Digit `s_i`, or `None` past a truncation.
    pub fn get(&self, i: usize) -> Option<i64> {
        if let Some(&s) = self.prefix.get(i) {
            return Some(s);
        }
        let j = i - self.prefix.len();
        match &self.tail {
            Tail::Truncated => None,
            Tail::Zero => Some(0),
            Tail::Periodic(p) => Some(p[j % p.len()]),
        }
    }

    /// The first `n` digits, if known.
    pub fn take(&self, n: usize) -> Option<Vec<i64>> {
        (0..n).map(|i| self.get(i)).collect()
    }

    /// Number of known digits, `None` when unbounded.
    pub fn known_len(&self) -> Option<usize> {
        matches!(self.tail, Tail::Truncated).then_some(self.prefix.len())
    }

    /// Whether only finitely many digits are nonzero; `None` if truncated.
    pub fn finitely_supported(&self) -> Option<bool> {
        match &self.tail {
            Tail::Truncated => None,
            Tail::Zero => Some(true),
            Tail::Periodic(p) => Some(p.iter().all(|&s| s == 0)),
        }
    }
}

impl Serialize for DigitSequence {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = ser.serialize_struct("DigitSequence", 4)?;
        st.serialize_field("preperiod", &self.prefix)?;
        let period: Option<Vec<i64>> = match &self.tail {
            Tail::Truncated => None,
            Tail::Zero => Some(vec![0]),
            Tail::Periodic(p) => Some(p.clone()),
        };
        st.serialize_field("period", &period)?;
        st.serialize_field("height", &self.height)?;
        st.serialize_field("finitely_supported", &self.finitely_supported())?;
        st.end()
    }
}
