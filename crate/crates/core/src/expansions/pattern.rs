use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::algebraic::{FieldElem, NumberField};
use crate::error::{Result, SpectraError};

/// Membership of indices at or beyond the threshold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Eventual {
    In,
    Out,
    /// `bits[(i - threshold) % len]`.
    Periodic(Vec<bool>),
    /// Not known; capacities become two-sided bounds.
    Unknown,
}

/// A set `P` of positive integers: an explicit finite part below `threshold`
/// and a rule for every index from `threshold` on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignPattern {
    explicit: BTreeSet<usize>,
    threshold: usize,
    eventual: Eventual,
}

/// Certified bounds on `m * sum_(i in P) q^-i`; equal for fully known patterns.
#[derive(Clone, Debug)]
pub struct Capacity {
    pub lo: FieldElem,
    pub hi: FieldElem,
}

impl Capacity {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }
}

impl SignPattern {
    /// Explicit members at or beyond `threshold` are folded in by raising the
    /// threshold, rotating a periodic rule to keep its phase.
    pub fn new(explicit: impl IntoIterator<Item = usize>, threshold: usize, eventual: Eventual) -> Result<Self> {
        let explicit: BTreeSet<usize> = explicit.into_iter().collect();
        if explicit.contains(&0) {
            return Err(SpectraError::Parse("pattern indices start at 1".into()));
        }
        if let Eventual::Periodic(bits) = &eventual {
            if bits.is_empty() {
                return Err(SpectraError::Parse("empty period".into()));
            }
        }
        let threshold = threshold.max(1);
        let raw = SignPattern {
            explicit: explicit.clone(),
            threshold,
            eventual: eventual.clone(),
        };
        let top = explicit.iter().next_back().map_or(threshold, |&i| (i + 1).max(threshold));
        if top == threshold {
            return Ok(raw);
        }
        let member = |i: usize| explicit.contains(&i) || raw.member(i) == Some(true);
        let folded = (1..top).filter(|&i| member(i)).collect();
        let eventual = match eventual {
            Eventual::Periodic(bits) => {
                let shift = (top - threshold) % bits.len();
                let mut b = bits.clone();
                b.rotate_left(shift);
                Eventual::Periodic(b)
            }
            e => e,
        };
        Ok(SignPattern {
            explicit: folded,
            threshold: top,
            eventual,
        })
    }

    /// Every positive index.
    pub fn all() -> Self {
        SignPattern {
            explicit: BTreeSet::new(),
            threshold: 1,
            eventual: Eventual::In,
        }
    }

    pub fn finite(members: impl IntoIterator<Item = usize>) -> Result<Self> {
        Self::new(members, 1, Eventual::Out)
    }

    /// `i in P` iff `i % period` is in `residues`.
    pub fn residues(period: usize, residues: &[usize]) -> Result<Self> {
        if period == 0 {
            return Err(SpectraError::Parse("period must be positive".into()));
        }
        let bits = (0..period).map(|j| residues.contains(&((j + 1) % period))).collect();
        Self::new([], 1, Eventual::Periodic(bits))
    }

    pub fn threshold(&self) -> usize {
        self.threshold
    }

    pub fn eventual(&self) -> &Eventual {
        &self.eventual
    }

    pub fn explicit(&self) -> &BTreeSet<usize> {
        &self.explicit
    }

    fn rule(&self, i: usize) -> Option<bool> {
        match &self.eventual {
            Eventual::In => Some(true),
            Eventual::Out => Some(false),
            Eventual::Periodic(bits) => Some(bits[(i - self.threshold) % bits.len()]),
            Eventual::Unknown => None,
        }
    }

    /// Membership of `i >= 1`; `None` past the threshold of an unknown rule.
    pub fn member(&self, i: usize) -> Option<bool> {
        if i < self.threshold {
            Some(self.explicit.contains(&i))
        } else {
            self.rule(i)
        }
    }

    /// `P ∪ {1, ..., k}`.
    /// Whether `digits` obey the sign rules: `s_0 = -1`, `s_i` in `0..=m` on `P`,
    /// `-m..=0` off `P`, and 0 where membership is unknown.
    pub fn admits(&self, digits: &[i64], m: i64) -> bool {
        digits.first() == Some(&-1)
            && digits.iter().enumerate().skip(1).all(|(i, &s)| match self.member(i) {
                Some(true) => (0..=m).contains(&s),
                Some(false) => (-m..=0).contains(&s),
                None => s == 0,
            })
    }

    pub fn with_prefix(&self, k: usize) -> Self {
        let top = self.threshold.max(k + 1);
        let explicit = (1..top)
            .filter(|&i| i <= k || self.member(i) == Some(true))
            .collect();
        let eventual = match &self.eventual {
            Eventual::Periodic(bits) => {
                let mut b = bits.clone();
                b.rotate_left((top - self.threshold) % bits.len());
                Eventual::Periodic(b)
            }
            e => e.clone(),
        };
        SignPattern {
            explicit,
            threshold: top,
            eventual,
        }
    }

    /// Bounds on `m * sum_(i in P) q^-i`, exact in `Q(q)`.
    pub fn capacity(&self, k: &NumberField, m: i64) -> Result<Capacity> {
        let inv_q = k.inv(&k.gen())?;
        let mut pow = k.int(1);
        let mut finite = k.zero();
        for i in 1..self.threshold {
            pow = k.mul(&pow, &inv_q);
            if self.explicit.contains(&i) {
                finite = k.add(&finite, &pow);
            }
        }
        // pow = q^-(threshold - 1)
        let q_minus_one_inv = k.inv(&k.add_int(&k.gen(), -1))?;
        let full_tail = k.mul(&pow, &q_minus_one_inv);
        let (lo_tail, hi_tail) = match &self.eventual {
            Eventual::In => (full_tail.clone(), full_tail),
            Eventual::Out => (k.zero(), k.zero()),
            Eventual::Unknown => (k.zero(), full_tail),
            Eventual::Periodic(bits) => {
                let len = bits.len() as i64;
                let mut block = k.zero();
                let mut p = pow.clone();
                for &b in bits {
                    p = k.mul(&p, &inv_q);
                    if b {
                        block = k.add(&block, &p);
                    }
                }
                // block / (1 - q^-len)
                let ql = k.pow_q(-len)?;
                let denom = k.sub(&k.int(1), &ql);
                let t = k.mul(&block, &k.inv(&denom)?);
                (t.clone(), t)
            }
        };
        Ok(Capacity {
            lo: k.scale_int(&k.add(&finite, &lo_tail), m),
            hi: k.scale_int(&k.add(&finite, &hi_tail), m),
        })
    }

    /// Parses `explicit:2,4;eventual:in;threshold:6`; the eventual rule is one of
    /// `in`, `out`, `unknown` or `periodic:0110`.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |why: &str| SpectraError::Parse(format!("pattern {text:?}: {why}"));
        let mut explicit = vec![];
        let mut threshold = None;
        let mut eventual = None;
        for part in text.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, val) = part.split_once(':').ok_or_else(|| bad("expected key:value"))?;
            match key.trim() {
                "explicit" => {
                    for x in val.split(',').map(str::trim).filter(|x| !x.is_empty()) {
                        explicit.push(x.parse::<usize>().map_err(|_| bad("bad index"))?);
                    }
                }
                "threshold" => {
                    threshold = Some(val.trim().parse::<usize>().map_err(|_| bad("bad threshold"))?)
                }
                "eventual" => {
                    let v = val.trim();
                    eventual = Some(match v {
                        "in" => Eventual::In,
                        "out" => Eventual::Out,
                        "unknown" => Eventual::Unknown,
                        _ => {
                            let bits = v
                                .strip_prefix("periodic:")
                                .ok_or_else(|| bad("unknown eventual rule"))?;
                            Eventual::Periodic(
                                bits.chars()
                                    .map(|c| match c {
                                        '1' => Ok(true),
                                        '0' => Ok(false),
                                        _ => Err(bad("period must be 0/1")),
                                    })
                                    .collect::<Result<_>>()?,
                            )
                        }
                    })
                }
                _ => return Err(bad("unknown key")),
            }
        }
        let top = explicit.iter().max().map_or(1, |&i| i + 1);
        Self::new(explicit, threshold.unwrap_or(top), eventual.unwrap_or(Eventual::Out))
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ex: Vec<String> = self.explicit.iter().map(|i| i.to_string()).collect();
        let ev = match &self.eventual {
            Eventual::In => "in".to_string(),
            Eventual::Out => "out".to_string(),
            Eventual::Unknown => "unknown".to_string(),
            Eventual::Periodic(b) => format!(
                "periodic:{}",
                b.iter().map(|&x| if x { '1' } else { '0' }).collect::<String>()
            ),
        };
        write!(f, "explicit:{};eventual:{};threshold:{}", ex.join(","), ev, self.threshold)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraic::Base;

    fn field(q: &str) -> NumberField {
        Base::numeric(q, 1e-9).unwrap().field()
    }

    #[test]
    fn parse_and_membership() {
        let p = SignPattern::parse("explicit:2,4;eventual:in;threshold:6").unwrap();
        let got: Vec<bool> = (1..9).map(|i| p.member(i).unwrap()).collect();
        assert_eq!(got, [false, true, false, true, false, true, true, true]);
        assert_eq!(SignPattern::parse(&p.to_string()).unwrap(), p);
        assert!(SignPattern::parse("explicit:0").is_err());
        assert!(SignPattern::parse("eventual:sometimes").is_err());
    }

    #[test]
    fn folding_keeps_periodic_phase() {
        let even = SignPattern::residues(2, &[0]).unwrap();
        let p = SignPattern::new([3], 1, Eventual::Periodic(vec![false, true])).unwrap();
        for i in 1..20 {
            assert_eq!(p.member(i).unwrap(), i == 3 || even.member(i).unwrap());
        }
    }

    #[test]
    fn capacities() {
        let k = field("1.5");
        let c = SignPattern::all().capacity(&k, 1).unwrap();
        assert_eq!(k.to_rational(&c.lo).unwrap(), num_rational::BigRational::from_integer(2.into()));
        let k = field("1.2");
        let c = SignPattern::residues(2, &[0]).unwrap().capacity(&k, 1).unwrap();
        // 1 / (q^2 - 1) = 25 / 11
        assert_eq!(
            k.to_rational(&c.lo).unwrap(),
            num_rational::BigRational::new(25.into(), 11.into())
        );
        let k = field("1.9");
        let c = SignPattern::finite([1]).unwrap().capacity(&k, 1).unwrap();
        assert!(k.approx(&c.hi) < 1.0);
        let u = SignPattern::new([1], 3, Eventual::Unknown).unwrap().capacity(&k, 1).unwrap();
        assert!(!u.is_exact());
    }

    #[test]
    fn prefix_union() {
        let p = SignPattern::residues(2, &[1]).unwrap().with_prefix(4);
        let got: Vec<bool> = (1..9).map(|i| p.member(i).unwrap()).collect();
        assert_eq!(got, [true, true, true, true, true, false, true, false]);
        let f = SignPattern::finite([7]).unwrap().with_prefix(2);
        let got: Vec<bool> = (1..9).map(|i| f.member(i).unwrap()).collect();
        assert_eq!(got, [true, true, false, false, false, false, true, false]);
    }
}
