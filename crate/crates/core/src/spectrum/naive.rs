use std::collections::BTreeSet;

use crate::algebraic::ZqRing;
use crate::error::Result;

/// Every digit string of length `len` over `alphabet`, constant term first.
pub fn all_strings(alphabet: &[i64], len: usize) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|s| {
                alphabet.iter().map(move |&a| {
                    let mut t = s.clone();
                    t.push(a);
                    t
                })
            })
            .collect();
    }
    out
}

/// Canonical vectors of all strings of degree at most `n` whose value passes `keep`.
pub fn brute_force_vectors(
    ring: &ZqRing,
    alphabet: &[i64],
    n: usize,
    keep: impl Fn(&crate::algebraic::ZqElement) -> Result<bool>,
) -> Result<BTreeSet<Vec<i64>>> {
    let mut out = BTreeSet::new();
    for s in all_strings(alphabet, n + 1) {
        let v = ring.from_digits(&s)?;
        if keep(&v)? {
            out.insert(v.coeffs().to_vec());
        }
    }
    Ok(out)
}
