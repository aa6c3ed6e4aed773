use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::number::{check_base, AlgebraicNumber};
use super::poly::{IntPolynomial, RatPoly, Sturm};
use crate::error::{precondition, Result};

type Matrix = Vec<Vec<BigRational>>;

fn identity(d: usize) -> Matrix {
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect()
}

fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let d = a.len();
    let mut out = vec![vec![BigRational::zero(); d]; d];
    for i in 0..d {
        for k in 0..d {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..d {
                out[i][j] += &a[i][k] * &b[k][j];
            }
        }
    }
    out
}

/// Matrix of multiplication by `q` on the basis `1, q, ..., q^(d-1)`.
fn multiplication_matrix(p: &IntPolynomial) -> Matrix {
    let monic = p.to_rat().monic();
    let d = monic.degree();
    let mut m = vec![vec![BigRational::zero(); d]; d];
    for j in 0..d {
        if j + 1 < d {
            m[j + 1][j] = BigRational::one();
        } else {
            for (i, row) in m.iter_mut().enumerate() {
                row[j] = -monic.coeffs[i].clone();
            }
        }
    }
    m
}

/// Characteristic polynomial by the Faddeev-LeVerrier recursion.
pub(crate) fn charpoly(a: &Matrix) -> RatPoly {
    let d = a.len();
    let mut c = vec![BigRational::zero(); d + 1];
    c[d] = BigRational::one();
    let mut mk = vec![vec![BigRational::zero(); d]; d];
    for k in 1..=d {
        let mut next = matmul(a, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &c[d - k + 1];
        }
        mk = next;
        let am = matmul(a, &mk);
        let tr: BigRational = (0..d).map(|i| am[i][i].clone()).sum();
        c[d - k] = -tr / BigRational::from_integer(BigInt::from(k));
    }
    RatPoly::new(c)
}

fn matpow(m: &Matrix, mut k: u32) -> Matrix {
    let mut base = m.clone();
    let mut acc = identity(m.len());
    while k > 0 {
        if k & 1 == 1 {
            acc = matmul(&acc, &base);
        }
        base = matmul(&base, &base);
        k >>= 1;
    }
    acc
}

/// `q^k` with the squarefree part of the characteristic polynomial of the
/// `k`-th power of the multiplication-by-`q` matrix as defining polynomial.
pub fn power_base(q: &AlgebraicNumber, k: u32) -> Result<AlgebraicNumber> {
    if k == 0 {
        return precondition("power must be at least 1");
    }
    check_base(q)?;
    if k == 1 {
        return Ok(q.clone());
    }
    let m = multiplication_matrix(q.poly());
    let poly = charpoly(&matpow(&m, k)).to_int_primitive().squarefree_part();
    let sturm = Sturm::new(&poly);
    let mut bits = 32;
    loop {
        let (lo, hi) = q.enclosure(bits);
        let lo_k = num_traits::pow(lo, k as usize);
        let hi_k = num_traits::pow(hi, k as usize);
        let at_lo = poly.eval_rational(&lo_k).is_zero();
        if sturm.count(&lo_k, &hi_k) + usize::from(at_lo) == 1 {
            return AlgebraicNumber::from_interval(&poly, lo_k, hi_k);
        }
        bits *= 2;
    }
}
