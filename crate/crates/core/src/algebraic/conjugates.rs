use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::poly::{cauchy_bound, IntPolynomial};
use crate::error::{Result, SpectraError};

/// Position of a certified root disk relative to the unit circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitCircle {
    Inside,
    Outside,
    /// Certified on the circle via the reciprocal-factor test.
    On,
    Undecided,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertifiedRoot {
    pub re: f64,
    pub im: f64,
    /// Upper bound on the distance from `re + i im` to the root.
    pub radius: f64,
    pub modulus_lo: f64,
    pub modulus_hi: f64,
    pub location: UnitCircle,
}

impl CertifiedRoot {
    pub fn center(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// Every complex root of a squarefree polynomial, each inside a disk that
/// contains exactly one root.
#[derive(Clone, Debug, Serialize)]
pub struct ConjugateSet {
    pub roots: Vec<CertifiedRoot>,
    pub bits: u32,
    pub reciprocal_factor_degree: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct GaussInt {
    re: BigInt,
    im: BigInt,
}

impl GaussInt {
    fn new(re: BigInt, im: BigInt) -> Self {
        GaussInt { re, im }
    }

    fn zero() -> Self {
        Self::new(BigInt::zero(), BigInt::zero())
    }

    fn mul(&self, o: &Self) -> Self {
        Self::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }

    fn sub(&self, o: &Self) -> Self {
        Self::new(&self.re - &o.re, &self.im - &o.im)
    }

    fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    fn shl(&self, k: u32) -> Self {
        Self::new(&self.re << k as usize, &self.im << k as usize)
    }
}

fn round_div(n: &BigInt, d: &BigInt) -> BigInt {
    // nearest integer to n / d for d > 0
    let num: BigInt = n * 2 + d;
    let den: BigInt = d * 2;
    num.div_floor(&den)
}

fn ceil_sqrt(n: &BigInt) -> BigInt {
    let s = n.sqrt();
    if &(&s * &s) == n {
        s
    } else {
        s + 1
    }
}

/// Scaled evaluation: returns `p(Z / 2^b) * 2^(b*deg)` exactly.
fn eval_scaled(coeffs: &[BigInt], z: &GaussInt, b: u32) -> GaussInt {
    let d = coeffs.len() - 1;
    let mut acc = GaussInt::new(coeffs[d].clone(), BigInt::zero());
    for (k, c) in coeffs.iter().enumerate().rev().skip(1) {
        let shift = b as usize * (d - k);
        acc = acc.mul(z);
        acc.re += c << shift;
    }
    acc
}

fn aberth_f64(p: &IntPolynomial) -> Vec<Complex64> {
    let d = p.degree();
    let lead = p.leading().to_f64().unwrap_or(1.0);
    let c: Vec<f64> = p
        .coeffs()
        .iter()
        .map(|x| x.to_f64().unwrap_or(0.0) / lead)
        .collect();
    let eval = |z: Complex64| -> (Complex64, Complex64) {
        let mut v = Complex64::new(c[d], 0.0);
        let mut dv = Complex64::new(0.0, 0.0);
        for k in (0..d).rev() {
            dv = dv * z + v;
            v = v * z + c[k];
        }
        (v, dv)
    };
    let r = cauchy_bound(p).to_f64().unwrap_or(2.0).min(1e6) * 0.5;
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| Complex64::from_polar(r, std::f64::consts::TAU * k as f64 / d as f64 + 0.4))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..d {
            let (v, dv) = eval(z[i]);
            if v == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ratio = v / dv;
            let s: Complex64 = (0..d)
                .filter(|&j| j != i)
                .map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-17 {
            break;
        }
    }
    z
}

struct Certified {
    centers: Vec<GaussInt>,
    radii: Vec<BigInt>,
    bits: u32,
}

fn polish_and_bound(p: &IntPolynomial, centers: &mut [GaussInt], b: u32) -> Option<Vec<BigInt>> {
    let coeffs = p.coeffs();
    let deriv = p.derivative();
    let dc = deriv.coeffs();
    let d = p.degree();
    for z in centers.iter_mut() {
        for _ in 0..64 {
            let g = eval_scaled(coeffs, z, b);
            if g == GaussInt::zero() {
                break;
            }
            let h = eval_scaled(dc, z, b);
            let hn = h.norm();
            if hn.is_zero() {
                break;
            }
            // (G / H) = G * conj(H) / |H|^2, already on the 2^-b grid
            let num_re = &g.re * &h.re + &g.im * &h.im;
            let num_im = &g.im * &h.re - &g.re * &h.im;
            let step = GaussInt::new(round_div(&num_re, &hn), round_div(&num_im, &hn));
            if step == GaussInt::zero() {
                break;
            }
            *z = z.sub(&step);
            if step.re.abs() <= BigInt::one() && step.im.abs() <= BigInt::one() {
                break;
            }
        }
    }
    let lead2 = p.leading() * p.leading();
    let dd = BigInt::from(d * d);
    let mut radii = Vec::with_capacity(d);
    for i in 0..d {
        let g = eval_scaled(coeffs, &centers[i], b);
        let mut den = lead2.clone();
        for j in 0..d {
            if j != i {
                den *= centers[i].sub(&centers[j]).norm();
            }
        }
        if den.is_zero() {
            return None;
        }
        let num = &dd * g.norm();
        radii.push(ceil_sqrt(&num.div_ceil(&den)));
    }
    Some(radii)
}

fn disjoint(c: &[GaussInt], r: &[BigInt]) -> bool {
    for i in 0..c.len() {
        for j in i + 1..c.len() {
            let s = &r[i] + &r[j];
            if c[i].sub(&c[j]).norm() <= &s * &s {
                return false;
            }
        }
    }
    true
}

fn location(z: &GaussInt, r: &BigInt, b: u32) -> UnitCircle {
    let one = BigInt::one() << b as usize;
    let n = z.norm();
    let outer = &one + r;
    if n > &outer * &outer {
        return UnitCircle::Outside;
    }
    if &one > r {
        let inner = &one - r;
        if n < &inner * &inner {
            return UnitCircle::Inside;
        }
    }
    UnitCircle::Undecided
}

fn to_f64_scaled(x: &BigInt, b: u32) -> f64 {
    BigRational::new(x.clone(), BigInt::one() << b as usize)
        .to_f64()
        .unwrap_or(f64::NAN)
}

/// Image of the disk `D(z, r)` under `w -> 1 / conj(w)` lies away from every
/// other disk, so a reciprocal root pair inside `D(z, r)` must coincide.
fn inversion_stays_home(roots: &[CertifiedRoot], i: usize) -> bool {
    let z = roots[i].center();
    let r = roots[i].radius;
    let den = z.norm_sqr() - r * r;
    if den <= 0.0 {
        return false;
    }
    let c = z / den;
    let rr = r / den;
    roots.iter().enumerate().all(|(j, o)| {
        j == i || (c - o.center()).norm() > (rr + o.radius) * (1.0 + 1e-9) + 1e-300
    })
}

fn certify(p: &IntPolynomial, target_radius: f64, max_bits: u32) -> Result<(Certified, bool)> {
    let approx = aberth_f64(p);
    let mut b = 64u32;
    let mut centers: Vec<GaussInt> = approx
        .iter()
        .map(|z| {
            let s = 2f64.powi(b as i32);
            GaussInt::new(
                BigInt::from((z.re * s).round() as i128),
                BigInt::from((z.im * s).round() as i128),
            )
        })
        .collect();
    loop {
        let radii = polish_and_bound(p, &mut centers, b);
        if let Some(radii) = radii {
            if disjoint(&centers, &radii) {
                let max_r = radii.iter().map(|r| to_f64_scaled(r, b)).fold(0.0, f64::max);
                let settled = radii
                    .iter()
                    .zip(&centers)
                    .all(|(r, z)| location(z, r, b) != UnitCircle::Undecided);
                let done = max_r <= target_radius && settled;
                if done || b >= max_bits {
                    return Ok((
                        Certified {
                            centers,
                            radii,
                            bits: b,
                        },
                        done,
                    ));
                }
            }
        }
        if b >= max_bits {
            return Err(SpectraError::Inconclusive { bits: b });
        }
        let nb = (b * 2).min(max_bits);
        centers = centers.iter().map(|z| z.shl(nb - b)).collect();
        b = nb;
    }
}

/// Certified complex roots of a squarefree integer polynomial.
///
/// Disks are refined by doubling the working precision until they are
/// pairwise disjoint, no wider than `target_radius`, and each one is decided
/// inside or outside the unit circle. Disks that still straddle the circle
/// at `max_bits` are settled by the reciprocal-factor test when possible and
/// otherwise reported `Undecided`.
pub fn conjugates(p: &IntPolynomial, target_radius: f64, max_bits: u32) -> Result<ConjugateSet> {
    if p.degree() == 0 {
        return Err(SpectraError::Precondition("constant polynomial".into()));
    }
    if !p.is_squarefree() {
        return Err(SpectraError::NonSquarefree);
    }
    let p = p.primitive();
    let (cert, _) = certify(&p, target_radius, max_bits.max(64))?;
    let b = cert.bits;
    let mut roots: Vec<CertifiedRoot> = cert
        .centers
        .iter()
        .zip(&cert.radii)
        .map(|(z, r)| {
            let n = z.norm();
            let m_lo = n.sqrt() - r;
            let m_hi = ceil_sqrt(&n) + r;
            CertifiedRoot {
                re: to_f64_scaled(&z.re, b),
                im: to_f64_scaled(&z.im, b),
                radius: to_f64_scaled(r, b).next_up(),
                modulus_lo: to_f64_scaled(&m_lo.max(BigInt::zero()), b).next_down().max(0.0),
                modulus_hi: to_f64_scaled(&m_hi, b).next_up(),
                location: location(z, r, b),
            }
        })
        .collect();
    let recip = p.to_rat().gcd(&p.reciprocal().to_rat()).degree();
    if recip == p.degree() {
        for i in 0..roots.len() {
            if roots[i].location == UnitCircle::Undecided && inversion_stays_home(&roots, i) {
                roots[i].location = UnitCircle::On;
            }
        }
    }
    Ok(ConjugateSet {
        roots,
        bits: b,
        reciprocal_factor_degree: recip,
    })
}
