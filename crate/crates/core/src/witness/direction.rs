use num_complex::Complex64;
use serde::Serialize;

use crate::error::{precondition, Result};

/// Relative slack used when deciding `|p| = 1` and roots of unity from floats.
pub const UNIT_TOLERANCE: f64 = 1e-12;
const MAX_PERIOD: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DirectionCase {
    /// `|p| >= 1`, `Re p < 1`: `w = (1 - p) / |1 - p|`.
    OutsideLeft,
    /// `|p| > 1` nonreal with `Re p >= 1`: a rotated `(1 - 1/p) i`.
    OutsideShifted,
    /// `|p| = 1` and `p` a root of unity.
    UnitRational,
    /// `|p| = 1` otherwise.
    UnitIrrational,
}

/// Unit vector `w` with `Re w > 0` steering the partial sums at `p`.
#[derive(Clone, Debug, Serialize)]
pub struct Direction {
    pub w_re: f64,
    pub w_im: f64,
    pub case: DirectionCase,
    /// Index of the first maximal partial sum in the shifted case.
    pub shift: Option<usize>,
    /// Order of `p / |p|` as a root of unity.
    pub period: Option<usize>,
    /// Rotation angle applied to `(1 - p) / |1 - p|` in the rational unit case.
    pub perturbation: Option<f64>,
    /// Indices up to which the defining inequalities were checked.
    pub checked_to: usize,
}

impl Direction {
    pub fn w(&self) -> Complex64 {
        Complex64::new(self.w_re, self.w_im)
    }
}

/// Order of `u` as a root of unity, if at most `MAX_PERIOD`.
pub fn root_of_unity_order(u: Complex64) -> Option<usize> {
    let u = u / u.norm();
    let mut z = u;
    for n in 1..=MAX_PERIOD {
        if (z - 1.0).norm() <= 1e-9 * n as f64 {
            return Some(n);
        }
        z *= u;
    }
    None
}

pub fn on_unit_circle(p: Complex64) -> bool {
    (p.norm() - 1.0).abs() <= UNIT_TOLERANCE
}

/// Rounding bound for `Re(w p^-i)` computed by repeated multiplication.
fn term_error(i: usize, modulus: f64) -> f64 {
    16.0 * (i as f64 + 2.0) * f64::EPSILON * modulus.max(f64::MIN_POSITIVE)
}

/// `sum_(i=1)^k Re(w p^-i) <= 0` for every `k <= horizon`, up to rounding.
fn partial_sums_nonpositive(w: Complex64, p: Complex64, horizon: usize) -> bool {
    let inv = p.inv();
    let mut pw = w;
    let mut sum = 0.0;
    let mut err = 0.0;
    for i in 1..=horizon {
        pw *= inv;
        sum += pw.re;
        err += term_error(i, pw.norm());
        if sum > err {
            return false;
        }
    }
    true
}

/// `m sum_(i=1)^k Re(w p^-i) < Re w` for `k <= n` and no vanishing term, with
/// both slacks at least twice the rounding bound.
fn strict_unit_conditions(w: Complex64, p: Complex64, m: i64, n: usize) -> bool {
    if w.re <= 0.0 {
        return false;
    }
    let inv = p.inv();
    let mut pw = w;
    let mut sum = 0.0;
    let mut err = 0.0;
    for i in 1..=n {
        pw *= inv;
        let e = term_error(i, 1.0);
        err += e;
        if pw.re.abs() <= 2.0 * e {
            return false;
        }
        sum += pw.re;
        if w.re - m as f64 * sum <= 2.0 * m as f64 * err {
            return false;
        }
    }
    true
}

/// Chooses the steering direction for `p`; `horizon` bounds the checks.
pub fn choose_w(p: Complex64, m: i64, horizon: usize) -> Result<Direction> {
    if !(p.re.is_finite() && p.im.is_finite()) {
        return precondition("p must be finite");
    }
    if m < 1 {
        return precondition("height m must be at least 1");
    }
    let r = p.norm();
    if (p - 1.0).norm() <= UNIT_TOLERANCE {
        return precondition("p = 1 is handled by the periodic completion step");
    }
    if p.im == 0.0 && p.re > 0.0 {
        return precondition("positive real p is handled by the greedy steps");
    }
    if on_unit_circle(p) {
        let w0 = (Complex64::new(1.0, 0.0) - p) / (Complex64::new(1.0, 0.0) - p).norm();
        return match root_of_unity_order(p) {
            Some(n) => {
                let mut angles = vec![0.0];
                for j in 1..=52 {
                    let d = (0.5f64).powi(j);
                    angles.push(d);
                    angles.push(-d);
                }
                let (w, delta) = angles
                    .into_iter()
                    .map(|d| (w0 * Complex64::from_polar(1.0, d), d))
                    .find(|(w, _)| strict_unit_conditions(*w, p, m, n))
                    .ok_or_else(|| crate::SpectraError::Precondition(
                        "no admissible perturbation of 1 - p".into(),
                    ))?;
                Ok(Direction {
                    w_re: w.re,
                    w_im: w.im,
                    case: DirectionCase::UnitRational,
                    shift: None,
                    period: Some(n),
                    perturbation: Some(delta),
                    checked_to: n,
                })
            }
            None if !partial_sums_nonpositive(w0, p, horizon) => {
                precondition("direction check failed in floating point")
            }
            None => Ok(Direction {
                w_re: w0.re,
                w_im: w0.im,
                case: DirectionCase::UnitIrrational,
                shift: None,
                period: None,
                perturbation: None,
                checked_to: horizon,
            }),
        };
    }
    if r < 1.0 {
        return precondition("p must satisfy |p| >= 1");
    }
    let period = root_of_unity_order(p / r);
    if p.re < 1.0 {
        let w = (Complex64::new(1.0, 0.0) - p) / (Complex64::new(1.0, 0.0) - p).norm();
        if !partial_sums_nonpositive(w, p, horizon) {
            return precondition("direction check failed in floating point");
        }
        return Ok(Direction {
            w_re: w.re,
            w_im: w.im,
            case: DirectionCase::OutsideLeft,
            shift: None,
            period,
            perturbation: None,
            checked_to: horizon,
        });
    }
    // Re p >= 1, |p| > 1, p nonreal
    let inv = p.inv();
    let mut z = (Complex64::new(1.0, 0.0) - inv) * Complex64::i();
    if z.re <= 0.0 {
        z = -z;
    }
    let limit = horizon.max(64) * 64;
    let mut term = z;
    let mut sum = z.re;
    let (mut best, mut n) = (sum, 0);
    for i in 1..limit {
        term *= inv;
        sum += term.re;
        if sum > best {
            best = sum;
            n = i;
        }
        if term.norm() / (1.0 - 1.0 / r) < 1e-18 {
            break;
        }
    }
    let zn = z * inv.powu(n as u32);
    let w = zn / zn.norm();
    if !partial_sums_nonpositive(w, p, horizon) {
        return precondition("direction check failed in floating point");
    }
    Ok(Direction {
        w_re: w.re,
        w_im: w.im,
        case: DirectionCase::OutsideShifted,
        shift: Some(n),
        period,
        perturbation: None,
        checked_to: horizon,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negative_real() {
        let d = choose_w(Complex64::new(-2.0, 0.0), 1, 100).unwrap();
        assert_eq!(d.case, DirectionCase::OutsideLeft);
        assert!((d.w_re - 1.0).abs() < 1e-15 && d.w_im.abs() < 1e-15);
    }

    #[test]
    fn two_i() {
        let d = choose_w(Complex64::new(0.0, 2.0), 1, 100).unwrap();
        assert!((d.w_re - 1.0 / 5f64.sqrt()).abs() < 1e-15);
        assert!((d.w_im + 2.0 / 5f64.sqrt()).abs() < 1e-15);
        assert_eq!(d.period, Some(4));
    }

    #[test]
    fn unit_i() {
        let d = choose_w(Complex64::new(0.0, 1.0), 1, 100).unwrap();
        assert_eq!(d.case, DirectionCase::UnitRational);
        assert_eq!(d.period, Some(4));
        let w = d.w();
        let target = Complex64::new(1.0, -1.0) / 2f64.sqrt();
        assert!((w - target).norm() < 0.1);
    }

    #[test]
    fn shifted_case() {
        let d = choose_w(Complex64::new(1.5, 1.0), 1, 200).unwrap();
        assert_eq!(d.case, DirectionCase::OutsideShifted);
        assert!(d.w_re > 0.0);
        assert!(((d.w_re.powi(2) + d.w_im.powi(2)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejections() {
        assert!(choose_w(Complex64::new(1.0, 0.0), 1, 10).is_err());
        assert!(choose_w(Complex64::new(2.0, 0.0), 1, 10).is_err());
        assert!(choose_w(Complex64::new(0.3, 0.2), 1, 10).is_err());
    }
}
