use num_complex::Complex64;
use serde::Serialize;

use super::conjugates::{conjugates, UnitCircle};
use super::number::{check_base, AlgebraicNumber};
use crate::error::{Result, SpectraError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ClassTag {
    /// Rational integer `>= 2`.
    PisotInteger,
    Pisot,
    #[serde(rename = "NotPisot-AlgebraicInteger")]
    NotPisotAlgebraicInteger,
    NotAlgebraicInteger,
    /// Precision budget exhausted before every conjugate was placed.
    Inconclusive,
}

impl ClassTag {
    pub fn is_pisot(self) -> bool {
        matches!(self, ClassTag::Pisot | ClassTag::PisotInteger)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjugateEvidence {
    pub re: f64,
    pub im: f64,
    pub modulus_lo: f64,
    pub modulus_hi: f64,
    pub location: UnitCircle,
    pub is_base: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct NumberClass {
    pub tag: ClassTag,
    pub evidence: Vec<ConjugateEvidence>,
    pub bits: u32,
    pub note: Option<String>,
}

impl NumberClass {
    fn bare(tag: ClassTag, note: Option<String>) -> Self {
        NumberClass {
            tag,
            evidence: vec![],
            bits: 0,
            note,
        }
    }
}

/// Pisot classification of a base `q > 1`.
///
/// The defining polynomial is taken to be the minimal polynomial; a rational
/// root at degree >= 2 proves otherwise and is reported as an error.
pub fn classify_base(q: &AlgebraicNumber, target_radius: f64, max_bits: u32) -> Result<NumberClass> {
    check_base(q)?;
    let p = q.poly();
    if !p.is_monic() {
        return Ok(NumberClass::bare(ClassTag::NotAlgebraicInteger, None));
    }
    if p.degree() == 1 {
        return Ok(NumberClass::bare(ClassTag::PisotInteger, None));
    }
    if let Some(why) = q.reducibility_hint() {
        return Err(SpectraError::MaybeReducible(why));
    }
    let set = match conjugates(p, target_radius, max_bits) {
        Ok(s) => s,
        Err(SpectraError::Inconclusive { bits }) => {
            return Ok(NumberClass {
                tag: ClassTag::Inconclusive,
                evidence: vec![],
                bits,
                note: Some("root disks never separated".into()),
            })
        }
        Err(e) => return Err(e),
    };
    let qf = Complex64::new(q.to_f64(), 0.0);
    let slack = q.radius() + 1e-300;
    let (base_idx, _) = set
        .roots
        .iter()
        .enumerate()
        .map(|(i, r)| (i, (r.center() - qf).norm()))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonconstant polynomial");
    let hits = set
        .roots
        .iter()
        .filter(|r| (r.center() - qf).norm() <= r.radius + slack + 4.0 * f64::EPSILON * qf.re)
        .count();
    if hits != 1 {
        return Ok(NumberClass {
            tag: ClassTag::Inconclusive,
            evidence: vec![],
            bits: set.bits,
            note: Some("base root not separated from its conjugates".into()),
        });
    }
    let evidence: Vec<ConjugateEvidence> = set
        .roots
        .iter()
        .enumerate()
        .map(|(i, r)| ConjugateEvidence {
            re: r.re,
            im: r.im,
            modulus_lo: r.modulus_lo,
            modulus_hi: r.modulus_hi,
            location: r.location,
            is_base: i == base_idx,
        })
        .collect();
    let others = evidence.iter().filter(|e| !e.is_base);
    let mut undecided = false;
    let mut tag = ClassTag::Pisot;
    for e in others {
        match e.location {
            UnitCircle::Inside => {}
            UnitCircle::Outside | UnitCircle::On => tag = ClassTag::NotPisotAlgebraicInteger,
            UnitCircle::Undecided => undecided = true,
        }
    }
    if tag == ClassTag::Pisot && undecided {
        tag = ClassTag::Inconclusive;
    }
    let note = (set.reciprocal_factor_degree > 0 && set.reciprocal_factor_degree < p.degree())
        .then(|| "input may be reducible: partial reciprocal factor".to_string());
    Ok(NumberClass {
        tag,
        evidence,
        bits: set.bits,
        note,
    })
}
