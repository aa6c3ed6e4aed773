//! Real algebraic bases: polynomials, certified root isolation, conjugates,
//! Pisot classification, powers and the exact `Z[q]` kernel.

mod base;
mod classify;
mod conjugates;
mod field;
pub(crate) mod interval;
mod number;
mod poly;
mod power;
mod zq;

pub use base::{parse_rational, Base, BaseSpec, DEFAULT_TOLERANCE};
pub use classify::{classify_base, ClassTag, ConjugateEvidence, NumberClass};
pub use conjugates::{conjugates, CertifiedRoot, ConjugateSet, UnitCircle};
pub use field::{FieldElem, NumberField};
pub use interval::Interval;
pub use number::{isolate_real_roots, AlgebraicNumber, RealRoot};
pub use poly::{IntPolynomial, RatPoly};
pub use power::power_base;
pub use zq::{ZqElement, ZqRing};
