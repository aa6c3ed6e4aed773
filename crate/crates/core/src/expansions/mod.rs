//! Digit expansions in base `q`: greedy, lazy with prescribed sign pattern,
//! and periodic completion of zero-valued blocks.

mod greedy;
mod lazy;
mod pattern;
mod periodic;
mod sequence;
mod verify;

pub use greedy::greedy_expansion;
pub use lazy::{lazy_constrained, LazyExpansion, LazyStep};
pub use pattern::{Capacity, Eventual, SignPattern};
pub use periodic::{periodic_completion, PeriodicCompletion};
pub use sequence::{DigitSequence, Tail};
pub use verify::{verify_expansion, ResidualCertificate};
