pub mod algebraic;
pub mod error;
pub mod expansions;
pub mod reproduce;
pub mod spectrum;
pub mod witness;

pub use error::{Result, SpectraError};
