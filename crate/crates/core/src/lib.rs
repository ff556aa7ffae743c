//! Euclidean Jordan algebras as a model of generalized quantum information.

pub mod automorphism;
pub mod channels;
pub mod checks;
pub mod division;
pub mod error;
pub mod exec;
pub mod info;
pub mod jordan;
pub mod linalg;
pub mod polygon;
pub mod random;
pub mod regret;
pub mod spectral;

#[cfg(test)]
mod testing;

pub use error::{Error, Result};
