use thiserror::Error;

use crate::division::Ring;
use crate::jordan::Algebra;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("ring mismatch: {0:?} vs {1:?}")]
    RingMismatch(Ring, Ring),

    #[error("invalid coefficient: {0}")]
    InvalidCoefficient(String),

    #[error("invalid algebra descriptor: {0}")]
    InvalidAlgebra(String),

    #[error("algebra mismatch: {0} vs {1}")]
    AlgebraMismatch(Algebra, Algebra),

    #[error("invalid element data: {0}")]
    InvalidElement(String),

    #[error("not Hermitian: symmetry violation {0:e} exceeds tolerance")]
    NotHermitian(f64),

    #[error("negative power {0}")]
    NegativePower(i64),

    #[error("empty linear combination")]
    EmptyCombination,

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("characteristic cubic has negative discriminant {0:e}; input is not Hermitian")]
    CorruptedCubic(f64),

    #[error("eigenvalue {0:e} outside the function domain")]
    DomainViolation(f64),

    #[error("element is not positive (minimum eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("element is not a state: {0}")]
    NotState(String),

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("spectra have different totals: {0} vs {1}")]
    TotalsDiffer(f64, f64),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("empty action list")]
    EmptyActions,

    #[error("invalid prior: {0}")]
    InvalidPrior(String),

    #[error("{solver} did not converge within {iterations} iterations (last gap {gap:e})")]
    SolverNoConvergence {
        solver: &'static str,
        iterations: usize,
        gap: f64,
    },

    #[error("states are not orthogonal pure states: {0}")]
    NonOrthogonal(String),

    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),

    #[error("point ({0}, {1}) lies outside the polygon")]
    OutsidePolygon(String, String),
}

pub type Result<T> = std::result::Result<T, Error>;
