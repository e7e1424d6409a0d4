//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by the library. Mathematical verdicts (proper / not
/// proper, tempered / not) are never errors; errors signal invalid input or
/// exhausted resource caps.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("unsupported family/rank combination: {family} rank {rank}")]
    UnsupportedFamily { family: String, rank: usize },

    #[error("enumeration needs {needed} elements but cap is {cap}")]
    CapExceeded { needed: u128, cap: u128 },

    #[error("matrix is singular within tolerance (min singular value {min_sv:.3e} < {tol:.3e})")]
    SingularMatrix { min_sv: f64, tol: f64 },

    #[error("matrix has no inverse (|det| = {det:.3e})")]
    SingularMap { det: f64 },

    #[error("subalgebra basis does not lie in the span of the ambient algebra")]
    NotASubalgebraOfG,

    #[error("ambient dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("basis vectors are linearly dependent")]
    DependentBasis,

    #[error("operation requires subspace members only, but a cone member is present")]
    MixedMembers,

    #[error("no sample point passes the radius floor {floor}")]
    EmptyTail { floor: f64 },

    #[error("sample list is empty")]
    EmptySamples,

    #[error("representation kernel is non-compact: ray {ray:?} has zero decay but nonzero Haar growth")]
    NonCompactKernel { ray: Vec<i64> },

    #[error("ambient space has dimension zero")]
    DegenerateAmbient,

    #[error("only {usable} usable grid points (need at least {needed})")]
    InsufficientSignal { usable: usize, needed: usize },

    #[error("invalid partition: {reason}")]
    InvalidPartition { reason: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
