//! Properness of reductive group actions on homogeneous spaces: exact
//! criteria with certificates, temperedness invariants, and Monte Carlo
//! dynamical-volume estimates.
//!
//! The crate is organised around the maximal split abelian subspace `a` of a
//! real reductive group and its restricted Weyl group `W`:
//!
//! - [`rootdata`] builds restricted root systems and Weyl groups for the
//!   classical families and provides chamber normalisation and the
//!   half-sum function `rho_h`.
//! - [`cartan`] constructs explicit matrix Lie algebra bases, Cartan
//!   decomposition dimension counts, real ranks, and the numeric Cartan
//!   projection for GL/SL matrices.
//! - [`cones`] is exact rational geometry: subspaces, polyhedral cones,
//!   unions, intersection-triviality certificates, asymptotic cones.
//! - [`properness`] is the criterion engine: properness verdicts with exact
//!   witnesses, similarity, Calabi–Markus, cocompactness, the partition
//!   classification of `SL(2,R)` embeddings, and sharpness estimation.
//! - [`tempered`] computes the decay invariant `p_V` exactly by extreme-ray
//!   enumeration of a hyperplane arrangement.
//! - [`volume`] estimates `vol(S ∩ gS)` decay exponents by reproducible
//!   Monte Carlo and compares the empirical exponent against `p_V`.
//! - [`catalog`] holds the pseudo-Riemannian space-form predicates,
//!   Radon–Hurwitz numbers, and table audits.
//!
//! All verdict-producing paths use exact integer/rational arithmetic so that
//! a "proper" or "not proper" answer is a certificate, not an approximation.
//! Floating point appears only where the input is inherently numeric
//! (matrix projections, Monte Carlo sampling, asymptotic-cone extraction).

pub mod cartan;
pub mod catalog;
pub mod cones;
pub mod error;
pub mod linalg;
pub mod numeric;
pub mod properness;
pub mod rng;
pub mod rootdata;
pub mod selftest;
pub mod tempered;
pub mod volume;

pub use error::Error;
pub use linalg::Rat;

/// Convenience result alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
