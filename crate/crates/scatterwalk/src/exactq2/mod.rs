//! Exact linear algebra over `Q(√2)` for the momenta `-π/4` and `-3π/4`.
//!
//! At these two momenta `cos k` and `sin k` are `±√2/2`, so the boundary
//! matrix of the scattering eigenproblem, its nullspace, and the S-matrix
//! entries all live in the field `Q(√2)` (or `Q(√2, i)` for the complex
//! amplitudes) and can be handled with no floating point at all. This is the
//! machinery behind the fact that no gadget can separate the two momenta:
//! perfect reflection at one forces perfect reflection at the other, checked
//! constructively by [`conjugation_check`].

mod boundary;
mod conjugation;
mod matrix;
mod scalar;

pub use boundary::{
    boundary_matrix, exact_s_matrix, exact_scattering_basis, exact_scattering_state, BasisVector,
    BoundaryMatrix, ExactMomentum, ExactScatteringBasis, ExactScatteringState,
};
pub use conjugation::{
    conjugation_check, conjugation_check_with, ConjugationOutcome, ConjugationWitness,
    DEFAULT_TRUNCATION,
};
pub use matrix::{q2_nullspace, Q2Matrix};
pub use scalar::{Q2Complex, Q2Scalar};
