//! Scattering theory for continuous-time quantum walks on finite graphs with
//! attached semi-infinite paths.
//!
//! A walk is generated by the adjacency matrix of a graph. Attaching
//! semi-infinite paths to designated *terminal* vertices of a finite gadget
//! turns the walk into a scattering process: a plane wave with momentum
//! `k ∈ (-π, 0)` comes in on one path and leaves as a superposition on all
//! paths, with amplitudes collected in a unitary, symmetric S-matrix `S(k)`.
//!
//! The crate provides:
//!
//! * [`graph`] — gadget data model, JSON interchange, series merging and
//!   finite truncations of the attached paths;
//! * [`scatter`] — the S-matrix solver and reflection/transmission
//!   classification of two-terminal gadgets, plus momentum-switch checks;
//! * [`constructions`] — parametric gadget families (paths, cycles, the
//!   connector form), eigenvector certificates that predict perfect
//!   reflection/transmission, set reversal, and switch assembly;
//! * [`families`] — a name-indexed registry of all builders, used by the CLI;
//! * [`exactq2`] — exact linear algebra over the field `Q(√2)` for the two
//!   momenta `-π/4` and `-3π/4`, including the constructive conjugation
//!   witness that ties perfect reflection at one momentum to the other;
//! * [`approx`] — the closed-form family of approximate switches between
//!   `-π/4` and `-3π/4` and the search for record-precision sizes;
//! * [`dynamics`] — wave-packet propagation on truncated graphs to check the
//!   stationary scattering amplitudes against time-domain probabilities;
//! * [`corpus`] — the standard set of gadget instances used by the
//!   verification suites.

pub mod approx;
pub mod constructions;
pub mod corpus;
pub mod dynamics;
pub mod error;
pub mod exactq2;
pub mod families;
pub mod graph;
pub mod momentum;
pub mod scatter;

pub use error::{Error, Result};
pub use graph::{Gadget, Graph, TruncatedGraph};
pub use momentum::Momentum;
