//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid momentum: {0}")]
    InvalidMomentum(String),

    #[error("gadget document parse failure: {0}")]
    Parse(String),

    #[error("terminal index {index} out of range (gadget has {count} terminals)")]
    TerminalIndex { index: usize, count: usize },

    #[error("operation requires {expected} terminals, gadget has {actual}")]
    TerminalCount { expected: usize, actual: usize },

    #[error("merge would create a {0}; gadgets are simple graphs")]
    MergeConflict(&'static str),

    #[error("momentum too close to a band edge (|sin k| = {0:.2e} < 1e-6)")]
    BandEdge(f64),

    #[error("scattering system inconsistent (residual {0:.2e}); this should not happen for a valid gadget")]
    InconsistentSystem(f64),

    #[error("degenerate scattering system: a null vector has outgoing amplitude {0:.2e} on a terminal")]
    DegenerateSystem(f64),

    #[error("invalid construction: {0}")]
    InvalidConstruction(String),

    #[error("momentum {0} is not supported by exact Q(√2) arithmetic (need -π/4 or -3π/4)")]
    UnsupportedExactMomentum(String),

    #[error("exact arithmetic inconsistency: {0}; this indicates a falsified invariant")]
    ExactInconsistency(String),

    #[error("invalid wave packet: {0}")]
    InvalidPacket(String),

    #[error("graph with {0} vertices exceeds the dense-solver cap of {1}")]
    GraphTooLarge(usize, usize),

    #[error("precondition violated: {0}")]
    Precondition(String),
}
