//! Nodes of quintic determinantal surfaces `det(t·A0 + x1·A1 + x2·A2 + x3·A3)`.
//!
//! The crate computes the 20 nodes of a transversal quintic symmetroid by
//! homotopy continuation, classifies them into the combinatorial type
//! (ρ, σ), certifies that type with interval Krawczyk tests, and searches
//! pencil space for prescribed types by directional hill-climbing.
//!
//! Everything here is `no_std` + `alloc`. File formats, the command line and
//! thread pools live in the `symmetroid` crate.

#![no_std]

extern crate alloc;

pub mod certify;
pub mod classify;
pub mod exec;
pub mod families;
pub mod hillclimb;
pub mod linalg;
pub mod pencil;
pub mod polysys;
pub mod scalar;
pub mod tracker;

pub use certify::{certified_type, Certificate, PencilEnclosure, Unsuccessful};
pub use classify::{admissible_types, comb_type, CombType, NodeSolution, NodeTag};
pub use exec::{Executor, Sequential};
pub use linalg::SymMat5;
pub use pencil::{Pencil, Signature};
pub use polysys::{Chart, NodeSystem};
pub use tracker::{PathResult, PathStatus, TrackOptions};

pub use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("iteration limit exceeded in {0}")]
    Convergence(&'static str),
    #[error("pencil matrices are linearly dependent")]
    DependentPencil,
    #[error("affine chart has vanishing linear part")]
    DegenerateChart,
    #[error("{failed} of 64 paths failed ({reason})")]
    PathFailure { failed: usize, reason: &'static str },
    #[error("numerically nongeneric pencil: {0}")]
    Nongeneric(&'static str),
    #[error("expected 20 nodes, found {0}")]
    NodeCount(usize),
    #[error("determinant value in the ambiguity band; certification required")]
    AmbiguousNode,
    #[error("type ({0}, {1}) is not admissible")]
    Inadmissible(u32, u32),
    #[error("type difference has odd coordinates")]
    OddDifference,
    #[error("interval division by an interval containing zero")]
    DivisionByZero,
}
