//! Linear programming for desk-scale capacity-expansion models.
//!
//! The crate has two halves: an embedded bounded-variable revised simplex
//! ([`simplex_solve`]) for instances up to a few hundred thousand nonzeros,
//! and a fixed-format MPS writer/reader ([`mps`]) so larger instances can be
//! handed to an external solver and their solutions imported back.

mod lu;
pub mod mps;
mod problem;
mod simplex;

pub use mps::{export_mps, import_mps, import_solution};
pub use problem::{LpError, LpSolution, SolveStatus, StandardFormLp, VarId};
pub use simplex::{simplex_solve, SolverOptions};
