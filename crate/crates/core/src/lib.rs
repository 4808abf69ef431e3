//! Computational toolkit for free (noncommutative) polynomials and free
//! spectrahedra over hermitian matrix tuples.
//!
//! The crate is organized around a pipeline:
//!
//! * [`freealg`] — words, matrix-valued noncommutative polynomials, and
//!   evaluation on hermitian tuples;
//! * [`pencil`] — monic linear pencils, free cubes and balls, membership,
//!   and the scalar-level (level-1) feasibility questions;
//! * [`linearize`] — Higman-style reduction of a matrix polynomial to a
//!   monic linear pencil with a controlled determinant identity;
//! * [`algstruct`] — structure theory of the coefficient algebra:
//!   invariant subspaces, block triangularization, hermitian and unitary
//!   similarity, and redundant-block removal;
//! * [`sdpsolve`] — a self-contained dense primal-dual interior-point
//!   solver for the small semidefinite programs the other modules emit;
//! * [`detect`] — decides (soundly refutes, probabilistically accepts)
//!   whether the positivity domain of a hermitian polynomial is a free
//!   spectrahedron;
//! * [`psatz`] — eigenvalue optimization over a free spectrahedron with
//!   extraction and independent verification of algebraic certificates.
//!
//! All numerics are complex `f64`; randomized searches are deterministic
//! under a caller-supplied seed.

pub mod config;
pub mod error;
pub mod la;

pub mod freealg;
pub mod parse;

pub mod sdpsolve;

pub mod pencil;

pub mod linearize;

pub mod algstruct;

pub mod detect;

pub mod psatz;

pub mod jsonio;

pub use config::ToolConfig;
pub use error::{Error, Result};
