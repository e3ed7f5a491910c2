//! Toroidal quadrangulations `Q_{n,k}` built from the Cartesian product of two
//! cycles, their realizations on the Clifford torus as the 2-skeleton of the
//! `n,k`-duoprism in R⁴, and certificates that every combinatorial automorphism
//! is induced by a Euclidean isometry of that realization.
//!
//! The crate is organised bottom-up:
//!
//! - [`complex`]: graphs, faces, cell complexes and flags.
//! - [`perm`]: permutations of vertex indices.
//! - [`autgroup`]: automorphism search, group closure, stabilizers and orbits.
//! - [`geometry`]: duoprism coordinates, isometry fitting and metric reports.
//! - [`verify`]: end-to-end certificates and the 4-cube embedding count.

pub mod autgroup;
pub mod complex;
pub mod error;
pub mod geometry;
pub mod perm;
pub mod verify;

pub use error::{Error, Result};

/// Absolute tolerance used for floating-point comparisons unless overridden.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Largest vertex count accepted by the automorphism search by default.
pub const DEFAULT_VERTEX_CAP: usize = 100;
