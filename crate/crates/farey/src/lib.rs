//! Exact multidimensional Farey summation continued fractions.
//!
//! The crate computes Meester continued fractions of integer and rational
//! vectors, the Farey tessellation and the Farey polyhedra traced by a ray,
//! prismatic diagrams, sails with their LLS sequences, Farey continuants,
//! lambda lengths and Ptolemy constants, and the divergence cells of the
//! Meester algorithm. All arithmetic is exact.

#![allow(clippy::needless_range_loop)]

pub mod checks;
pub mod error;
pub mod explore;
pub mod frieze;
pub mod lattice;
pub mod matrix;
pub mod meester;
pub mod prismatic;
pub mod reconstruct;
pub mod sails;
pub mod svg;
pub mod tessellation;

pub use error::{FareyError, Result};
pub use lattice::{IntVec, RatVec};
pub use matrix::IntMatrix;
pub use meester::{FareyCF, FareyForm};
