//! The strongly regular graph with parameters (216, 40, 4, 8) built from the
//! Hermitian surface `H(3, 4)`, with exact certification of its structure.

pub mod cli;
pub mod cliques;
pub mod error;
pub mod exact;
pub mod fields;
pub mod geometry;
pub mod gq;
pub mod graph;
pub mod hermitian;
pub mod io;
pub mod ovoids;
pub mod permgroup;
pub mod projective;
pub mod subquadrangles;
pub mod symmetry;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
