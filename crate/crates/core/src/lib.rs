//! Lattices freely generated by finite posets within finitely generated
//! lattice varieties.
//!
//! The free lattice is computed as a subdirect product of subdirectly
//! irreducible factors, rebuilt from the connection maps between them and
//! enumerated as a closure system with a compressed multi-valued row engine.

pub mod check;
pub mod cli;
pub mod error;
pub mod implications;
pub mod lattice;
pub mod pipeline;
pub mod poset;
pub mod subdirect;
pub mod variety;

pub use error::{Error, Result};
pub use lattice::FiniteLattice;
pub use poset::Poset;
