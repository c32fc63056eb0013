//! Exact toolkit for three-dimensional log Calabi-Yau pairs `(Y, D)` built
//! by interior blowups of points and curves on the boundary of a smooth
//! complete toric threefold.
//!
//! The crate computes Picard lattices and cubic forms, the dual complex of
//! the type III boundary, the period point of `D` as a character on
//! `Lambda = ker(l)`, and decides Torelli equivalence of two pairs under a
//! supplied correspondence by reducing to their toric models.

pub mod error;
pub mod exactnum;

pub use error::{Error, Result};
pub mod fixtures;
pub mod toric;
pub mod boundary;
pub mod pair;
pub mod periods;
pub mod oracle;
pub mod torelli;
