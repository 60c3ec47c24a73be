//! Pointwise numerical verification of Clifford-bundle spacetime
//! geometry: the rank-16 Clifford algebra over arbitrary Lorentzian
//! metrics, extended connection and curvature, the Dirac operator,
//! transformation laws, and the variational identities coupling the
//! Dirac and Einstein equations.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod error;
pub mod expr;
pub mod geometry;
pub mod linalg;
pub mod metric;
pub mod multivector;
pub mod scalar;
pub mod transforms;
pub mod coupling;
pub mod variational;

pub use error::{Error, Result};
