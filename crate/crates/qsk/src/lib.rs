//! Numerical kernels for basic hypergeometric series, eleven orthogonal
//! polynomial families, and the expansion coefficients that tie generating
//! functions to them, plus a verification layer that certifies every
//! implemented identity by residuals on explicit grids.

pub mod error;
pub(crate) mod exact;
pub mod expansions;
pub mod hyperseries;
pub mod polyfamilies;
pub mod qcore;
pub mod quadrature;
pub mod verifier;

pub use error::{Error, Result};
