//! Cubic spectral curves for Hermitian random matrices with a two-level
//! external source.
//!
//! The pipeline: build a curve ([`curve`]), solve its free parameters
//! ([`params`]), locate branch points and label sheets ([`sheets`]), then
//! certify the equilibrium conditions ([`verify`]) and extract the limiting
//! density ([`density`]). The Gaussian case is cross-checked against direct
//! sampling ([`mc`]).

// `!(x <= tol)` style comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod curve;
pub mod density;
pub mod eigen;
pub mod error;
pub mod mc;
pub mod params;
pub mod poly;
pub mod quadrature;
pub mod sheets;
pub mod verify;

#[doc(hidden)]
pub mod cli;

pub use error::{Error, Result};
