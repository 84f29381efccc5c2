//! Variational dynamics of time-periodic mechanical Lagrangians on a closed
//! hyperbolic surface, computed in the Poincaré disk.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod fuchsian;
pub mod geometry;
pub mod lagrangian;
pub mod minimizer;
pub mod qg;
pub mod semiconj;

pub use error::{Error, Result};
