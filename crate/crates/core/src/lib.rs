//! Pseudo-spectral simulation and diagnostics for two-dimensional
//! capillary-gravity water waves written in conformal coordinates.

// `!(x > 0.0)` guards are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod brackets;
pub mod cli;
pub mod energy;
pub mod error;
pub mod evolution;
pub mod quadrature;
pub mod random;
pub mod spectral;
pub mod state;

pub use error::{Error, Result};
pub use spectral::{Field, Grid};
