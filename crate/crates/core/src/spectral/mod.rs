//! Periodic grids, fields and Fourier multipliers.

mod field;
mod grid;
mod ops;

pub use field::Field;
pub use grid::Grid;
pub use ops::{
    dealias, derivative, fractional_deriv, hilbert, mollify, poisson_smooth, project_antiholo,
    project_holo, Symbol, DEFAULT_DEALIAS,
};
