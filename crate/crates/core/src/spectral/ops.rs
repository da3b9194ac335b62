//! Fourier multipliers on periodic fields.
//!
//! The Hilbert transform has symbol `-sgn(xi)`, so holomorphic functions
//! (extending into the lower half plane) are the negative-frequency ones and
//! `|d| = i H d`. All multipliers act literally on every slot, including the
//! Nyquist slot. Symbols that map real fields to real fields are marked
//! `hermitian`; applying one to a real-flagged field returns a real field.

use std::sync::Arc;

use num_complex::Complex64;

use super::field::Field;
use super::grid::Grid;
use crate::error::{Error, Result};

pub const DEFAULT_DEALIAS: f64 = 2.0 / 3.0;

/// A Fourier multiplier sampled on a grid, in FFT slot order.
#[derive(Clone, Debug)]
pub struct Symbol {
    values: Vec<Complex64>,
    hermitian: bool,
}

impl Symbol {
    /// Samples `f(xi)` at every nonzero wavenumber and uses `zero_mode` at `xi = 0`.
    pub fn from_fn(
        grid: &Grid,
        zero_mode: Complex64,
        f: impl Fn(f64) -> Complex64,
        hermitian: bool,
    ) -> Self {
        let values = grid
            .modes()
            .iter()
            .zip(grid.wavenumbers())
            .map(|(&k, &xi)| if k == 0 { zero_mode } else { f(xi) })
            .collect();
        Self { values, hermitian }
    }

    fn real(grid: &Grid, zero_mode: f64, f: impl Fn(f64) -> f64) -> Self {
        Self::from_fn(grid, zero_mode.into(), |xi| f(xi).into(), true)
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn apply(&self, f: &Field) -> Field {
        assert_eq!(self.values.len(), f.len(), "symbol and field sizes differ");
        let mut modes = f.modes();
        modes
            .iter_mut()
            .zip(&self.values)
            .for_each(|(m, s)| *m *= s);
        let mut out = Field::from_modes(f.grid(), &modes);
        if self.hermitian && f.is_real() {
            out.force_real();
        }
        out
    }
}

fn grid_of(f: &Field) -> &Arc<Grid> {
    f.grid()
}

/// `i xi` per mode.
pub fn derivative(f: &Field) -> Field {
    let grid = grid_of(f);
    let s = Symbol::from_fn(grid, 0.0.into(), |xi| Complex64::new(0.0, xi), true);
    s.apply(f)
}

/// `-sgn(xi)` per mode; the mean is annihilated.
pub fn hilbert(f: &Field) -> Field {
    let grid = grid_of(f);
    let s = Symbol::from_fn(grid, 0.0.into(), |xi| (-xi.signum()).into(), false);
    s.apply(f)
}

/// `|xi|^s` per mode; `s = 0` is the identity.
pub fn fractional_deriv(f: &Field, s: f64) -> Result<Field> {
    if !(s >= 0.0 && s.is_finite()) {
        return Err(Error::param("s", format!("must be >= 0, got {s}")));
    }
    if s == 0.0 {
        return Ok(f.clone());
    }
    Ok(Symbol::real(grid_of(f), 0.0, |xi| xi.abs().powf(s)).apply(f))
}

/// `(I + H)/2`: keeps negative modes and half the mean.
pub fn project_holo(f: &Field) -> Field {
    let s = Symbol::from_fn(
        grid_of(f),
        0.5.into(),
        |xi| if xi < 0.0 { 1.0.into() } else { 0.0.into() },
        false,
    );
    s.apply(f)
}

/// `(I - H)/2`: keeps positive modes and half the mean.
pub fn project_antiholo(f: &Field) -> Field {
    let s = Symbol::from_fn(
        grid_of(f),
        0.5.into(),
        |xi| if xi > 0.0 { 1.0.into() } else { 0.0.into() },
        false,
    );
    s.apply(f)
}

/// Convolution with the Poisson kernel, `exp(-eps |xi|)` per mode.
pub fn poisson_smooth(f: &Field, eps: f64) -> Result<Field> {
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(Error::param("eps", format!("must be >= 0, got {eps}")));
    }
    if eps == 0.0 {
        return Ok(f.clone());
    }
    Ok(Symbol::real(grid_of(f), 1.0, |xi| (-eps * xi.abs()).exp()).apply(f))
}

/// Gaussian mollifier `J_delta`, `exp(-(delta xi)^2 / 2)` per mode.
pub fn mollify(f: &Field, delta: f64) -> Result<Field> {
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(Error::param("delta", format!("must be >= 0, got {delta}")));
    }
    if delta == 0.0 {
        return Ok(f.clone());
    }
    Ok(Symbol::real(grid_of(f), 1.0, |xi| (-0.5 * (delta * xi).powi(2)).exp()).apply(f))
}

/// Zeroes modes with `|k| > fraction * N/2`.
pub fn dealias(f: &Field, fraction: f64) -> Result<Field> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::param(
            "fraction",
            format!("must lie in (0, 1], got {fraction}"),
        ));
    }
    Ok(truncate(f, fraction))
}

pub(crate) fn truncate(f: &Field, fraction: f64) -> Field {
    if fraction >= 1.0 {
        return f.clone();
    }
    let grid = grid_of(f);
    let cutoff = fraction * (grid.len() / 2) as f64;
    let mut modes = f.modes();
    for (m, &k) in modes.iter_mut().zip(grid.modes()) {
        if (k.abs() as f64) > cutoff {
            *m = Complex64::new(0.0, 0.0);
        }
    }
    let mut out = Field::from_modes(grid, &modes);
    if f.is_real() {
        out.force_real();
    }
    out
}

impl Field {
    pub fn d(&self) -> Field {
        derivative(self)
    }

    pub fn h(&self) -> Field {
        hilbert(self)
    }

    /// `|d| = i H d`.
    pub fn abs_d(&self) -> Field {
        Symbol::real(self.grid(), 0.0, f64::abs).apply(self)
    }

    /// `|d|^{1/2}`.
    pub fn half_d(&self) -> Field {
        Symbol::real(self.grid(), 0.0, |xi| xi.abs().sqrt()).apply(self)
    }

    /// `(I + H) f`.
    pub fn plus_h(&self) -> Field {
        project_holo(self).scale(2.0)
    }

    /// `(I - H) f`.
    pub fn minus_h(&self) -> Field {
        project_antiholo(self).scale(2.0)
    }

    /// Pointwise product followed by the grid's dealiasing.
    pub fn product(&self, other: &Field) -> Field {
        self.mul(other).dealiased()
    }

    /// Dealiased quotient.
    pub fn quotient(&self, other: &Field) -> Field {
        self.div(other).dealiased()
    }

    pub fn dealiased(&self) -> Field {
        truncate(self, self.grid().dealias_fraction())
    }
}
