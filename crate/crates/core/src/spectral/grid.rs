use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::ops::DEFAULT_DEALIAS;
use crate::error::{Error, Result};

/// Uniform periodic grid of `n` nodes on `[0, length)`.
///
/// Mode coefficients follow the convention `f(x_j) = sum_k fhat_k exp(i xi_k x_j)`,
/// so `fhat_0` is the mean and `||f||_2^2 = length * sum_k |fhat_k|^2`.
/// Slots are stored in FFT order: slot `j` holds integer mode `j` for
/// `j < n/2` and `j - n` otherwise, covering `-n/2 ..= n/2 - 1`.
pub struct Grid {
    n: usize,
    length: f64,
    dealias: f64,
    modes: Vec<i64>,
    wavenumbers: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Grid {
    pub const MIN_POINTS: usize = 16;

    pub fn new(n: usize, length: f64) -> Result<Arc<Self>> {
        Self::with_dealias(n, length, DEFAULT_DEALIAS)
    }

    /// Grid whose nonlinear products keep modes `|k| <= fraction * n/2`.
    pub fn with_dealias(n: usize, length: f64, fraction: f64) -> Result<Arc<Self>> {
        if !(fraction > 0.0 && fraction <= 1.0) {
            return Err(Error::InvalidGrid(format!(
                "dealias fraction must lie in (0, 1], got {fraction}"
            )));
        }
        if n < Self::MIN_POINTS || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "N must be a power of two >= {}, got {n}",
                Self::MIN_POINTS
            )));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "L must be positive and finite, got {length}"
            )));
        }
        let half = (n / 2) as i64;
        let modes: Vec<i64> = (0..n as i64)
            .map(|j| if j < half { j } else { j - n as i64 })
            .collect();
        let base = 2.0 * PI / length;
        let wavenumbers = modes.iter().map(|&k| base * k as f64).collect();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        Ok(Arc::new(Self {
            n,
            length,
            dealias: fraction,
            modes,
            wavenumbers,
            forward,
            inverse,
        }))
    }

    /// The default `2*pi` periodic grid.
    pub fn periodic(n: usize) -> Result<Arc<Self>> {
        Self::new(n, 2.0 * PI)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Truncation fraction applied after every nonlinear product.
    pub fn dealias_fraction(&self) -> f64 {
        self.dealias
    }

    /// Largest integer mode kept by product dealiasing.
    pub fn dealias_band(&self) -> usize {
        (self.dealias * (self.n / 2) as f64).floor() as usize
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        j as f64 * self.spacing()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.node(j)).collect()
    }

    /// Integer mode index per FFT slot.
    pub fn modes(&self) -> &[i64] {
        &self.modes
    }

    /// `xi_k = 2*pi*k/L` per FFT slot.
    pub fn wavenumbers(&self) -> &[f64] {
        &self.wavenumbers
    }

    /// Fundamental wavenumber `2*pi/L`.
    pub fn base_wavenumber(&self) -> f64 {
        2.0 * PI / self.length
    }

    /// Largest positive wavenumber `xi_{N/2-1}`.
    pub fn max_wavenumber(&self) -> f64 {
        self.base_wavenumber() * (self.n / 2 - 1) as f64
    }

    /// FFT slot holding integer mode `k`, if representable.
    pub fn slot(&self, k: i64) -> Option<usize> {
        let half = (self.n / 2) as i64;
        if k < -half || k >= half {
            None
        } else if k >= 0 {
            Some(k as usize)
        } else {
            Some((k + self.n as i64) as usize)
        }
    }

    /// Samples to mode coefficients.
    pub fn to_modes(&self, samples: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(samples.len(), self.n);
        let mut buf = samples.to_vec();
        self.forward.process(&mut buf);
        let scale = 1.0 / self.n as f64;
        buf.iter_mut().for_each(|c| *c *= scale);
        buf
    }

    /// Mode coefficients to samples.
    pub fn to_samples(&self, modes: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(modes.len(), self.n);
        let mut buf = modes.to_vec();
        self.inverse.process(&mut buf);
        buf
    }

    pub fn same_as(&self, other: &Grid) -> bool {
        self.n == other.n && self.length == other.length && self.dealias == other.dealias
    }
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("n", &self.n)
            .field("length", &self.length)
            .field("dealias", &self.dealias)
            .finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}
