use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;

use super::grid::Grid;
use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Periodic samples on a [`Grid`].
///
/// `real` marks fields that are real by construction; their imaginary parts
/// are kept at exactly zero.
#[derive(Clone, Debug)]
pub struct Field {
    grid: Arc<Grid>,
    values: Vec<Complex64>,
    real: bool,
}

impl Field {
    pub fn new(grid: Arc<Grid>, values: Vec<Complex64>) -> Self {
        assert_eq!(values.len(), grid.len(), "sample count must match grid");
        Self {
            grid,
            values,
            real: false,
        }
    }

    pub fn from_real(grid: Arc<Grid>, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), grid.len(), "sample count must match grid");
        Self {
            grid,
            values: values.into_iter().map(|x| Complex64::new(x, 0.0)).collect(),
            real: true,
        }
    }

    pub fn from_fn(grid: &Arc<Grid>, f: impl Fn(f64) -> Complex64) -> Self {
        let values = grid.nodes().into_iter().map(f).collect();
        Self::new(grid.clone(), values)
    }

    pub fn from_fn_real(grid: &Arc<Grid>, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.nodes().into_iter().map(f).collect();
        Self::from_real(grid.clone(), values)
    }

    /// Builds a field from mode coefficients in FFT slot order.
    pub fn from_modes(grid: &Arc<Grid>, modes: &[Complex64]) -> Self {
        Self::new(grid.clone(), grid.to_samples(modes))
    }

    pub fn zeros(grid: &Arc<Grid>) -> Self {
        Self::from_real(grid.clone(), vec![0.0; grid.len()])
    }

    pub fn constant(grid: &Arc<Grid>, value: Complex64) -> Self {
        let mut f = Self::new(grid.clone(), vec![value; grid.len()]);
        f.real = value.im == 0.0;
        f
    }

    /// `exp(i k x)` for integer mode `k`.
    pub fn mode(grid: &Arc<Grid>, k: i64) -> Self {
        let xi = grid.base_wavenumber() * k as f64;
        Self::from_fn(grid, |x| (I * xi * x).exp())
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    /// Mode coefficients in FFT slot order.
    pub fn modes(&self) -> Vec<Complex64> {
        self.grid.to_modes(&self.values)
    }

    pub fn real_values(&self) -> Vec<f64> {
        self.values.iter().map(|c| c.re).collect()
    }

    pub fn imag_values(&self) -> Vec<f64> {
        self.values.iter().map(|c| c.im).collect()
    }

    pub fn re(&self) -> Field {
        Field::from_real(self.grid.clone(), self.real_values())
    }

    pub fn im(&self) -> Field {
        Field::from_real(self.grid.clone(), self.imag_values())
    }

    pub fn conj(&self) -> Field {
        self.map_preserving(|c| c.conj())
    }

    pub fn abs(&self) -> Field {
        Field::from_real(
            self.grid.clone(),
            self.values.iter().map(|c| c.norm()).collect(),
        )
    }

    pub fn exp(&self) -> Field {
        self.map_preserving(|c| c.exp())
    }

    pub fn recip(&self) -> Field {
        self.map_preserving(|c| c.inv())
    }

    /// Pointwise map; the result is complex-flagged.
    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Field {
        Field::new(self.grid.clone(), self.values.iter().map(|&c| f(c)).collect())
    }

    /// Pointwise map of a real field through a real function.
    pub fn map_real(&self, f: impl Fn(f64) -> f64) -> Field {
        Field::from_real(
            self.grid.clone(),
            self.values.iter().map(|c| f(c.re)).collect(),
        )
    }

    fn map_preserving(&self, f: impl Fn(Complex64) -> Complex64) -> Field {
        let mut out = self.map(f);
        if self.real {
            out.force_real();
        }
        out
    }

    pub(crate) fn force_real(&mut self) {
        self.values.iter_mut().for_each(|c| c.im = 0.0);
        self.real = true;
    }

    pub fn scale(&self, s: f64) -> Field {
        self.map_preserving(|c| c * s)
    }

    pub fn scale_c(&self, s: Complex64) -> Field {
        if s.im == 0.0 {
            return self.scale(s.re);
        }
        self.map(|c| c * s)
    }

    pub fn add_scalar(&self, s: Complex64) -> Field {
        let mut out = self.map(|c| c + s);
        if self.real && s.im == 0.0 {
            out.force_real();
        }
        out
    }

    pub fn mean(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() / self.len() as f64
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn max_imag_abs(&self) -> f64 {
        self.values.iter().map(|c| c.im.abs()).fold(0.0, f64::max)
    }

    pub fn min_re(&self) -> f64 {
        self.values.iter().map(|c| c.re).fold(f64::INFINITY, f64::min)
    }

    pub fn max_re(&self) -> f64 {
        self.values.iter().map(|c| c.re).fold(f64::NEG_INFINITY, f64::max)
    }

    /// `L^2` norm `sqrt((L/N) sum |f_j|^2)`.
    pub fn norm_l2(&self) -> f64 {
        let sum: f64 = self.values.iter().map(|c| c.norm_sqr()).sum();
        (sum * self.grid.spacing()).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Checks that the imaginary residue is at most `tol * (1 + max modulus)`
    /// and returns the real part flagged as real.
    pub fn into_real(self, tol: f64, what: &str) -> Result<Field> {
        if self.real {
            return Ok(self);
        }
        let residue = self.max_imag_abs();
        let bound = tol * (1.0 + self.max_abs());
        if !(residue <= bound) {
            return Err(Error::StateQuality(format!(
                "{what} should be real but has imaginary residue {residue:.3e} (bound {bound:.3e})"
            )));
        }
        let mut out = self;
        out.force_real();
        Ok(out)
    }

    pub fn check_same_grid(&self, other: &Field) -> Result<()> {
        if self.grid.same_as(&other.grid) {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    fn zip(&self, other: &Field, f: impl Fn(Complex64, Complex64) -> Complex64) -> Field {
        assert!(
            self.grid.same_as(&other.grid),
            "pointwise operation on fields from different grids"
        );
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        let mut out = Field::new(self.grid.clone(), values);
        if self.real && other.real {
            out.force_real();
        }
        out
    }

    /// Raw pointwise product, no dealiasing.
    pub fn mul(&self, other: &Field) -> Field {
        self.zip(other, |a, b| a * b)
    }

    pub fn div(&self, other: &Field) -> Field {
        self.zip(other, |a, b| a / b)
    }
}

impl Add for &Field {
    type Output = Field;
    fn add(self, rhs: &Field) -> Field {
        self.zip(rhs, |a, b| a + b)
    }
}

impl Sub for &Field {
    type Output = Field;
    fn sub(self, rhs: &Field) -> Field {
        self.zip(rhs, |a, b| a - b)
    }
}

impl Mul for &Field {
    type Output = Field;
    fn mul(self, rhs: &Field) -> Field {
        Field::mul(self, rhs)
    }
}

impl Neg for &Field {
    type Output = Field;
    fn neg(self) -> Field {
        self.scale(-1.0)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Field {
            type Output = Field;
            fn $m(self, rhs: Field) -> Field {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Field> for Field {
            type Output = Field;
            fn $m(self, rhs: &Field) -> Field {
                (&self).$m(rhs)
            }
        }
        impl $tr<Field> for &Field {
            type Output = Field;
            fn $m(self, rhs: Field) -> Field {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Field {
    type Output = Field;
    fn neg(self) -> Field {
        self.scale(-1.0)
    }
}

impl Mul<f64> for &Field {
    type Output = Field;
    fn mul(self, rhs: f64) -> Field {
        self.scale(rhs)
    }
}

impl Mul<f64> for Field {
    type Output = Field;
    fn mul(self, rhs: f64) -> Field {
        self.scale(rhs)
    }
}

impl Mul<Complex64> for &Field {
    type Output = Field;
    fn mul(self, rhs: Complex64) -> Field {
        self.scale_c(rhs)
    }
}

impl Mul<Complex64> for Field {
    type Output = Field;
    fn mul(self, rhs: Complex64) -> Field {
        self.scale_c(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l2_norm_matches_parseval() {
        let grid = Grid::periodic(64).unwrap();
        let f = &Field::mode(&grid, 3) * Complex64::new(2.0, -1.0);
        let modes = f.modes();
        let parseval: f64 = modes.iter().map(|c| c.norm_sqr()).sum::<f64>() * grid.length();
        assert!((f.norm_l2().powi(2) - parseval).abs() < 1e-12);
        assert!((parseval - 5.0 * grid.length()).abs() < 1e-12);
    }

    #[test]
    fn reality_flag_propagates() {
        let grid = Grid::periodic(32).unwrap();
        let a = Field::from_fn_real(&grid, |x| x.sin());
        let b = Field::from_fn_real(&grid, |x| x.cos());
        assert!((&a * &b).is_real());
        assert!((&a + &b).is_real());
        assert!(!(&a * Complex64::new(0.0, 1.0)).is_real());
        assert!(a.exp().is_real());
    }

    #[test]
    fn into_real_rejects_imaginary_content() {
        let grid = Grid::periodic(16).unwrap();
        let f = Field::mode(&grid, 1);
        assert!(f.clone().into_real(1e-12, "mode").is_err());
        let g = f.re().scale_c(Complex64::new(1.0, 0.0));
        assert!(g.into_real(1e-12, "re").is_ok());
    }
}
