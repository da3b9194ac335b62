//! Seeded random band-limited fields for identity checks.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;

use crate::spectral::{Field, Grid};

/// Random modes with `|k| <= band`, amplitudes decaying like `1/(1 + |k|)`.
/// With `real` set the coefficients are Hermitian and the field is real.
pub fn band_limited<R: Rng>(grid: &Arc<Grid>, band: usize, real: bool, rng: &mut R) -> Field {
    let n = grid.len();
    let band = band.min(n / 2 - 1) as i64;
    let mut modes = vec![Complex64::new(0.0, 0.0); n];
    for k in -band..=band {
        let amp = 1.0 / (1.0 + k.abs() as f64);
        let c = Complex64::from_polar(amp * rng.gen_range(0.2..1.0), rng.gen_range(0.0..2.0 * PI));
        modes[grid.slot(k).expect("in band")] = c;
    }
    if real {
        modes[0].im = 0.0;
        for k in 1..=band {
            let pos = modes[grid.slot(k).expect("in band")];
            modes[grid.slot(-k).expect("in band")] = pos.conj();
        }
        let mut f = Field::from_modes(grid, &modes).re();
        f = f.scale(1.0 / f.max_abs());
        f
    } else {
        let f = Field::from_modes(grid, &modes);
        let m = f.max_abs();
        f.scale(1.0 / m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn stays_in_band() {
        let grid = Grid::periodic(64).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f = band_limited(&grid, 5, true, &mut rng);
        assert!(f.is_real());
        for (m, &k) in f.modes().iter().zip(grid.modes()) {
            if k.abs() > 5 {
                assert!(m.norm() < 1e-15);
            }
        }
        assert!((f.max_abs() - 1.0).abs() < 1e-15);
    }
}
