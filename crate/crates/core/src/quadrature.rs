//! Direct quadrature of the singular-integral forms of the operators.
//!
//! These are slow, independent reference implementations used to check the
//! multiplier algebra. On a torus of length `L` the kernel `1/(x - y)` becomes
//! `(pi/L) cot(pi (x - y)/L)` and `1/(x - y)^2` becomes
//! `(pi/L)^2 / sin^2(pi (x - y)/L)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Result;
use crate::spectral::Field;

/// `H f(x) = (1/(i pi)) p.v. int (pi/L) cot(pi (x - y)/L) f(y) dy`.
///
/// Principal value by the alternating-point rule: for each target node only
/// nodes at odd offsets are summed, with weight `2h`. The rule is spectrally
/// accurate for the odd kernel.
pub fn quadrature_oracle_hilbert(f: &Field) -> Field {
    let grid = f.grid();
    let n = grid.len();
    let h = grid.spacing();
    let scale = PI / grid.length();
    let kernel: Vec<f64> = (0..n)
        .map(|m| {
            if m % 2 == 1 {
                scale / (scale * m as f64 * h).tan()
            } else {
                0.0
            }
        })
        .collect();
    let values = f.values();
    let prefactor = Complex64::new(0.0, -1.0 / PI) * (2.0 * h);
    let out = (0..n)
        .map(|j| {
            let sum: Complex64 = (1..n)
                .step_by(2)
                .map(|m| values[(j + n - m) % n] * kernel[m])
                .sum();
            sum * prefactor
        })
        .collect();
    Field::new(grid.clone(), out)
}

/// `[h, f; g](x) = (1/(i pi)) int (h(x) - h(y))(f(x) - f(y)) K2(x - y) g(y) dy`
/// with the periodic squared kernel `K2`. The integrand is smooth; the
/// diagonal contributes its limit `h'(x) f'(x) g(x)`, so the trapezoid rule is
/// spectrally accurate.
pub fn quadrature_triple_bracket(h: &Field, f: &Field, g: &Field) -> Result<Field> {
    h.check_same_grid(f)?;
    h.check_same_grid(g)?;
    let grid = h.grid();
    let n = grid.len();
    let step = grid.spacing();
    let k2 = squared_kernel(grid.length(), n);
    let (hv, fv, gv) = (h.values(), f.values(), g.values());
    let (dh, df) = (h.d(), f.d());
    let out = (0..n)
        .map(|j| {
            let mut sum = dh.values()[j] * df.values()[j] * gv[j];
            for (m, &k) in k2.iter().enumerate().skip(1) {
                let i = (j + n - m) % n;
                sum += (hv[j] - hv[i]) * (fv[j] - fv[i]) * gv[i] * k;
            }
            sum * Complex64::new(0.0, -step / PI)
        })
        .collect();
    Ok(Field::new(grid.clone(), out))
}

/// `(1/2pi) double int |f(x) - f(y)|^2 K2(x - y) dx dy`, which equals the
/// squared homogeneous half-derivative seminorm.
pub fn quadrature_hardy(f: &Field) -> f64 {
    let grid = f.grid();
    let n = grid.len();
    let step = grid.spacing();
    let k2 = squared_kernel(grid.length(), n);
    let fv = f.values();
    let df = f.d();
    let mut total = 0.0;
    for j in 0..n {
        total += df.values()[j].norm_sqr();
        for m in 1..n {
            total += (fv[j] - fv[(j + m) % n]).norm_sqr() * k2[m];
        }
    }
    total * step * step / (2.0 * PI)
}

fn squared_kernel(length: f64, n: usize) -> Vec<f64> {
    let scale = PI / length;
    let step = length / n as f64;
    (0..n)
        .map(|m| {
            if m == 0 {
                0.0
            } else {
                scale * scale / (scale * m as f64 * step).sin().powi(2)
            }
        })
        .collect()
}
