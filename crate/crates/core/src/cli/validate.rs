//! Identity and invariant suite behind `capwave validate`.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::energy::{hhalf, EnergyReport};
use crate::error::{Error, Result};
use crate::evolution::{rhs, SimParams};
use crate::quadrature::{quadrature_hardy, quadrature_oracle_hilbert, quadrature_triple_bracket};
use crate::random::band_limited;
use crate::spectral::{hilbert, poisson_smooth, project_antiholo, project_holo, Field, Grid};
use crate::state::{derive, from_conformal, theta_conformal, to_conformal, SurfaceState, I};

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub residual: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.residual <= self.tolerance
    }

    pub fn line(&self) -> String {
        format!(
            "{} {:<28} residual={:.3e} tol={:.1e}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.residual,
            self.tolerance
        )
    }
}

/// Operators that a test fixture may swap for a perturbed version.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Corruption {
    Hilbert,
    Derivative,
}

impl std::str::FromStr for Corruption {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hilbert" => Ok(Self::Hilbert),
            "derivative" => Ok(Self::Derivative),
            other => Err(Error::Config(format!(
                "validate.corrupt must be `hilbert` or `derivative`, got `{other}`"
            ))),
        }
    }
}

struct Ops {
    corrupt: Option<Corruption>,
}

impl Ops {
    fn h(&self, f: &Field) -> Field {
        let out = hilbert(f);
        if self.corrupt == Some(Corruption::Hilbert) {
            bump_mode(&out, 1)
        } else {
            out
        }
    }

    fn d(&self, f: &Field) -> Field {
        let out = f.d();
        if self.corrupt == Some(Corruption::Derivative) {
            bump_mode(&out, 2)
        } else {
            out
        }
    }

    fn comm(&self, f: &Field, g: &Field) -> Field {
        &f.product(&self.h(g)) - &self.h(&f.product(g))
    }
}

/// Scales mode `k` by `1.001`.
fn bump_mode(f: &Field, k: i64) -> Field {
    let grid = f.grid();
    let mut modes = f.modes();
    if let Some(j) = grid.slot(k) {
        modes[j] *= 1.001;
    }
    Field::from_modes(grid, &modes)
}

fn rel(err: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        err / scale
    } else {
        err
    }
}

fn worst(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

/// Runs every check on an `n`-point grid; `trials` random fields per identity.
pub fn run_suite(n: usize, trials: usize, corrupt: Option<Corruption>) -> Result<Vec<Check>> {
    let grid = Grid::periodic(n)?;
    let ops = Ops { corrupt };
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let band = n / 4;
    let fields: Vec<Field> = (0..trials)
        .map(|_| band_limited(&grid, band, false, &mut rng))
        .collect();
    let mut checks = operator_checks(&ops, &fields);

    let oracle = worst(fields.iter().take(3).map(|f| {
        let q = quadrature_oracle_hilbert(f);
        let h = ops.h(f);
        rel((&q - &h).max_abs(), h.max_abs())
    }));
    checks.push(Check {
        name: "hilbert_vs_quadrature",
        residual: oracle,
        tolerance: 1e-8,
    });

    checks.push(Check {
        name: "triple_identity",
        residual: triple_identity_residual(&ops, &grid, &mut rng),
        tolerance: 1e-6,
    });

    let hardy = worst((0..3).map(|_| {
        let f = band_limited(&grid, n / 16, false, &mut rng);
        let h2 = hhalf(&f).powi(2);
        rel((quadrature_hardy(&f) - h2).abs(), h2)
    }));
    checks.push(Check {
        name: "hardy",
        residual: hardy,
        tolerance: 1e-2,
    });

    checks.extend(state_checks(&grid, &mut rng)?);
    Ok(checks)
}

fn operator_checks(ops: &Ops, fields: &[Field]) -> Vec<Check> {
    let mut h2 = 0.0f64;
    let mut absd = 0.0f64;
    let mut real_part = 0.0f64;
    let mut imag_part = 0.0f64;
    let mut proj = 0.0f64;
    let mut semigroup = 0.0f64;
    for f in fields {
        let scale = f.max_abs();
        let hh = ops.h(&ops.h(f));
        h2 = h2.max(rel((&hh - &f.add_scalar(-f.mean())).max_abs(), scale));

        let a = f.abs_d();
        let b = ops.h(&ops.d(f)) * I;
        absd = absd.max(rel((&a - &b).max_abs(), a.max_abs()));

        let z = f.add_scalar(-f.mean());
        let plus = |x: &Field| x + &ops.h(x);
        let minus = |x: &Field| x - &ops.h(x);
        let lhs = plus(&z.re());
        let rhs = &z - &(minus(&z).im() * I);
        real_part = real_part.max(rel((&lhs - &rhs).max_abs(), scale));
        let lhs = plus(&(z.im() * I));
        let rhs = &z - &minus(&z).re();
        imag_part = imag_part.max(rel((&lhs - &rhs).max_abs(), scale));

        let sum = &project_holo(f) + &project_antiholo(f);
        proj = proj.max(rel((&sum - f).max_abs(), scale));

        let twice = poisson_smooth(&poisson_smooth(f, 0.03).unwrap(), 0.05).unwrap();
        let once = poisson_smooth(f, 0.08).unwrap();
        semigroup = semigroup.max(rel((&twice - &once).max_abs(), scale));
    }
    let tol = 1e-12;
    vec![
        Check { name: "hilbert_squared", residual: h2, tolerance: tol },
        Check { name: "abs_deriv_is_iHd", residual: absd, tolerance: tol },
        Check { name: "holo_of_real_part", residual: real_part, tolerance: tol },
        Check { name: "holo_of_imag_part", residual: imag_part, tolerance: tol },
        Check { name: "projections_sum", residual: proj, tolerance: tol },
        Check { name: "poisson_semigroup", residual: semigroup, tolerance: tol },
    ]
}

/// `h d[f,H]dg` against `[h df,H]dg + [f,H]d(h dg) - [h,f;dg]`, the last term
/// by direct quadrature.
fn triple_identity_residual(ops: &Ops, grid: &Arc<Grid>, rng: &mut ChaCha8Rng) -> f64 {
    let band = grid.len() / 16;
    let mut out = 0.0f64;
    for _ in 0..2 {
        let h = band_limited(grid, band, false, rng);
        let f = band_limited(grid, band, false, rng);
        let g = band_limited(grid, band, false, rng);
        let dg = ops.d(&g);
        let lhs = h.product(&ops.d(&ops.comm(&f, &dg)));
        let triple = quadrature_triple_bracket(&h, &f, &dg).expect("same grid");
        let rhs = &(&ops.comm(&h.product(&ops.d(&f)), &dg) + &ops.comm(&f, &ops.d(&h.product(&dg))))
            - &triple;
        out = out.max(rel((&lhs - &rhs).max_abs(), lhs.max_abs()));
    }
    out
}

fn state_checks(grid: &Arc<Grid>, rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let flat = SurfaceState::flat(grid);
    let p = SimParams {
        sigma: 0.5,
        ..SimParams::default()
    };
    let (gd, vd) = rhs(&flat, &p)?;
    let mut checks = vec![Check {
        name: "flat_equilibrium",
        residual: gd.max_abs().max(vd.max_abs()),
        tolerance: 1e-13,
    }];

    let band = grid.len() / 16;
    let g = band_limited(grid, band, true, rng).scale(0.1);
    let v = band_limited(grid, band, true, rng).scale(0.1);
    let s = SurfaceState::new(0.0, g, v)?;
    let back = from_conformal(&to_conformal(&s)?)?;
    checks.push(Check {
        name: "conformal_round_trip",
        residual: (&back.g - &s.g).max_abs().max((&back.v - &s.v).max_abs()),
        tolerance: 1e-10,
    });

    let d = derive(&s, 0.5, true)?;
    let alt = theta_conformal(&to_conformal(&s)?);
    checks.push(Check {
        name: "theta_routes",
        residual: rel((&alt - &d.theta).max_abs(), d.theta.max_abs()),
        tolerance: 1e-9,
    });
    checks.push(Check {
        name: "a1_lower_bound",
        residual: (1.0 - d.a1.min_re()).max(0.0),
        tolerance: 1e-10,
    });

    let report = EnergyReport::compute(&s, 0.5, true)?;
    let izap_forcing = &(&d.a1 * (-I)) + &d.theta.d().scale(0.5);
    let direct = hhalf(&izap_forcing).powi(2);
    let e1_first = crate::energy::energy_e_sigma(&s, 0.5, true)?.e1[0];
    checks.push(Check {
        name: "e_sigma_1_identity",
        residual: rel((e1_first - direct).abs(), direct),
        tolerance: 1e-10,
    });
    checks.push(Check {
        name: "energy_report_finite",
        residual: if report.is_finite() { 0.0 } else { f64::INFINITY },
        tolerance: 0.0,
    });
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_suite_passes() {
        let checks = run_suite(128, 5, None).unwrap();
        for c in &checks {
            assert!(c.passed(), "{}", c.line());
        }
    }

    #[test]
    fn corrupted_hilbert_fails() {
        let checks = run_suite(128, 3, Some(Corruption::Hilbert)).unwrap();
        assert!(checks.iter().any(|c| !c.passed()));
        let checks = run_suite(128, 3, Some(Corruption::Derivative)).unwrap();
        assert!(checks.iter().any(|c| !c.passed()));
    }
}
