//! Norms, energy functionals and scalar diagnostics.
//!
//! Sobolev norms use the weight `(1 + xi^2)^s`. Weighted quantities are formed
//! by pointwise products without truncation: they are evaluated, not evolved.
//! Material derivatives are closed algebraically from one state.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::Field;
use crate::state::{
    a1_sigma, derive, gravity_value, zap_power, DerivedFields, SurfaceState, I,
};

/// `||f||_{H^s}^2 = L sum (1 + xi^2)^s |fhat|^2`.
pub fn sobolev_norm(f: &Field, s: f64) -> Result<f64> {
    if !(s >= 0.0 && s.is_finite()) {
        return Err(Error::param("s", format!("must be >= 0, got {s}")));
    }
    Ok(weighted_norm(f, |xi| (1.0 + xi * xi).powf(s)))
}

/// `||f||_{Hdot^{1/2}}^2 = L sum |xi| |fhat|^2`.
pub fn hhalf(f: &Field) -> f64 {
    weighted_norm(f, f64::abs)
}

fn weighted_norm(f: &Field, w: impl Fn(f64) -> f64) -> f64 {
    let grid = f.grid();
    let sum: f64 = f
        .modes()
        .iter()
        .zip(grid.wavenumbers())
        .map(|(m, &xi)| w(xi) * m.norm_sqr())
        .sum();
    (grid.length() * sum).sqrt()
}

fn l2sq(f: &Field) -> f64 {
    f.norm_l2().powi(2)
}

fn hhalf_sq(f: &Field) -> f64 {
    hhalf(f).powi(2)
}

fn sqrt_clamped(f: &Field) -> Field {
    f.map_real(|x| x.max(0.0).sqrt())
}

/// Shared intermediate quantities for one state.
struct Kit<'a> {
    state: &'a SurfaceState,
    sigma: f64,
    gravity: f64,
    derived: DerivedFields,
    /// `1/Z_a`.
    izap: Field,
    /// `|Z_a| = 1/c`.
    abs_zap: Field,
    /// `conj(Z_t)_a`.
    ztbar_a: Field,
}

impl<'a> Kit<'a> {
    fn new(state: &'a SurfaceState, sigma: f64, gravity: bool) -> Result<Self> {
        let derived = derive(state, sigma, gravity)?;
        let izap = zap_power(&state.g, -1.0);
        let abs_zap = derived.c.recip();
        let ztbar_a = derived.d.conj().d();
        Ok(Self {
            state,
            sigma,
            gravity: gravity_value(gravity),
            derived,
            izap,
            abs_zap,
            ztbar_a,
        })
    }

    fn zap_pow(&self, p: f64) -> Field {
        zap_power(&self.state.g, p)
    }

    fn abs_pow(&self, p: f64) -> Field {
        self.abs_zap.map_real(|x| x.powf(p))
    }

    /// `-i A1 + sigma d Theta`, which equals `(Zbar_tt - i gravity) Z_a`.
    fn forcing(&self) -> Field {
        &(&self.derived.a1 * (-I)) + &self.derived.theta.d().scale(self.sigma)
    }

    /// `Zbar_tt = i gravity + (1/Z_a)(-i A1 + sigma d Theta)`.
    fn ztbar_tt(&self) -> Field {
        self.izap
            .mul(&self.forcing())
            .add_scalar(I * self.gravity)
    }

    /// `Dbar Zbar_t = conj(1/Z_a) d conj(Z_t)`.
    fn dbar_ztbar(&self) -> Field {
        self.izap.conj().mul(&self.ztbar_a)
    }

    /// `|D| = c d`.
    fn abs_dap(&self, f: &Field) -> Field {
        self.derived.c.mul(&f.d())
    }
}

/// The thirteen terms of the holomorphic energy, split as `(first, second)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CalESigma {
    pub first: [f64; 9],
    pub second: [f64; 4],
}

impl CalESigma {
    pub fn first_total(&self) -> f64 {
        self.first.iter().sum()
    }

    pub fn second_total(&self) -> f64 {
        self.second.iter().sum()
    }

    pub fn total(&self) -> f64 {
        self.first_total() + self.second_total()
    }
}

pub fn energy_cal_e_sigma(state: &SurfaceState, sigma: f64) -> Result<CalESigma> {
    let kit = Kit::new(state, sigma, true)?;
    Ok(cal_e_sigma(&kit))
}

fn cal_e_sigma(kit: &Kit) -> CalESigma {
    let s = kit.sigma;
    let (s16, s12) = (s.powf(1.0 / 6.0), s.sqrt());
    let d1 = kit.izap.d();
    let d2 = d1.d();
    let d3 = d2.d();
    let theta_a = kit.derived.theta.d();
    let half = kit.zap_pow(0.5);
    let first = [
        l2sq(&d1),
        hhalf_sq(&kit.izap.mul(&d1)),
        hhalf_sq(&theta_a.scale(s)),
        l2sq(&half.mul(&d1).scale(s16)).powi(3),
        half.mul(&d1).scale(s12).max_abs().powi(2),
        l2sq(&kit.zap_pow(-0.5).mul(&d2).scale(s12)),
        hhalf_sq(&kit.zap_pow(-1.5).mul(&d2).scale(s12)),
        l2sq(&kit.izap.mul(&d3).scale(s)),
        hhalf_sq(&kit.zap_pow(-2.0).mul(&d3).scale(s)),
    ];
    let zt_a = &kit.ztbar_a;
    let zt_aa = zt_a.d();
    let second = [
        l2sq(zt_a),
        l2sq(&kit.zap_pow(-2.0).mul(&zt_aa)),
        l2sq(&kit.zap_pow(-0.5).mul(&zt_aa).scale(s12)),
        l2sq(&kit.zap_pow(-2.5).mul(&zt_aa.d()).scale(s12)),
    ];
    CalESigma { first, second }
}

/// The five grouped energies, each with its three or four terms.
#[derive(Clone, Debug, PartialEq)]
pub struct ESigma {
    pub e0: [f64; 4],
    pub e1: [f64; 3],
    pub e2: [f64; 3],
    pub e3: [f64; 3],
    pub e4: [f64; 3],
}

impl ESigma {
    pub fn components(&self) -> [f64; 5] {
        [
            self.e0.iter().sum(),
            self.e1.iter().sum(),
            self.e2.iter().sum(),
            self.e3.iter().sum(),
            self.e4.iter().sum(),
        ]
    }

    pub fn total(&self) -> f64 {
        self.components().iter().sum()
    }
}

pub fn energy_e_sigma(state: &SurfaceState, sigma: f64, gravity: bool) -> Result<ESigma> {
    let kit = Kit::new(state, sigma, gravity)?;
    Ok(e_sigma(&kit))
}

/// `D_t Theta = i X - i Re (I - H) X + i Im([b, H] d Theta)` with
/// `X = (|D| + i Re Theta) Dbar Zbar_t`.
pub fn material_theta(state: &SurfaceState, sigma: f64, gravity: bool) -> Result<Field> {
    let kit = Kit::new(state, sigma, gravity)?;
    Ok(dt_theta(&kit))
}

fn dt_theta(kit: &Kit) -> Field {
    let dbar = kit.dbar_ztbar();
    let x = &kit.abs_dap(&dbar) + &kit.derived.theta.re().mul(&dbar) * I;
    let theta = &kit.derived.theta;
    let b = &kit.derived.b;
    let corr = &b.mul(&theta.d().h()) - &b.mul(&theta.d()).h();
    &(&x * I) - &(x.minus_h().re() * I) + corr.im() * I
}

/// `D_t Dbar Zbar_t = Dbar Zbar_tt - (Dbar Zbar_t)^2`.
pub fn material_dbar_ztbar(state: &SurfaceState, sigma: f64, gravity: bool) -> Result<Field> {
    let kit = Kit::new(state, sigma, gravity)?;
    Ok(dt_dbar(&kit))
}

fn dt_dbar(kit: &Kit) -> Field {
    let dbar = kit.dbar_ztbar();
    &kit.izap.conj().mul(&kit.ztbar_tt().d()) - &dbar.mul(&dbar)
}

/// `Zbar_tt` from the fundamental equation.
pub fn ztbar_tt(state: &SurfaceState, sigma: f64, gravity: bool) -> Result<Field> {
    Ok(Kit::new(state, sigma, gravity)?.ztbar_tt())
}

fn e_sigma(kit: &Kit) -> ESigma {
    let s = kit.sigma;
    let s12 = s.sqrt();
    let d1 = kit.izap.d();
    let abs_half = kit.abs_pow(0.5);
    let e0 = [
        abs_half.mul(&d1).scale(s12).max_abs().powi(2),
        l2sq(&abs_half.mul(&d1).scale(s.powf(1.0 / 6.0))).powi(3),
        l2sq(&d1),
        l2sq(&kit.abs_pow(-0.5).mul(&d1.d()).scale(s12)),
    ];

    let sqrt_a1 = sqrt_clamped(&kit.derived.a1);
    let zt_a = &kit.ztbar_a;
    let zt_aa = zt_a.d();
    let zap = kit.zap_pow(1.0);
    let tt_shift = kit.ztbar_tt().add_scalar(-I * kit.gravity);
    let e1 = [
        hhalf_sq(&tt_shift.mul(&zap)),
        l2sq(&sqrt_a1.mul(zt_a)),
        l2sq(&kit.abs_pow(-0.5).mul(&zt_aa).scale(s12)),
    ];

    let b_a = kit.derived.b.d();
    let dt_zt_a = &kit.ztbar_tt().d() - &b_a.mul(zt_a);
    let c = &kit.derived.c;
    let abs_m32 = kit.abs_pow(-1.5);
    let e2 = [
        l2sq(&dt_zt_a),
        hhalf_sq(&sqrt_a1.mul(&zt_a.mul(c))),
        hhalf_sq(&abs_m32.mul(&zt_aa).scale(s12)),
    ];

    let theta = &kit.derived.theta;
    let e3 = [
        l2sq(&dt_theta(kit)),
        hhalf_sq(&sqrt_a1.mul(&theta.mul(c))),
        hhalf_sq(&abs_m32.mul(&theta.d()).scale(s12)),
    ];

    let abs_dbar = kit.abs_dap(&kit.dbar_ztbar());
    let e4 = [
        hhalf_sq(&dt_dbar(kit)),
        l2sq(&sqrt_a1.mul(&abs_dbar)),
        l2sq(&kit.abs_pow(-0.5).mul(&abs_dbar.d()).scale(s12)),
    ];
    ESigma { e0, e1, e2, e3, e4 }
}

/// `E_{3.5}` followed by `E_{4.5 + i}` for `i = 0..=n_extra`.
pub fn energy_solver(state: &SurfaceState, sigma: f64, n_extra: usize) -> Result<Vec<f64>> {
    let derived = derive(state, sigma, true)?;
    solver_energies(state, &derived, sigma, n_extra)
}

fn solver_energies(
    state: &SurfaceState,
    derived: &DerivedFields,
    sigma: f64,
    n_extra: usize,
) -> Result<Vec<f64>> {
    let (g, v) = (&state.g, &state.v);
    let mut out = vec![0.5 * sobolev_norm(g, 2.5)?.powi(2) + 0.5 * sobolev_norm(v, 2.0)?.powi(2)];
    let c = &derived.c;
    let cd = |f: &Field| c.mul(&f.d());
    let (mut gk, mut vk) = (cd(g), cd(v));
    for _ in 0..2 {
        gk = cd(&gk);
        vk = cd(&vk);
    }
    let inv_sqrt_c = c.map_real(|x| x.powf(-0.5));
    for i in 0..=n_extra {
        if i > 0 {
            gk = cd(&gk);
            vk = cd(&vk);
        }
        let kinetic = inv_sqrt_c.mul(&(&vk - &derived.a.mul(&gk)));
        out.push(0.5 * l2sq(&kinetic) + 0.5 * sigma * hhalf_sq(&gk));
    }
    Ok(out)
}

/// Difference energy between two states, weights taken from `s1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeltaEnergy {
    pub e2: f64,
    pub e2_5: f64,
    pub e3: f64,
}

impl DeltaEnergy {
    pub fn total(&self) -> f64 {
        self.e2 + self.e2_5 + self.e3
    }
}

pub fn energy_delta(s1: &SurfaceState, s2: &SurfaceState, sigma: f64) -> Result<DeltaEnergy> {
    s1.g.check_same_grid(&s2.g)?;
    let tol = 1e-9 * (1.0 + s1.t.abs());
    if (s1.t - s2.t).abs() > tol {
        return Err(Error::param(
            "t",
            format!("states are at different times {} and {}", s1.t, s2.t),
        ));
    }
    let d1 = derive(s1, sigma, true)?;
    let d2 = derive(s2, sigma, true)?;
    let (c1, c2) = (&d1.c, &d2.c);
    let dg = &s1.g - &s2.g;
    let dv = &s1.v - &s2.v;
    let e2 = 0.5 * sobolev_norm(&dg, 1.0)?.powi(2) + sobolev_norm(&dv, 0.5)?.powi(2);

    let inv_sqrt_c1 = c1.map_real(|x| x.powf(-0.5));
    let e2_5 = 0.5 * l2sq(&inv_sqrt_c1.mul(&c1.mul(&dv.d())))
        + 0.5 * sigma * hhalf_sq(&c1.mul(&dg.d()));

    let cd1 = |f: &Field| c1.mul(&f.d());
    let cd2 = |f: &Field| c2.mul(&f.d());
    let zeta = &(&cd1(&s1.v) - &cd2(&s2.v)).half_d()
        - &d1.a.mul(&(&cd1(&s1.g) - &cd2(&s2.g)).half_d());
    let curv = &cd1(&cd1(&s1.g)) - &cd2(&cd2(&s2.g));
    let e3 = 0.5 * l2sq(&zeta) + 0.5 * sigma * l2sq(&inv_sqrt_c1.mul(&curv));
    Ok(DeltaEnergy { e2, e2_5, e3 })
}

/// `(||w||_inf + |||D| w||_2, ||f||_{Hdot^{1/2}} + (1 + ||d c||_2) ||f/c||_2)`,
/// both evaluated on the same field.
pub fn wc_norms(f: &Field, state: &SurfaceState) -> Result<(f64, f64)> {
    let c = crate::state::conformal_factor(&state.g)?;
    let w = f.max_abs() + c.mul(&f.d()).norm_l2();
    let cn = hhalf(f) + (1.0 + c.d().norm_l2()) * f.div(&c).norm_l2();
    Ok((w, cn))
}

/// `A_{1,sigma} / |Z_a| = c (A1 + sigma |d| kappa)`.
pub fn taylor_sign(state: &SurfaceState, sigma: f64, gravity: bool) -> Result<Field> {
    let derived = derive(state, sigma, gravity)?;
    Ok(taylor_from(&derived, sigma))
}

fn taylor_from(derived: &DerivedFields, sigma: f64) -> Field {
    derived.c.mul(&a1_sigma(derived, sigma))
}

/// `||Z_a - 1||_{H^3.5} + ||1/Z_a - 1||_{H^3.5} + ||Z_t||_{H^3}`.
pub fn blowup_quantity(state: &SurfaceState) -> Result<f64> {
    let derived = derive(state, 0.0, true)?;
    blowup_from(state, &derived)
}

fn blowup_from(state: &SurfaceState, derived: &DerivedFields) -> Result<f64> {
    let one = Complex64::new(1.0, 0.0);
    let zap = zap_power(&state.g, 1.0).add_scalar(-one);
    let izap = zap_power(&state.g, -1.0).add_scalar(-one);
    Ok(sobolev_norm(&zap, 3.5)? + sobolev_norm(&izap, 3.5)? + sobolev_norm(&derived.d, 3.0)?)
}

/// Every diagnostic at one instant.
#[derive(Clone, Debug, PartialEq)]
pub struct EnergyReport {
    pub t: f64,
    pub e_sigma: [f64; 5],
    pub e_sigma_total: f64,
    pub cal_e_sigma: [f64; 2],
    pub cal_e_sigma_total: f64,
    /// `E_{3.5}, E_{4.5}, ...`
    pub solver: Vec<f64>,
    pub a1_min: f64,
    pub taylor_min: f64,
    pub kappa_linf: f64,
    pub sigma13_kappa_linf: f64,
    pub blowup: f64,
    /// Relative residual of the fundamental equation, when neighbouring
    /// checkpoints are available.
    pub residual_fundamental: Option<f64>,
}

impl EnergyReport {
    pub fn compute(state: &SurfaceState, sigma: f64, gravity: bool) -> Result<Self> {
        Self::compute_with(state, sigma, gravity, 0)
    }

    pub fn compute_with(
        state: &SurfaceState,
        sigma: f64,
        gravity: bool,
        n_extra: usize,
    ) -> Result<Self> {
        let kit = Kit::new(state, sigma, gravity)?;
        let es = e_sigma(&kit);
        let cal = cal_e_sigma(&kit);
        let kappa_linf = kit.derived.kappa.max_abs();
        Ok(Self {
            t: state.t,
            e_sigma: es.components(),
            e_sigma_total: es.total(),
            cal_e_sigma: [cal.first_total(), cal.second_total()],
            cal_e_sigma_total: cal.total(),
            solver: solver_energies(state, &kit.derived, sigma, n_extra)?,
            a1_min: kit.derived.a1.min_re(),
            taylor_min: taylor_from(&kit.derived, sigma).min_re(),
            kappa_linf,
            sigma13_kappa_linf: sigma.cbrt() * kappa_linf,
            blowup: blowup_from(state, &kit.derived)?,
            residual_fundamental: None,
        })
    }

    pub fn is_finite(&self) -> bool {
        self.e_sigma_total.is_finite()
            && self.cal_e_sigma_total.is_finite()
            && self.solver.iter().all(|x| x.is_finite())
            && self.blowup.is_finite()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;
    use crate::state::{gen_crest, gen_wave, CrestSpec};
    use std::sync::Arc;

    fn smooth_state(grid: &Arc<Grid>) -> SurfaceState {
        let g = Field::from_fn_real(grid, |x| 0.1 * x.cos() + 0.05 * (2.0 * x + 0.3).sin());
        let v = Field::from_fn_real(grid, |x| 0.08 * (x + 1.0).sin() - 0.03 * (3.0 * x).cos());
        SurfaceState::new(0.0, g, v).unwrap()
    }

    #[test]
    fn hhalf_of_mode() {
        let grid = Grid::new(64, 3.0).unwrap();
        let f = Field::mode(&grid, 4).scale(2.0);
        let want = 2.0 * (grid.base_wavenumber() * 4.0 * grid.length()).sqrt();
        assert!((hhalf(&f) - want).abs() < 1e-12);
        assert!(hhalf(&Field::constant(&grid, 3.0.into())) < 1e-14);
        assert!(sobolev_norm(&f, -1.0).is_err());
    }

    #[test]
    fn flat_state_energies_vanish() {
        let grid = Grid::periodic(64).unwrap();
        let s = SurfaceState::flat(&grid);
        let r = EnergyReport::compute(&s, 0.5, true).unwrap();
        assert_eq!(r.e_sigma_total, 0.0);
        assert_eq!(r.cal_e_sigma_total, 0.0);
        assert!(r.solver.iter().all(|&x| x == 0.0));
        assert_eq!(r.blowup, 0.0);
        assert_eq!(r.a1_min, 1.0);
        assert_eq!(r.taylor_min, 1.0);
        let t = taylor_sign(&s, 3.0, true).unwrap();
        assert!((t.add_scalar((-1.0).into())).max_abs() == 0.0);
    }

    #[test]
    fn e_sigma_one_identity() {
        let grid = Grid::periodic(128).unwrap();
        let s = smooth_state(&grid);
        let kit = Kit::new(&s, 0.4, true).unwrap();
        let direct = hhalf_sq(&kit.forcing());
        let es = e_sigma(&kit);
        assert!((es.e1[0] - direct).abs() <= 1e-10 * direct);
    }

    #[test]
    fn zero_sigma_weights() {
        let grid = Grid::periodic(128).unwrap();
        let s = smooth_state(&grid);
        let cal = energy_cal_e_sigma(&s, 0.0).unwrap();
        assert!(cal.first[2..].iter().all(|&x| x == 0.0));
        assert!(cal.second[2..].iter().all(|&x| x == 0.0));
        assert!(cal.first[0] > 0.0 && cal.second[0] > 0.0);
        let es = energy_e_sigma(&s, 0.0, true).unwrap();
        assert_eq!(es.e1[2], 0.0);
        assert!((es.e0.iter().sum::<f64>() - es.e0[2]).abs() == 0.0);
    }

    #[test]
    fn cal_e_sigma_monotone_in_sigma() {
        let grid = Grid::periodic(128).unwrap();
        let s = smooth_state(&grid);
        let mut last = -1.0;
        for sigma in [0.0, 0.01, 0.1, 1.0, 10.0] {
            let e = energy_cal_e_sigma(&s, sigma).unwrap().total();
            assert!(e >= last);
            last = e;
        }
    }

    #[test]
    fn solver_energy_small_wave() {
        let grid = Grid::periodic(64).unwrap();
        let amp = 1e-3;
        let s = gen_wave(amp, 1, &grid).unwrap();
        let e = energy_solver(&s, 0.0, 0).unwrap();
        let cos_norm_sq = 2f64.powf(2.5) * std::f64::consts::PI;
        let want = 0.5 * amp * amp * cos_norm_sq;
        assert!((e[0] - want).abs() < 1e-12 * want + 1e-14);
        assert_eq!(e.len(), 2);
    }

    #[test]
    fn delta_energy_properties() {
        let grid = Grid::periodic(64).unwrap();
        let s1 = smooth_state(&grid);
        let flat = SurfaceState::flat(&grid);
        assert_eq!(energy_delta(&s1, &s1, 0.3).unwrap().total(), 0.0);
        let d = energy_delta(&s1, &flat, 0.3).unwrap();
        let want = 0.5 * sobolev_norm(&s1.g, 1.0).unwrap().powi(2)
            + sobolev_norm(&s1.v, 0.5).unwrap().powi(2);
        assert!((d.e2 - want).abs() < 1e-14);
        let r = energy_delta(&flat, &s1, 0.3).unwrap();
        assert!((r.total() - d.total()).abs() > 1e-8);
        let later = flat.clone().with_time(1.0);
        assert!(energy_delta(&s1, &later, 0.3).is_err());
    }

    #[test]
    fn wc_norms_flat() {
        let grid = Grid::periodic(64).unwrap();
        let flat = SurfaceState::flat(&grid);
        let l = grid.length();
        let (w, c) = wc_norms(&Field::mode(&grid, 3), &flat).unwrap();
        assert!((w - (1.0 + 3.0 * l.sqrt())).abs() < 1e-12);
        assert!((c - ((3.0 * l).sqrt() + l.sqrt())).abs() < 1e-12);
        let (w0, c0) = wc_norms(&Field::zeros(&grid), &flat).unwrap();
        assert_eq!((w0, c0), (0.0, 0.0));
        let (wc, cc) = wc_norms(&Field::constant(&grid, 2.0.into()), &flat).unwrap();
        assert!((wc - 2.0).abs() < 1e-14 && (cc - 2.0 * l.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn blowup_grows_with_sharpness() {
        let grid = Grid::periodic(1024).unwrap();
        let q = |eta| {
            let s = gen_crest(&CrestSpec::new(0.3, eta, 0.0).unwrap(), &grid).unwrap();
            blowup_quantity(&s).unwrap()
        };
        assert!(q(0.1) > q(0.2));
    }

    #[test]
    fn e_sigma_grows_as_crest_sharpens() {
        let grid = Grid::periodic(2048).unwrap();
        let mut last = 0.0;
        for eta in [0.4, 0.2, 0.1] {
            let s = gen_crest(&CrestSpec::new(0.3, eta, 0.0).unwrap(), &grid).unwrap();
            let e = energy_e_sigma(&s, 0.0, true).unwrap().total();
            assert!(e.is_finite() && e > last);
            last = e;
        }
    }

    #[test]
    fn taylor_min_crosses_zero_for_large_sigma() {
        let grid = Grid::periodic(512).unwrap();
        let s = gen_crest(&CrestSpec::new(0.3, 0.3, 0.0).unwrap(), &grid).unwrap();
        let mins: Vec<f64> = [0.0, 0.1, 1.0, 10.0]
            .iter()
            .map(|&sg| taylor_sign(&s, sg, true).unwrap().min_re())
            .collect();
        assert!(mins[0] > 0.0);
        assert!(mins.windows(2).all(|w| w[1] < w[0]));
        assert!(*mins.last().unwrap() < 0.0);
    }
}
