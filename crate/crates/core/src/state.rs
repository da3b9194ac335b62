//! The `(g, v)` phase space, its algebraic closure and the conformal variables.
//!
//! `g` is the interface angle and `v = Im(omega conj(Z_t))`. The conformal
//! derivative is recovered as `Z_a = exp(i (I + H) g)`, so `c = 1/|Z_a|` and
//! `omega = Z_a/|Z_a| = exp(i g)`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::brackets::comm;
use crate::error::{Error, Result};
use crate::spectral::{poisson_smooth, Field, Grid};

pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

/// Relative tolerance when collapsing a computed field to a real one.
pub const REALITY_TOL: f64 = 1e-10;

/// Largest `|Z_a|` accepted from the crest generator.
pub const DYNAMIC_RANGE: f64 = 1e8;

#[derive(Clone, Debug)]
pub struct SurfaceState {
    pub t: f64,
    pub g: Field,
    pub v: Field,
}

impl SurfaceState {
    pub fn new(t: f64, g: Field, v: Field) -> Result<Self> {
        g.check_same_grid(&v)?;
        if !t.is_finite() {
            return Err(Error::StateQuality(format!("time is not finite: {t}")));
        }
        if !g.is_finite() || !v.is_finite() {
            return Err(Error::StateQuality("non-finite samples in (g, v)".into()));
        }
        let g = g.into_real(REALITY_TOL, "g")?;
        let v = v.into_real(REALITY_TOL, "v")?;
        Ok(Self { t, g, v })
    }

    pub fn flat(grid: &Arc<Grid>) -> Self {
        Self {
            t: 0.0,
            g: Field::zeros(grid),
            v: Field::zeros(grid),
        }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        self.g.grid()
    }

    /// `||g||_inf < pi`: the angle chart has not overturned.
    pub fn angle_in_chart(&self) -> bool {
        self.g.max_abs() < PI
    }

    pub fn with_time(mut self, t: f64) -> Self {
        self.t = t;
        self
    }
}

/// Everything algebraically determined by `(g, v)`.
#[derive(Clone, Debug)]
pub struct DerivedFields {
    pub c: Field,
    pub omega: Field,
    pub b: Field,
    pub a: Field,
    /// `Z_t`.
    pub d: Field,
    pub a1: Field,
    pub e2: Field,
    pub theta: Field,
    /// `c dg`, the curvature.
    pub kappa: Field,
}

pub(crate) fn gravity_value(gravity: bool) -> f64 {
    if gravity {
        1.0
    } else {
        0.0
    }
}

fn real(f: Field, what: &str) -> Result<Field> {
    f.into_real(REALITY_TOL, what)
}

/// `c = exp(-i H g)`, checked for underflow and overflow.
pub fn conformal_factor(g: &Field) -> Result<Field> {
    let c = real((g.h() * (-I)).exp(), "c")?;
    let (lo, hi) = (c.min_re(), c.max_re());
    if !(lo > 1e-300 && hi.is_finite()) {
        return Err(Error::StateQuality(format!(
            "c = exp(-iHg) out of range: min {lo:.3e}, max {hi:.3e}"
        )));
    }
    Ok(c)
}

/// The closure `c, omega, b, a, d, A1, e2, Theta`. Every product is dealiased.
///
/// The gravity flag multiplies both gravitational contributions: the `Re omega`
/// term of `e2` and the unit term of `A1`.
pub fn derive(state: &SurfaceState, sigma: f64, gravity: bool) -> Result<DerivedFields> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::param("sigma", format!("must be >= 0, got {sigma}")));
    }
    let gv = gravity_value(gravity);
    let (g, v) = (&state.g, &state.v);
    let c = conformal_factor(g)?;
    let omega = (g * I).exp();
    let v_over_c = v.quotient(&c);
    let h_voc = v_over_c.h();

    let b = real(
        c.product(v).h() * (2.0 * I) + comm(&c.product(&c), &v_over_c) * I,
        "b",
    )?;
    let a = real(c.product(&h_voc) * I, "a")?;
    let d = omega.product(&c.product(&v_over_c.minus_h())) * (-I);
    let a1 = real(
        comm(&d, &d.conj().d()).im().scale(-1.0).add_scalar(gv.into()),
        "A1",
    )?;
    let kappa = c.product(&g.d());
    let theta = kappa.plus_h();
    let capillary = comm(&c, &theta.d()).im();
    let e2 = real(
        &(&omega.re().scale(gv) - &a1.product(&c)) + &capillary.scale(sigma),
        "e2",
    )?;
    Ok(DerivedFields {
        c,
        omega,
        b,
        a,
        d,
        a1,
        e2,
        theta,
        kappa,
    })
}

/// `(Z_a, Z_t)` at time `t`.
#[derive(Clone, Debug)]
pub struct ConformalState {
    pub t: f64,
    pub zap: Field,
    pub zt: Field,
}

/// `Z_a^p = exp(p i (I + H) g)`, the branch fixed by the angle. No dealiasing,
/// so `p = 1` round-trips through [`from_conformal`] exactly.
pub fn zap_power(g: &Field, p: f64) -> Field {
    (g.plus_h() * (I * p)).exp()
}

pub fn to_conformal(state: &SurfaceState) -> Result<ConformalState> {
    // Z_t only needs d; the remaining closure is cheap enough to reuse.
    let derived = derive(state, 0.0, true)?;
    Ok(ConformalState {
        t: state.t,
        zap: zap_power(&state.g, 1.0),
        zt: derived.d,
    })
}

/// `g = Im log Z_a` with the phase unwrapped along the grid, and
/// `v = Im(omega conj(Z_t))`.
pub fn from_conformal(cs: &ConformalState) -> Result<SurfaceState> {
    cs.zap.check_same_grid(&cs.zt)?;
    let zap = cs.zap.values();
    if zap.iter().any(|z| !(z.norm() > 0.0) || !z.norm().is_finite()) {
        return Err(Error::StateQuality("Z_a vanishes or is not finite".into()));
    }
    let n = zap.len();
    let mut phase = Vec::with_capacity(n);
    let mut current = zap[0].arg();
    phase.push(current);
    for j in 1..=n {
        let step = (zap[j % n] / zap[j - 1]).arg();
        current += step;
        if j < n {
            phase.push(current);
        }
    }
    let winding = ((current - phase[0]) / (2.0 * PI)).round() as i64;
    if winding != 0 {
        return Err(Error::Winding(winding));
    }
    let grid = cs.zap.grid().clone();
    let g = Field::from_real(grid.clone(), phase);
    let omega = cs.zap.map(|z| z / z.norm());
    let v = omega.mul(&cs.zt.conj()).im();
    SurfaceState::new(cs.t, g, v)
}

/// Angled-crest family `Z_a = (1 - exp(-eta) exp(-i(x - x0)))^(nu - 1)`.
///
/// Holomorphic with mean one; as `eta -> 0` the interface develops an interior
/// angle `nu pi` at `x0`. Poisson smoothing by `eps` maps `eta` to `eta + eps`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CrestSpec {
    pub nu: f64,
    pub eta: f64,
    pub alpha0: f64,
}

impl CrestSpec {
    pub fn new(nu: f64, eta: f64, alpha0: f64) -> Result<Self> {
        let spec = Self { nu, eta, alpha0 };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.nu > 0.0 && self.nu < 0.5) {
            return Err(Error::param("nu", format!("must lie in (0, 1/2), got {}", self.nu)));
        }
        if !(self.eta >= 0.0 && self.eta.is_finite()) {
            return Err(Error::param("eta", format!("must be >= 0, got {}", self.eta)));
        }
        if !self.alpha0.is_finite() {
            return Err(Error::param("alpha0", "must be finite"));
        }
        let peak = self.peak_zap();
        if !(peak <= DYNAMIC_RANGE) {
            return Err(Error::param(
                "eta",
                format!(
                    "crest too sharp: max |Z_a| = {peak:.3e} exceeds {DYNAMIC_RANGE:.0e}"
                ),
            ));
        }
        Ok(())
    }

    /// `max |Z_a| = (1 - q)^(nu - 1)`.
    pub fn peak_zap(&self) -> f64 {
        (1.0 - (-self.eta).exp()).powf(self.nu - 1.0)
    }

    /// Closed-form `max |kappa| = (1 - nu) q (1 - q)^(-nu)`, attained at the crest.
    pub fn peak_curvature(&self) -> f64 {
        let q = (-self.eta).exp();
        (1.0 - self.nu) * q * (1.0 - q).powf(-self.nu)
    }

    /// The same family member after Poisson smoothing by `eps`.
    pub fn smoothed(&self, eps: f64) -> Self {
        Self {
            eta: self.eta + eps,
            ..*self
        }
    }

    /// Closed form of `Z_a` at `x`.
    pub fn zap_at(&self, x: f64) -> Complex64 {
        let q = (-self.eta).exp();
        let base = Complex64::new(1.0, 0.0) - (-I * (x - self.alpha0)).exp() * q;
        base.powf(self.nu - 1.0)
    }

    /// Closed form of `g = (nu - 1) arg(1 - q exp(-i(x - x0)))`.
    pub fn angle_at(&self, x: f64) -> f64 {
        let q = (-self.eta).exp();
        let base = Complex64::new(1.0, 0.0) - (-I * (x - self.alpha0)).exp() * q;
        (self.nu - 1.0) * base.arg()
    }
}

/// Crest data at rest.
pub fn gen_crest(spec: &CrestSpec, grid: &Arc<Grid>) -> Result<SurfaceState> {
    spec.validate()?;
    let zap = Field::from_fn(grid, |x| spec.zap_at(x));
    from_conformal(&ConformalState {
        t: 0.0,
        zap,
        zt: Field::zeros(grid),
    })
}

/// Crest data smoothed by `eps`, built directly from the family member with
/// depth `eta + eps`. This also covers the singular member `eta = 0`.
pub fn gen_crest_smoothed(spec: &CrestSpec, eps: f64, grid: &Arc<Grid>) -> Result<SurfaceState> {
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(Error::param("mollify_eps", format!("must be >= 0, got {eps}")));
    }
    gen_crest(&spec.smoothed(eps), grid)
}

/// Standing-wave seed `g = A cos(k x)`, `v = 0`.
pub fn gen_wave(amplitude: f64, k: u32, grid: &Arc<Grid>) -> Result<SurfaceState> {
    if !amplitude.is_finite() {
        return Err(Error::param("A", "must be finite"));
    }
    let band = grid.dealias_band();
    if k == 0 || k as usize > band {
        return Err(Error::param("k", format!("must lie in 1..={band}, got {k}")));
    }
    let xi = grid.base_wavenumber() * k as f64;
    let g = Field::from_fn_real(grid, |x| amplitude * (xi * x).cos());
    SurfaceState::new(0.0, g, Field::zeros(grid))
}

/// Poisson smoothing of `(Z_a - 1, Z_t)`.
pub fn mollify_state(state: &SurfaceState, eps: f64) -> Result<SurfaceState> {
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(Error::param("eps", format!("must be >= 0, got {eps}")));
    }
    if eps == 0.0 {
        return Ok(state.clone());
    }
    let cs = to_conformal(state)?;
    let one = Complex64::new(1.0, 0.0);
    let zap = poisson_smooth(&cs.zap.add_scalar(-one), eps)?.add_scalar(one);
    let zt = poisson_smooth(&cs.zt, eps)?;
    from_conformal(&ConformalState { t: cs.t, zap, zt })
}

/// Curvature `kappa = c dg`, which is also `Re Theta`.
pub fn curvature(state: &SurfaceState) -> Result<Field> {
    let c = conformal_factor(&state.g)?;
    Ok(c.product(&state.g.d()))
}

/// `X = omega d(1/Z_a)`, from the conformal variables.
pub fn omega_d_inv_zap(cs: &ConformalState) -> Field {
    let omega = cs.zap.map(|z| z / z.norm());
    omega.product(&cs.zap.recip().d())
}

/// `Theta = i X - i Re (I - H) X` with `X = omega d(1/Z_a)`, an independent
/// route to `(I + H)(c dg)`.
pub fn theta_conformal(cs: &ConformalState) -> Field {
    let x = omega_d_inv_zap(cs);
    &(&x * I) - &(x.minus_h().re() * I)
}

/// `Re Theta` computed from the conformal variables.
pub fn curvature_conformal(cs: &ConformalState) -> Field {
    theta_conformal(cs).re()
}

/// Integer rescaling `g(x) -> g(lambda x)`, `v(x) -> v(lambda x)/lambda`.
/// Surface tension must follow `sigma -> sigma / lambda^3`; see [`scaled_sigma`].
pub fn scale_state(state: &SurfaceState, lambda: f64) -> Result<SurfaceState> {
    if !(lambda >= 1.0 && lambda.fract() == 0.0) {
        return Err(Error::param(
            "lambda",
            format!("must be a positive integer on a periodic grid, got {lambda}"),
        ));
    }
    let n = state.grid().len();
    let step = lambda as usize;
    let pick = |f: &Field, s: f64| -> Vec<f64> {
        let vals = f.real_values();
        (0..n).map(|j| vals[(j * step) % n] * s).collect()
    };
    let grid = state.grid().clone();
    SurfaceState::new(
        state.t,
        Field::from_real(grid.clone(), pick(&state.g, 1.0)),
        Field::from_real(grid, pick(&state.v, 1.0 / lambda)),
    )
}

pub fn scaled_sigma(sigma: f64, lambda: f64) -> f64 {
    sigma / lambda.powi(3)
}

/// `A_{1,sigma} = A1 + sigma |d| kappa`.
pub fn a1_sigma(derived: &DerivedFields, sigma: f64) -> Field {
    &derived.a1 + &derived.kappa.abs_d().scale(sigma)
}

/// `Z_tbar` holomorphy and friends: `||P_A(f - mean f)||_2`.
pub fn antiholo_residual(f: &Field) -> f64 {
    crate::spectral::project_antiholo(&f.add_scalar(-f.mean())).norm_l2()
}
