//! Time integration of the `(g, v)` system.

use std::sync::Arc;

use num_complex::Complex64;

use crate::energy::EnergyReport;
use crate::error::{Error, Result};
use crate::spectral::{mollify, Field, Grid};
use crate::state::{derive, gravity_value, to_conformal, zap_power, SurfaceState, I};

/// RK4 stability radius on the imaginary axis.
const RK4_IMAGINARY_RADIUS: f64 = 2.8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TimeStep {
    Auto,
    Fixed(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    Exact,
    Mollified,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimParams {
    pub sigma: f64,
    pub gravity: bool,
    pub delta: f64,
    pub eps_visc: f64,
    pub dt: TimeStep,
    pub t_final: f64,
    pub cfl: f64,
    pub output_every: usize,
    pub blowup_ceiling: f64,
    /// Compute an [`EnergyReport`] at each checkpoint.
    pub reports: bool,
}

impl Default for SimParams {
    fn default() -> Self {
        Self {
            sigma: 0.0,
            gravity: true,
            delta: 0.0,
            eps_visc: 0.0,
            dt: TimeStep::Auto,
            t_final: 1.0,
            cfl: 0.5,
            output_every: 10,
            blowup_ceiling: 1e6,
            reports: true,
        }
    }
}

impl SimParams {
    pub fn validate(&self) -> Result<()> {
        let nonneg = |name: &'static str, x: f64| {
            if x >= 0.0 && x.is_finite() {
                Ok(())
            } else {
                Err(Error::param(name, format!("must be finite and >= 0, got {x}")))
            }
        };
        nonneg("sigma", self.sigma)?;
        nonneg("delta", self.delta)?;
        nonneg("eps_visc", self.eps_visc)?;
        nonneg("T", self.t_final)?;
        if let TimeStep::Fixed(dt) = self.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(Error::param("dt", format!("must be > 0, got {dt}")));
            }
        }
        if !(self.cfl > 0.0 && self.cfl.is_finite()) {
            return Err(Error::param("cfl", format!("must be > 0, got {}", self.cfl)));
        }
        if self.output_every == 0 {
            return Err(Error::param("output_every", "must be >= 1"));
        }
        if !(self.blowup_ceiling > 0.0) {
            return Err(Error::param("blowup_ceiling", "must be > 0"));
        }
        Ok(())
    }

    /// The mollified system whenever either regularisation is switched on.
    pub fn scheme(&self) -> Scheme {
        if self.delta > 0.0 || self.eps_visc > 0.0 {
            Scheme::Mollified
        } else {
            Scheme::Exact
        }
    }
}

/// The bracketed right-hand sides before mollification.
fn raw_rhs(state: &SurfaceState, sigma: f64, gravity: bool) -> Result<(Field, Field)> {
    let d = derive(state, sigma, gravity)?;
    let (g, v) = (&state.g, &state.v);
    let cdg = &d.kappa;
    let cdv = d.c.product(&v.d());
    let dg = g.d();
    let dv = v.d();
    let gdot = &(&d.a.product(cdg) - &cdv) - &d.b.product(&dg);
    let capillary = (d.c.product(&cdg.d()).h() * (-I)).scale(sigma);
    let vdot = &(&(&capillary - &d.a.product(&cdv)) - &d.b.product(&dv))
        + &(&d.a.product(&d.a).product(cdg) + &d.e2);
    let gdot = gdot.into_real(1e-11, "dg/dt")?;
    let vdot = vdot.into_real(1e-11, "dv/dt")?;
    Ok((gdot, vdot))
}

/// `(dg/dt, dv/dt)` of the unregularised system.
pub fn rhs(state: &SurfaceState, p: &SimParams) -> Result<(Field, Field)> {
    raw_rhs(state, p.sigma, p.gravity)
}

/// `J_delta^2` applied to both right-hand sides, minus `eps_visc |d| v` in `dv/dt`.
pub fn rhs_mollified(state: &SurfaceState, p: &SimParams) -> Result<(Field, Field)> {
    let (gdot, vdot) = raw_rhs(state, p.sigma, p.gravity)?;
    // J_delta^2 has multiplier exp(-(delta xi)^2), i.e. J at delta * sqrt(2).
    let width = p.delta * std::f64::consts::SQRT_2;
    let gdot = mollify(&gdot, width)?;
    let mut vdot = mollify(&vdot, width)?;
    if p.eps_visc > 0.0 {
        vdot = &vdot - &state.v.abs_d().scale(p.eps_visc);
    }
    Ok((gdot, vdot))
}

fn eval(state: &SurfaceState, p: &SimParams, which: Scheme) -> Result<(Field, Field)> {
    match which {
        Scheme::Exact => rhs(state, p),
        Scheme::Mollified => rhs_mollified(state, p),
    }
}

fn shifted(state: &SurfaceState, k: &(Field, Field), h: f64) -> SurfaceState {
    SurfaceState {
        t: state.t + h,
        g: &state.g + &k.0.scale(h),
        v: &state.v + &k.1.scale(h),
    }
}

/// One classical RK4 step.
pub fn step_rk4(
    state: &SurfaceState,
    dt: f64,
    p: &SimParams,
    which: Scheme,
) -> Result<SurfaceState> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::param("dt", format!("must be > 0, got {dt}")));
    }
    let fail = |e: Error| Error::Integration {
        t: state.t,
        reason: e.to_string(),
    };
    let k1 = eval(state, p, which).map_err(fail)?;
    let k2 = eval(&shifted(state, &k1, 0.5 * dt), p, which).map_err(fail)?;
    let k3 = eval(&shifted(state, &k2, 0.5 * dt), p, which).map_err(fail)?;
    let k4 = eval(&shifted(state, &k3, dt), p, which).map_err(fail)?;
    let combine = |a: &Field, b: &Field, c: &Field, d: &Field| {
        &(&(a + d) + &(b + c).scale(2.0)) * (dt / 6.0)
    };
    let g = &state.g + &combine(&k1.0, &k2.0, &k3.0, &k4.0);
    let v = &state.v + &combine(&k1.1, &k2.1, &k3.1, &k4.1);
    if !g.is_finite() || !v.is_finite() {
        return Err(Error::Integration {
            t: state.t + dt,
            reason: "non-finite values after RK4 step".into(),
        });
    }
    Ok(SurfaceState {
        t: state.t + dt,
        g,
        v,
    })
}

/// Stable step from the dispersive and advective bounds; infinite when the
/// state has no dynamics at all.
pub fn cfl_dt(state: &SurfaceState, p: &SimParams) -> Result<f64> {
    let d = derive(state, p.sigma, p.gravity)?;
    let grid = state.grid();
    let xi = grid.max_wavenumber();
    let cmax = d.c.max_re();
    let omega = (gravity_value(p.gravity) * xi * cmax + p.sigma * (xi * cmax).powi(3)).sqrt();
    let dispersive = if omega > 0.0 {
        p.cfl * RK4_IMAGINARY_RADIUS / omega
    } else {
        f64::INFINITY
    };
    let speed = d
        .b
        .values()
        .iter()
        .zip(d.a.values())
        .zip(d.c.values())
        .map(|((b, a), c)| b.re.abs() + (a.re * c.re).abs())
        .fold(0.0, f64::max);
    let advective = if speed > 0.0 {
        p.cfl * grid.spacing() / speed
    } else {
        f64::INFINITY
    };
    Ok(dispersive.min(advective))
}

#[derive(Clone, Debug, PartialEq)]
pub enum Status {
    Completed,
    BlowUp { t: f64, quantity: f64 },
    NumericalFailure { t: f64, reason: String },
}

#[derive(Clone, Debug)]
pub struct Checkpoint {
    pub step: usize,
    pub state: SurfaceState,
    pub report: Option<EnergyReport>,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub params: SimParams,
    pub provenance: String,
    pub checkpoints: Vec<Checkpoint>,
    pub status: Status,
    /// Last state that passed all checks.
    pub last_state: SurfaceState,
}

impl Trajectory {
    pub fn grid(&self) -> &Arc<Grid> {
        self.last_state.grid()
    }

    pub fn final_state(&self) -> &SurfaceState {
        &self.last_state
    }

    pub fn times(&self) -> Vec<f64> {
        self.checkpoints.iter().map(|c| c.state.t).collect()
    }
}

/// Steps a state to `t_final`, landing on it exactly.
pub struct Integrator {
    params: SimParams,
    scheme: Scheme,
    state: SurfaceState,
    steps: usize,
    t_final: f64,
}

impl Integrator {
    pub fn new(initial: SurfaceState, params: SimParams) -> Result<Self> {
        params.validate()?;
        let t_final = initial.t + params.t_final;
        Ok(Self {
            scheme: params.scheme(),
            params,
            state: initial,
            steps: 0,
            t_final,
        })
    }

    pub fn state(&self) -> &SurfaceState {
        &self.state
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn params(&self) -> &SimParams {
        &self.params
    }

    pub fn finished(&self) -> bool {
        self.t_final - self.state.t <= 1e-12 * self.t_final.abs().max(1.0)
    }

    fn next_dt(&self) -> Result<f64> {
        let remaining = self.t_final - self.state.t;
        let dt = match self.params.dt {
            TimeStep::Fixed(dt) => dt,
            TimeStep::Auto => cfl_dt(&self.state, &self.params)?,
        };
        // Absorb a rounding sliver into the last step.
        if dt >= remaining * (1.0 - 1e-9) {
            Ok(remaining)
        } else {
            Ok(dt)
        }
    }

    /// Advances one step; `None` once `t_final` is reached.
    pub fn step(&mut self) -> Result<Option<&SurfaceState>> {
        if self.finished() {
            return Ok(None);
        }
        let dt = self.next_dt()?;
        let mut next = step_rk4(&self.state, dt, &self.params, self.scheme)?;
        if self.t_final - next.t <= 1e-12 * self.t_final.abs().max(1.0) {
            next.t = self.t_final;
        }
        self.state = next;
        self.steps += 1;
        Ok(Some(&self.state))
    }
}

/// Integrates to `t_final`, recording checkpoints every `output_every` steps
/// and at the end. `sink` sees each checkpoint once its fundamental-equation
/// residual is known, i.e. one checkpoint late.
pub fn evolve(
    initial: SurfaceState,
    params: SimParams,
    provenance: impl Into<String>,
    mut sink: impl FnMut(&Checkpoint),
) -> Result<Trajectory> {
    let mut integ = Integrator::new(initial, params.clone())?;
    let mut traj = Trajectory {
        params: params.clone(),
        provenance: provenance.into(),
        checkpoints: Vec::new(),
        status: Status::Completed,
        last_state: integ.state().clone(),
    };
    let mut emitted = 0;

    let record = |traj: &mut Trajectory, step: usize, state: &SurfaceState| -> Result<f64> {
        let report = if params.reports {
            Some(EnergyReport::compute(state, params.sigma, params.gravity)?)
        } else {
            None
        };
        let quantity = match &report {
            Some(r) => r.blowup,
            None => crate::energy::blowup_quantity(state)?,
        };
        traj.checkpoints.push(Checkpoint {
            step,
            state: state.clone(),
            report,
        });
        let n = traj.checkpoints.len();
        if n >= 3 {
            fill_residual(traj, n - 2);
        }
        Ok(quantity)
    };

    let check = |traj: &mut Trajectory, step: usize, state: &SurfaceState| -> bool {
        match record(traj, step, state) {
            Ok(q) if q.is_finite() && q <= params.blowup_ceiling => true,
            Ok(q) => {
                traj.status = Status::BlowUp { t: state.t, quantity: q };
                false
            }
            Err(e) => {
                traj.status = Status::NumericalFailure {
                    t: state.t,
                    reason: e.to_string(),
                };
                false
            }
        }
    };

    let mut alive = check(&mut traj, 0, &integ.state().clone());
    while alive {
        match integ.step() {
            Ok(None) => break,
            Ok(Some(_)) => {
                let state = integ.state().clone();
                traj.last_state = state.clone();
                let step = integ.steps();
                if step % params.output_every == 0 || integ.finished() {
                    alive = check(&mut traj, step, &state);
                }
            }
            Err(e) => {
                let t = match &e {
                    Error::Integration { t, .. } => *t,
                    _ => integ.state().t,
                };
                traj.status = Status::NumericalFailure {
                    t,
                    reason: e.to_string(),
                };
                alive = false;
            }
        }
        while emitted + 1 < traj.checkpoints.len() {
            sink(&traj.checkpoints[emitted]);
            emitted += 1;
        }
    }
    while emitted < traj.checkpoints.len() {
        sink(&traj.checkpoints[emitted]);
        emitted += 1;
    }
    Ok(traj)
}

fn fill_residual(traj: &mut Trajectory, n: usize) {
    let sigma = traj.params.sigma;
    let gravity = traj.params.gravity;
    let residual = fundamental_residual(
        &traj.checkpoints[n - 1].state,
        &traj.checkpoints[n].state,
        &traj.checkpoints[n + 1].state,
        sigma,
        gravity,
    );
    if let (Ok(r), Some(report)) = (residual, traj.checkpoints[n].report.as_mut()) {
        report.residual_fundamental = Some(r);
    }
}

/// Three-point derivative weights on a non-uniform stencil `(t0, t1, t2)` at `t1`.
fn centered_weights(t0: f64, t1: f64, t2: f64) -> [f64; 3] {
    let h1 = t1 - t0;
    let h2 = t2 - t1;
    [
        -h2 / (h1 * (h1 + h2)),
        (h2 - h1) / (h1 * h2),
        h1 / (h2 * (h1 + h2)),
    ]
}

/// Relative `L^2` residual of `D_t Zbar_t = i gravity - i A1/Z_a + sigma D_a Theta`
/// at the middle state, with `d/dt` taken by finite differences.
pub fn fundamental_residual(
    prev: &SurfaceState,
    cur: &SurfaceState,
    next: &SurfaceState,
    sigma: f64,
    gravity: bool,
) -> Result<f64> {
    let w = centered_weights(prev.t, cur.t, next.t);
    if !w.iter().all(|x| x.is_finite()) {
        return Err(Error::param("t", "checkpoint times must be distinct"));
    }
    let zt = |s: &SurfaceState| -> Result<Field> { Ok(to_conformal(s)?.zt.conj()) };
    let (z0, z1, z2) = (zt(prev)?, zt(cur)?, zt(next)?);
    let d = derive(cur, sigma, gravity)?;
    let dt_fd = &(&z0.scale(w[0]) + &z1.scale(w[1])) + &z2.scale(w[2]);
    let lhs = &dt_fd + &d.b.mul(&z1.d());
    let izap = zap_power(&cur.g, -1.0);
    let rhs = izap
        .mul(&(&(&d.a1 * (-I)) + &d.theta.d().scale(sigma)))
        .add_scalar(I * gravity_value(gravity));
    let err = (&lhs - &rhs).norm_l2();
    let scale = rhs.norm_l2();
    Ok(if scale > 1e-300 { err / scale } else { err })
}

/// Integrates `dh/dt = b(h, t)` with `h(t_0) = alpha0`, given `b` at a
/// sequence of times. `b` is interpolated with periodic cubics in space and
/// linearly in time; `substeps` RK4 steps are taken per interval.
pub fn lagrangian_path(
    times: &[f64],
    b_fields: &[Field],
    alpha0: f64,
    substeps: usize,
) -> Result<Vec<f64>> {
    if times.len() != b_fields.len() || times.is_empty() {
        return Err(Error::param("times", "need one b field per time"));
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::param("times", "must be strictly increasing"));
    }
    let length = b_fields[0].grid().length();
    let substeps = substeps.max(1);
    let mut h = alpha0.rem_euclid(length);
    let mut path = vec![h];
    for k in 0..times.len() - 1 {
        let (t0, t1) = (times[k], times[k + 1]);
        let (b0, b1) = (&b_fields[k], &b_fields[k + 1]);
        let speed = |x: f64, t: f64| {
            let s = (t - t0) / (t1 - t0);
            (1.0 - s) * cubic_periodic(b0, x) + s * cubic_periodic(b1, x)
        };
        let dt = (t1 - t0) / substeps as f64;
        for j in 0..substeps {
            let t = t0 + j as f64 * dt;
            let k1 = speed(h, t);
            let k2 = speed(h + 0.5 * dt * k1, t + 0.5 * dt);
            let k3 = speed(h + 0.5 * dt * k2, t + 0.5 * dt);
            let k4 = speed(h + dt * k3, t + dt);
            h += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        h = h.rem_euclid(length);
        path.push(h);
    }
    Ok(path)
}

/// Lagrangian flow map through the checkpoints of a trajectory, `b`
/// recomputed from each stored state.
pub fn lagrangian_map(traj: &Trajectory, alpha0: f64) -> Result<Vec<(f64, f64)>> {
    let p = &traj.params;
    let mut times = Vec::with_capacity(traj.checkpoints.len());
    let mut bs = Vec::with_capacity(traj.checkpoints.len());
    for cp in &traj.checkpoints {
        times.push(cp.state.t);
        bs.push(derive(&cp.state, p.sigma, p.gravity)?.b);
    }
    let path = lagrangian_path(&times, &bs, alpha0, 4)?;
    Ok(times.into_iter().zip(path).collect())
}

/// Four-point Lagrange interpolation of a periodic real field.
fn cubic_periodic(f: &Field, x: f64) -> f64 {
    let grid = f.grid();
    let n = grid.len() as i64;
    let h = grid.spacing();
    let u = x.rem_euclid(grid.length()) / h;
    let j = u.floor() as i64;
    let s = u - j as f64;
    let at = |k: i64| f.values()[k.rem_euclid(n) as usize].re;
    let (fm, f0, f1, f2) = (at(j - 1), at(j), at(j + 1), at(j + 2));
    -s * (s - 1.0) * (s - 2.0) / 6.0 * fm + (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0 * f0
        - (s + 1.0) * s * (s - 2.0) / 2.0 * f1
        + (s + 1.0) * s * (s - 1.0) / 6.0 * f2
}

/// Dominant-mode amplitude `Re ghat_k` over time, handy for dispersion checks.
pub fn mode_coefficient(f: &Field, k: i64) -> Complex64 {
    match f.grid().slot(k) {
        Some(j) => f.modes()[j],
        None => Complex64::new(0.0, 0.0),
    }
}
