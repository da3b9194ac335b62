use capwave::evolution::{
    cfl_dt, evolve, lagrangian_map, rhs, rhs_mollified, step_rk4, Integrator, Scheme, SimParams,
    Status, TimeStep,
};
use capwave::spectral::Grid;
use capwave::state::{gen_crest, gen_wave, CrestSpec, SurfaceState};

fn wave_params(sigma: f64) -> SimParams {
    SimParams {
        sigma,
        t_final: 0.1,
        dt: TimeStep::Fixed(0.01),
        output_every: 3,
        ..SimParams::default()
    }
}

#[test]
fn integrator_lands_on_final_time() {
    let grid = Grid::periodic(64).unwrap();
    let s = gen_wave(0.01, 1, &grid).unwrap();
    let mut it = Integrator::new(s, SimParams { dt: TimeStep::Fixed(0.03), ..wave_params(0.1) }).unwrap();
    while it.step().unwrap().is_some() {}
    assert_eq!(it.state().t, 0.1);
    assert_eq!(it.steps(), 4);
}

#[test]
fn checkpoints_follow_cadence() {
    let grid = Grid::periodic(64).unwrap();
    let s = gen_wave(0.01, 1, &grid).unwrap();
    let mut seen = Vec::new();
    let traj = evolve(s, wave_params(0.1), "test", |c| seen.push(c.step)).unwrap();
    assert_eq!(traj.status, Status::Completed);
    assert_eq!(seen, vec![0, 3, 6, 9, 10]);
    let reports: Vec<_> = traj.checkpoints.iter().map(|c| c.report.clone().unwrap()).collect();
    assert!(reports[0].residual_fundamental.is_none());
    assert!(reports[1..4].iter().all(|r| r.residual_fundamental.is_some()));
    assert!(reports[4].residual_fundamental.is_none());
}

#[test]
fn runs_are_deterministic() {
    let grid = Grid::periodic(64).unwrap();
    let s = gen_wave(0.05, 2, &grid).unwrap();
    let a = evolve(s.clone(), wave_params(0.3), "", |_| {}).unwrap();
    let b = evolve(s, wave_params(0.3), "", |_| {}).unwrap();
    assert_eq!(a.last_state.g.real_values(), b.last_state.g.real_values());
    assert_eq!(a.last_state.v.real_values(), b.last_state.v.real_values());
}

#[test]
fn blowup_ceiling_aborts() {
    let grid = Grid::periodic(128).unwrap();
    let s = gen_crest(&CrestSpec::new(0.3, 0.01, 0.0).unwrap(), &grid).unwrap();
    let p = SimParams {
        blowup_ceiling: 1.0,
        ..wave_params(0.1)
    };
    let traj = evolve(s, p, "", |_| {}).unwrap();
    assert!(matches!(traj.status, Status::BlowUp { t, .. } if t == 0.0));
}

#[test]
fn mollified_rhs_reduces_to_exact_without_smoothing() {
    let grid = Grid::periodic(64).unwrap();
    let s = gen_wave(0.05, 1, &grid).unwrap();
    let p = wave_params(0.5);
    let (g1, v1) = rhs(&s, &p).unwrap();
    let (g2, v2) = rhs_mollified(&s, &p).unwrap();
    assert!((&g1 - &g2).max_abs() < 1e-14 && (&v1 - &v2).max_abs() < 1e-14);
    let smooth = SimParams { delta: 0.1, ..p.clone() };
    let (_, v3) = rhs_mollified(&s, &smooth).unwrap();
    assert!((&v1 - &v3).max_abs() > 1e-6);
    assert!(step_rk4(&s, 0.0, &p, Scheme::Exact).is_err());
}

#[test]
fn cfl_shrinks_with_resolution_and_tension() {
    let coarse = SurfaceState::flat(&Grid::periodic(64).unwrap());
    let fine = SurfaceState::flat(&Grid::periodic(256).unwrap());
    let p = wave_params(0.5);
    assert!(cfl_dt(&fine, &p).unwrap() < cfl_dt(&coarse, &p).unwrap());
    let stiffer = SimParams { sigma: 5.0, ..p.clone() };
    assert!(cfl_dt(&coarse, &stiffer).unwrap() < cfl_dt(&coarse, &p).unwrap());
}

#[test]
fn invalid_params() {
    let grid = Grid::periodic(32).unwrap();
    let s = SurfaceState::flat(&grid);
    for p in [
        SimParams { sigma: -1.0, ..SimParams::default() },
        SimParams { dt: TimeStep::Fixed(0.0), ..SimParams::default() },
        SimParams { output_every: 0, ..SimParams::default() },
        SimParams { cfl: f64::NAN, ..SimParams::default() },
    ] {
        assert!(Integrator::new(s.clone(), p).is_err());
    }
}

#[test]
fn particles_stay_put_on_flat_water() {
    let grid = Grid::periodic(32).unwrap();
    let traj = evolve(SurfaceState::flat(&grid), wave_params(0.1), "", |_| {}).unwrap();
    let path = lagrangian_map(&traj, 1.0).unwrap();
    assert_eq!(path.len(), traj.checkpoints.len());
    assert!(path.iter().all(|&(_, h)| (h - 1.0).abs() < 1e-14));
}
