//! Parameter sweeps behind `capwave study <name>`.
//!
//! Sweep points run concurrently; rows are assembled in sweep order so the
//! output is identical from run to run.

use rayon::prelude::*;

use crate::energy::energy_delta;
use crate::error::{Error, Result};
use crate::evolution::{evolve, SimParams, Status, TimeStep, Trajectory};
use crate::state::{curvature, gen_crest_smoothed, scale_state, scaled_sigma, SurfaceState};

use super::checkpoint::fmt_g17;
use super::config::Config;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Study {
    Convergence,
    CrestScaling,
    MollifierDelta,
    ScaleSymmetry,
}

impl Study {
    pub fn name(self) -> &'static str {
        match self {
            Study::Convergence => "convergence",
            Study::CrestScaling => "crest_scaling",
            Study::MollifierDelta => "mollifier_delta",
            Study::ScaleSymmetry => "scale_symmetry",
        }
    }
}

/// A finished sweep: CSV header, rows, and a one-line summary.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub summary: String,
}

pub fn run(study: Study, config: &Config) -> Result<Table> {
    match study {
        Study::Convergence => convergence(config),
        Study::CrestScaling => crest_scaling(config),
        Study::MollifierDelta => mollifier_delta(config),
        Study::ScaleSymmetry => scale_symmetry(config),
    }
}

fn nonempty<T>(list: &[T], name: &str) -> Result<()> {
    if list.is_empty() {
        Err(Error::Config(format!("study.{name} must list at least one value")))
    } else {
        Ok(())
    }
}

/// Quiet run with no reports; a blow-up or failure is an error here.
fn quiet_run(initial: SurfaceState, params: SimParams) -> Result<Trajectory> {
    let params = SimParams {
        reports: false,
        ..params
    };
    let traj = evolve(initial, params, "study", |_| {})?;
    match &traj.status {
        Status::Completed => Ok(traj),
        Status::BlowUp { t, quantity } => Err(Error::Integration {
            t: *t,
            reason: format!("blow-up quantity {quantity:.3e} exceeded the ceiling"),
        }),
        Status::NumericalFailure { t, reason } => Err(Error::Integration {
            t: *t,
            reason: reason.clone(),
        }),
    }
}

fn state_distance(a: &SurfaceState, b: &SurfaceState) -> f64 {
    (&a.g - &b.g).max_abs().max((&a.v - &b.v).max_abs())
}

/// Least-squares slope of `y` against `x`.
pub fn fit_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

/// Each `dt` against a reference run at half the smallest step.
fn convergence(config: &Config) -> Result<Table> {
    let dts = &config.study.dt;
    nonempty(dts, "dt")?;
    if dts.iter().any(|&dt| !(dt > 0.0)) {
        return Err(Error::param("study.dt", "steps must be > 0"));
    }
    let initial = config.initial_state()?;
    let base = config.sim_params(false)?;
    let reference_dt = dts.iter().cloned().fold(f64::INFINITY, f64::min) / 2.0;
    let mut all: Vec<f64> = dts.clone();
    all.push(reference_dt);
    let finals: Vec<SurfaceState> = all
        .par_iter()
        .map(|&dt| {
            let p = SimParams {
                dt: TimeStep::Fixed(dt),
                output_every: usize::MAX,
                ..base.clone()
            };
            quiet_run(initial.clone(), p).map(|t| t.last_state)
        })
        .collect::<Result<_>>()?;
    let reference = finals.last().expect("reference run");
    let errors: Vec<f64> = finals[..dts.len()]
        .iter()
        .map(|s| state_distance(s, reference))
        .collect();
    let mut rows = Vec::new();
    for (i, (&dt, &err)) in dts.iter().zip(&errors).enumerate() {
        let order = if i == 0 {
            String::new()
        } else {
            fmt_g17((errors[i - 1] / err).ln() / (dts[i - 1] / dt).ln())
        };
        rows.push(vec![fmt_g17(dt), fmt_g17(err), order]);
    }
    let summary = match rows.last().map(|r| r[2].clone()) {
        Some(o) if !o.is_empty() => format!("observed order {o}"),
        _ => "need two step sizes for an observed order".into(),
    };
    Ok(Table {
        header: vec!["dt", "error", "observed_order"],
        rows,
        summary,
    })
}

/// `max |kappa|` of the smoothed crest against its closed form.
fn crest_scaling(config: &Config) -> Result<Table> {
    let eps = &config.study.eps;
    nonempty(eps, "eps")?;
    let spec = config.crest_spec()?;
    let grid = config.make_grid()?;
    let measured: Vec<(f64, f64)> = eps
        .par_iter()
        .map(|&e| {
            let s = gen_crest_smoothed(&spec, e, &grid)?;
            Ok((curvature(&s)?.max_abs(), spec.smoothed(e).peak_curvature()))
        })
        .collect::<Result<_>>()?;
    let rows = eps
        .iter()
        .zip(&measured)
        .map(|(&e, &(k, exact))| {
            vec![
                fmt_g17(e),
                fmt_g17(spec.eta + e),
                fmt_g17(k),
                fmt_g17(exact),
                fmt_g17((k - exact).abs() / exact),
            ]
        })
        .collect();
    let summary = if eps.len() >= 2 {
        let lx: Vec<f64> = eps.iter().map(|e| e.ln()).collect();
        let ly: Vec<f64> = measured.iter().map(|m| m.0.ln()).collect();
        format!("fitted slope {} (nu = {})", fmt_g17(fit_slope(&lx, &ly)), spec.nu)
    } else {
        "need two eps values for a slope".into()
    };
    Ok(Table {
        header: vec!["eps", "eta_eff", "kappa_linf", "kappa_closed_form", "rel_diff"],
        rows,
        summary,
    })
}

/// `sup_t E_Delta` between the runs at `delta` and `delta / 2`.
fn mollifier_delta(config: &Config) -> Result<Table> {
    let deltas = &config.study.delta;
    nonempty(deltas, "delta")?;
    let base = config.sim_params(false)?;
    if base.dt == TimeStep::Auto {
        return Err(Error::Config(
            "study mollifier_delta needs a fixed params.dt so checkpoint times match".into(),
        ));
    }
    if deltas.iter().any(|&d| !(d > 0.0)) {
        return Err(Error::param("study.delta", "widths must be > 0"));
    }
    let initial = config.initial_state()?;
    let widths: Vec<f64> = deltas.iter().flat_map(|&d| [d, d / 2.0]).collect();
    let trajs: Vec<Trajectory> = widths
        .par_iter()
        .map(|&delta| quiet_run(initial.clone(), SimParams { delta, ..base.clone() }))
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for (i, &d) in deltas.iter().enumerate() {
        let (a, b) = (&trajs[2 * i], &trajs[2 * i + 1]);
        let mut sup = 0.0f64;
        for (x, y) in a.checkpoints.iter().zip(&b.checkpoints) {
            sup = sup.max(energy_delta(&x.state, &y.state, base.sigma)?.total());
        }
        rows.push(vec![fmt_g17(d), fmt_g17(d / 2.0), fmt_g17(sup)]);
    }
    let sups: Vec<f64> = rows.iter().map(|r| r[2].parse().unwrap()).collect();
    let monotone = sups.windows(2).all(|w| w[1] < w[0]);
    Ok(Table {
        header: vec!["delta", "delta_half", "sup_e_delta"],
        rows,
        summary: format!("decreasing in delta: {monotone}"),
    })
}

/// Scaled data under `sigma / lambda^3` against the scaled solution.
fn scale_symmetry(config: &Config) -> Result<Table> {
    let lambdas = &config.study.lambda;
    nonempty(lambdas, "lambda")?;
    if config.gravity() {
        return Err(Error::Config(
            "study scale_symmetry needs params.gravity = 0; gravity breaks the symmetry".into(),
        ));
    }
    let base = config.sim_params(false)?;
    if base.dt == TimeStep::Auto {
        return Err(Error::Config(
            "study scale_symmetry needs a fixed params.dt so checkpoint times match".into(),
        ));
    }
    let initial = config.initial_state()?;
    let sigma = base.sigma;
    let mut jobs: Vec<(SurfaceState, f64)> = vec![(initial.clone(), sigma)];
    for &l in lambdas {
        let l = l as f64;
        jobs.push((scale_state(&initial, l)?, scaled_sigma(sigma, l)));
    }
    let trajs: Vec<Trajectory> = jobs
        .into_par_iter()
        .map(|(s, sg)| quiet_run(s, SimParams { sigma: sg, ..base.clone() }))
        .collect::<Result<_>>()?;
    let reference = &trajs[0];
    let mut rows = Vec::new();
    for (&l, traj) in lambdas.iter().zip(&trajs[1..]) {
        let lf = l as f64;
        let mut mismatch = 0.0f64;
        let mut kappa_diff = 0.0f64;
        for (x, y) in reference.checkpoints.iter().zip(&traj.checkpoints) {
            let sx = scale_state(&x.state, lf)?;
            let num = (&sx.g - &y.state.g).norm_l2() + (&sx.v - &y.state.v).norm_l2();
            let den = sx.g.norm_l2() + sx.v.norm_l2();
            mismatch = mismatch.max(if den > 0.0 { num / den } else { num });
            let k1 = sigma.cbrt() * curvature(&x.state)?.max_abs();
            let k2 = scaled_sigma(sigma, lf).cbrt() * curvature(&y.state)?.max_abs();
            let d = (k1 - k2).abs();
            kappa_diff = kappa_diff.max(if k1 > 0.0 { d / k1 } else { d });
        }
        rows.push(vec![l.to_string(), fmt_g17(mismatch), fmt_g17(kappa_diff)]);
    }
    Ok(Table {
        header: vec!["lambda", "mismatch", "sigma13_kappa_rel_diff"],
        rows,
        summary: format!("{} scale factor(s) compared", lambdas.len()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_a_line() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y: Vec<f64> = x.iter().map(|v| 2.0 - 0.3 * v).collect();
        assert!((fit_slope(&x, &y) + 0.3).abs() < 1e-14);
    }

    #[test]
    fn crest_scaling_tracks_closed_form() {
        let c = Config::parse(
            "[grid]\nN = 2048\n[initial_data]\nkind = \"crest\"\nnu = 0.3\n[study]\neps = [0.08, 0.04]\n",
            &[],
        )
        .unwrap();
        let t = run(Study::CrestScaling, &c).unwrap();
        assert_eq!(t.rows.len(), 2);
        for r in &t.rows {
            assert!(r[4].parse::<f64>().unwrap() < 1e-6, "{r:?}");
        }
    }

    #[test]
    fn scale_symmetry_rejects_gravity() {
        let c = Config::parse("[params]\ndt = 0.01\n", &[]).unwrap();
        assert!(matches!(run(Study::ScaleSymmetry, &c), Err(Error::Config(_))));
    }

    #[test]
    fn mollifier_delta_rejects_auto_dt() {
        let c = Config::parse("[params]\nsigma = 0.1\n", &[]).unwrap();
        assert!(matches!(run(Study::MollifierDelta, &c), Err(Error::Config(_))));
    }
}
