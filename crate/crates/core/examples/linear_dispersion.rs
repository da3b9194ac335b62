//! A small standing wave oscillates at omega^2 = k + sigma k^3.

use std::f64::consts::PI;

use capwave::evolution::{mode_coefficient, Integrator, SimParams};
use capwave::spectral::Grid;
use capwave::state::gen_wave;

fn main() -> capwave::Result<()> {
    let (k, sigma) = (3u32, 0.2);
    let grid = Grid::periodic(128)?;
    let kf = k as f64;
    let period = 2.0 * PI / (kf + sigma * kf.powi(3)).sqrt();
    let params = SimParams {
        sigma,
        t_final: 2.0 * period,
        ..SimParams::default()
    };
    let mut run = Integrator::new(gen_wave(1e-6, k, &grid)?, params)?;

    let mut last = (0.0, mode_coefficient(&run.state().g, k as i64).re);
    let mut crossings = Vec::new();
    while let Some(s) = run.step()? {
        let a = mode_coefficient(&s.g, k as i64).re;
        if a.signum() != last.1.signum() {
            crossings.push(last.0 + (s.t - last.0) * last.1 / (last.1 - a));
        }
        last = (s.t, a);
    }
    let measured = crossings.windows(2).map(|w| 2.0 * (w[1] - w[0])).sum::<f64>()
        / (crossings.len() - 1) as f64;
    println!("steps {}", run.steps());
    println!("linear period   {period:.10}");
    println!("measured period {measured:.10}");
    Ok(())
}
