//! Two mollified runs at delta and delta/2 draw together as delta shrinks.

use capwave::energy::energy_delta;
use capwave::evolution::{evolve, SimParams, TimeStep};
use capwave::spectral::Grid;
use capwave::state::{gen_crest, CrestSpec};

fn main() -> capwave::Result<()> {
    let grid = Grid::periodic(256)?;
    let initial = gen_crest(&CrestSpec::new(0.3, 0.3, 1.0)?, &grid)?;
    let sigma = 0.1;
    let run = |delta: f64| {
        let p = SimParams {
            sigma,
            delta,
            eps_visc: 0.01,
            dt: TimeStep::Fixed(2e-3),
            t_final: 0.3,
            output_every: 25,
            reports: false,
            ..SimParams::default()
        };
        evolve(initial.clone(), p, "mollified", |_| {})
    };

    for delta in [0.08, 0.04, 0.02] {
        let (a, b) = (run(delta)?, run(delta / 2.0)?);
        let mut sup = 0.0f64;
        for (x, y) in a.checkpoints.iter().zip(&b.checkpoints) {
            sup = sup.max(energy_delta(&x.state, &y.state, sigma)?.total());
        }
        println!("delta {delta:<5} sup E_Delta {sup:.3e}");
    }
    Ok(())
}
