//! Evolve a smoothed crest and stream its energy report to stdout as CSV.
//!
//! ```bash
//! cargo run --release --example energy_monitor > energy.csv
//! ```

use capwave::cli::output::{energy_row, ENERGY_COLUMNS};
use capwave::evolution::{evolve, SimParams, Status};
use capwave::spectral::Grid;
use capwave::state::{gen_crest_smoothed, CrestSpec};

fn main() -> capwave::Result<()> {
    let grid = Grid::periodic(512)?;
    let eps: f64 = 0.1;
    let crest = CrestSpec { nu: 0.4, eta: 0.0, alpha0: std::f64::consts::PI };
    let initial = gen_crest_smoothed(&crest, eps, &grid)?;
    let params = SimParams {
        sigma: eps.powf(1.5),
        t_final: 0.3,
        output_every: 40,
        ..SimParams::default()
    };

    println!("{}", ENERGY_COLUMNS.join(","));
    let traj = evolve(initial, params, "energy_monitor", |cp| {
        if let Some(r) = &cp.report {
            println!("{}", energy_row(r).join(","));
        }
    })?;
    if traj.status != Status::Completed {
        eprintln!("stopped early: {:?}", traj.status);
    }
    Ok(())
}
