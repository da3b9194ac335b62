//! Poisson-smoothed angled crests: peak curvature grows like eps^-nu.
//!
//! ```bash
//! cargo run --release --example crest_curvature -- 0.3
//! ```

use capwave::cli::study::fit_slope;
use capwave::spectral::Grid;
use capwave::state::{curvature, gen_crest_smoothed, CrestSpec};

fn main() -> capwave::Result<()> {
    let nu: f64 = std::env::args().nth(1).map_or(0.3, |s| s.parse().expect("nu"));
    let grid = Grid::periodic(16384)?;
    // eta = 0 is the singular crest itself; only its smoothings are sampled.
    let crest = CrestSpec { nu, eta: 0.0, alpha0: 0.0 };

    println!("{:>8} {:>14} {:>14}", "eps", "max|kappa|", "closed form");
    let mut lx = Vec::new();
    let mut ly = Vec::new();
    for eps in [0.04, 0.02, 0.01, 0.005] {
        let s = gen_crest_smoothed(&crest, eps, &grid)?;
        let k = curvature(&s)?.max_abs();
        println!("{eps:>8} {k:>14.6} {:>14.6}", crest.smoothed(eps).peak_curvature());
        lx.push(f64::ln(eps));
        ly.push(k.ln());
    }
    println!("slope {:.4}, expected about -{nu}", fit_slope(&lx, &ly));
    Ok(())
}
