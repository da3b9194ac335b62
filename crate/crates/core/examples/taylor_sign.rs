//! The Taylor sign A_{1,sigma}/|Z_a| across a surface-tension sweep. Gravity
//! alone keeps it positive; strong tension can drive its minimum negative.

use capwave::energy::taylor_sign;
use capwave::spectral::Grid;
use capwave::state::{derive, gen_crest, CrestSpec};

fn main() -> capwave::Result<()> {
    let grid = Grid::periodic(256)?;
    let crest = gen_crest(&CrestSpec::new(0.3, 0.3, 0.0)?, &grid)?;
    println!("min A1 = {:.6}", derive(&crest, 0.0, true)?.a1.min_re());
    println!("{:>8} {:>12} {:>12}", "sigma", "min", "max");
    for sigma in [0.0, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0] {
        let t = taylor_sign(&crest, sigma, true)?;
        println!("{sigma:>8} {:>12.5} {:>12.5}", t.min_re(), t.max_re());
    }
    Ok(())
}
