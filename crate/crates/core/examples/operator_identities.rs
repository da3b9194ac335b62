//! Hilbert transform, projections and the commutator calculus on random
//! band-limited data, checked against direct quadrature.
//!
//! ```bash
//! cargo run --release --example operator_identities
//! ```

use capwave::brackets::triple_bracket_dg;
use capwave::energy::hhalf;
use capwave::quadrature::{quadrature_hardy, quadrature_oracle_hilbert, quadrature_triple_bracket};
use capwave::random::band_limited;
use capwave::spectral::{project_antiholo, project_holo, Grid};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> capwave::Result<()> {
    let grid = Grid::periodic(256)?;
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let f = band_limited(&grid, 40, false, &mut rng);

    let hh = f.h().h();
    println!("|HHf - (f - mean f)|     = {:.2e}", (&hh - &f.add_scalar(-f.mean())).max_abs());
    let split = &project_holo(&f) + &project_antiholo(&f);
    println!("|P_H f + P_A f - f|      = {:.2e}", (&split - &f).max_abs());
    let q = quadrature_oracle_hilbert(&f);
    println!("|Hf - cot quadrature|    = {:.2e}", (&q - &f.h()).max_abs());

    let h = band_limited(&grid, 16, false, &mut rng);
    let g = band_limited(&grid, 16, false, &mut rng);
    let spectral = triple_bracket_dg(&h, &f.dealiased(), &g)?;
    let direct = quadrature_triple_bracket(&h, &f.dealiased(), &g.d())?;
    println!("triple bracket gap       = {:.2e}", (&spectral - &direct).max_abs() / direct.max_abs());

    let fourier = hhalf(&g).powi(2);
    println!(
        "H^1/2: Fourier {fourier:.12}, double sum {:.12}",
        quadrature_hardy(&g)
    );
    Ok(())
}
