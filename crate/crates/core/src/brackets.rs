//! Commutators with the Hilbert transform and the triple bracket.
//!
//! Everything here is multiplier algebra on dealiased products. The singular
//! integral forms live in [`crate::quadrature`] and are only used as
//! independent checks.

use crate::error::Result;
use crate::spectral::Field;

/// `[f, H] g = f H g - H(f g)`.
pub fn commutator_hilbert(f: &Field, g: &Field) -> Result<Field> {
    f.check_same_grid(g)?;
    Ok(comm(f, g))
}

/// `[f, H] d g`.
pub fn commutator_hilbert_deriv(f: &Field, g: &Field) -> Result<Field> {
    f.check_same_grid(g)?;
    Ok(comm(f, &g.d()))
}

/// `[h, f; d g]`, via
/// `[h d f, H] d g + [f, H] d(h d g) - h d([f, H] d g)`.
pub fn triple_bracket_dg(h: &Field, f: &Field, g: &Field) -> Result<Field> {
    h.check_same_grid(f)?;
    h.check_same_grid(g)?;
    let dg = g.d();
    let first = comm(&h.product(&f.d()), &dg);
    let second = comm(f, &h.product(&dg).d());
    let third = h.product(&comm(f, &dg).d());
    Ok(&(&first + &second) - &third)
}

pub(crate) fn comm(f: &Field, g: &Field) -> Field {
    &f.product(&g.h()) - &f.product(g).h()
}
