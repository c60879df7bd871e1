//! Commutators: the operator bracket and the bracket it induces on fields
//! through the Q-transform, `[f,g] := Q⁻¹(i[Qf, Qg])`.

use num_complex::Complex64;

use crate::error::Result;
use crate::grid::CoeffGrid;
use crate::spectral::{q_inverse, s_map, split_real_imag};

/// `[A,B] = AB - BA` over the index window.
pub fn op_commutator(a: &CoeffGrid, b: &CoeffGrid) -> Result<CoeffGrid> {
    Ok(&a.matmul(b)? - &b.matmul(a)?)
}

/// Bracket of two real fields; the result is again a real field.
pub fn field_commutator(f: &CoeffGrid, g: &CoeffGrid) -> Result<CoeffGrid> {
    f.check_same_size(g)?;
    let bracket = op_commutator(&s_map(f)?, &s_map(g)?)?.scale(Complex64::new(0.0, 1.0));
    // i[Qf,Qg] is Hermitian, so the anti-Hermitian part is round-off only.
    let (real, _) = q_inverse(&bracket);
    Ok(real)
}

/// Bilinear extension to complex fields given by their coefficients:
/// `[f+ig, p+iq] = [f,p] - [g,q] + i([f,q] + [g,p])`.
pub fn complex_field_commutator(u: &CoeffGrid, v: &CoeffGrid) -> Result<CoeffGrid> {
    u.check_same_size(v)?;
    let (f, g) = split_real_imag(u);
    let (p, q) = split_real_imag(v);
    let mut out = &field_commutator(&f, &p)? - &field_commutator(&g, &q)?;
    let imag = &field_commutator(&f, &q)? + &field_commutator(&g, &p)?;
    out.axpy(Complex64::new(0.0, 1.0), &imag)?;
    Ok(out)
}
