//! Fourier analysis on the torus and the symmetry-changing map between
//! point-symmetric coefficient grids and Hermitian matrices.
//!
//! The map `s_map` rearranges the coefficients of a real field so that
//! `z[-k,-l] = conj(z[k,l])` becomes `w[l,k] = conj(w[k,l])`:
//!
//! * above the diagonal (`k < l`) entries are copied,
//! * below the diagonal (`k > l`) `w[k,l] = conj(z[l,k])`,
//! * on the diagonal `w[k,k] = √2·Im z[k,k]` for `k < 0`, `√2·Re z[k,k]` for
//!   `k > 0`, and `w[0,0] = z[0,0]`.
//!
//! Any rotationally symmetric weight sees the same multiset of moduli on
//! both sides, which is what makes the Q-transform an isometry for every
//! Sobolev exponent.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{CoeffGrid, SampleGrid};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Point-symmetric Fourier grid to Hermitian matrix.
pub fn s_map(z: &CoeffGrid) -> Result<CoeffGrid> {
    z.check_fourier_real()?;
    Ok(s_map_unchecked(z))
}

pub(crate) fn s_map_unchecked(z: &CoeffGrid) -> CoeffGrid {
    CoeffGrid::from_fn(z.band_limit(), |k, l| {
        if k < l {
            z[(k, l)]
        } else if k > l {
            z[(l, k)].conj()
        } else if k < 0 {
            Complex64::new(SQRT_2 * z[(k, k)].im, 0.0)
        } else if k > 0 {
            Complex64::new(SQRT_2 * z[(k, k)].re, 0.0)
        } else {
            Complex64::new(z[(0, 0)].re, 0.0)
        }
    })
}

/// Hermitian matrix back to a point-symmetric Fourier grid.
pub fn s_inv(w: &CoeffGrid) -> Result<CoeffGrid> {
    w.check_hermitian()?;
    Ok(s_inv_unchecked(w))
}

pub(crate) fn s_inv_unchecked(w: &CoeffGrid) -> CoeffGrid {
    CoeffGrid::from_fn(w.band_limit(), |k, l| {
        if k < l {
            w[(k, l)]
        } else if k > l {
            // z[k,l] = conj(z[-k,-l]) and -k < -l lies above the diagonal.
            w[(-k, -l)].conj()
        } else if k < 0 {
            Complex64::new(w[(-k, -k)].re, w[(k, k)].re) / SQRT_2
        } else if k > 0 {
            Complex64::new(w[(k, k)].re, -w[(-k, -k)].re) / SQRT_2
        } else {
            Complex64::new(w[(0, 0)].re, 0.0)
        }
    })
}

/// Splits `C = A + iB` with `A = (C + C†)/2`, `B = (C - C†)/(2i)`, both Hermitian.
pub fn hermitian_split(c: &CoeffGrid) -> (CoeffGrid, CoeffGrid) {
    let adj = c.adjoint();
    let a = CoeffGrid::from_fn(c.band_limit(), |k, l| (c[(k, l)] + adj[(k, l)]) * 0.5);
    let b = CoeffGrid::from_fn(c.band_limit(), |k, l| (c[(k, l)] - adj[(k, l)]) / (2.0 * I));
    (a, b)
}

/// Splits the coefficients of a complex field `u = f + ig` into the
/// coefficient grids of its real and imaginary parts.
pub fn split_real_imag(u: &CoeffGrid) -> (CoeffGrid, CoeffGrid) {
    let f = CoeffGrid::from_fn(u.band_limit(), |k, l| (u[(k, l)] + u[(-k, -l)].conj()) * 0.5);
    let g = CoeffGrid::from_fn(u.band_limit(), |k, l| (u[(k, l)] - u[(-k, -l)].conj()) / (2.0 * I));
    (f, g)
}

/// `Q(f + ig) = S[f̂] + i·S[ĝ]`; with `g` absent the result is Hermitian.
pub fn q_transform(f: &CoeffGrid, g: Option<&CoeffGrid>) -> Result<CoeffGrid> {
    let mut out = s_map(f)?;
    if let Some(g) = g {
        f.check_same_size(g)?;
        out.axpy(I, &s_map(g)?)?;
    }
    Ok(out)
}

/// Q-transform of a complex field given by its (non-symmetric) coefficients.
pub fn q_transform_field(u: &CoeffGrid) -> CoeffGrid {
    let (f, g) = split_real_imag(u);
    let mut out = s_map_unchecked(&f);
    out.axpy(I, &s_map_unchecked(&g)).expect("same band limit");
    out
}

/// Inverse Q-transform: Hermitian split, then `s_inv` of each part.
pub fn q_inverse(c: &CoeffGrid) -> (CoeffGrid, CoeffGrid) {
    let (a, b) = hermitian_split(c);
    (s_inv_unchecked(&a), s_inv_unchecked(&b))
}

/// Coefficients `f̂ + i·ĝ` of the complex field `Q⁻¹C`.
pub fn q_inverse_field(c: &CoeffGrid) -> CoeffGrid {
    let (f, g) = q_inverse(c);
    let mut u = f;
    u.axpy(I, &g).expect("same band limit");
    u
}

fn twiddles(m: usize, sign: f64) -> Vec<Complex64> {
    (0..m)
        .map(|r| Complex64::from_polar(1.0, sign * 2.0 * PI * r as f64 / m as f64))
        .collect()
}

fn band_limit_for(m: usize) -> Result<usize> {
    if m.is_multiple_of(2) {
        return Err(Error::DimensionMismatch(format!(
            "sample grid side {m} is not of the form 2N+1"
        )));
    }
    Ok((m - 1) / 2)
}

/// Exact `(2N+1)`-point DFT quadrature of the Fourier integral.
///
/// `z[k,l] = M⁻² Σ f(i/M, j/M)·exp(-2πi(k·i + l·j)/M)`.
pub fn analyze(samples: &SampleGrid) -> Result<CoeffGrid> {
    let m = samples.side();
    let n = band_limit_for(m)?;
    let ni = n as i64;
    let tw = twiddles(m, -1.0);
    let phase = |freq: i64, pos: usize| tw[((freq * pos as i64).rem_euclid(m as i64)) as usize];

    // Transform along y for each row i, then along x.
    let mut partial = vec![Complex64::new(0.0, 0.0); m * m];
    for i in 0..m {
        for (li, l) in (-ni..=ni).enumerate() {
            partial[i * m + li] = (0..m).map(|j| samples.at(i, j) * phase(l, j)).sum();
        }
    }
    let scale = 1.0 / (m * m) as f64;
    Ok(CoeffGrid::from_fn(n, |k, l| {
        let li = (l + ni) as usize;
        let s: Complex64 = (0..m).map(|i| partial[i * m + li] * phase(k, i)).sum();
        s * scale
    }))
}

/// Analysis with an explicit expected band limit.
pub fn analyze_to(samples: &SampleGrid, n: usize) -> Result<CoeffGrid> {
    if samples.side() != 2 * n + 1 {
        return Err(Error::DimensionMismatch(format!(
            "band limit {n} needs {} samples per axis, got {}",
            2 * n + 1,
            samples.side()
        )));
    }
    analyze(samples)
}

/// Evaluates the trigonometric polynomial on the `(2N+1)²` lattice.
pub fn synthesize(z: &CoeffGrid) -> SampleGrid {
    let n = z.band_limit() as i64;
    let m = z.side();
    let tw = twiddles(m, 1.0);
    let phase = |freq: i64, pos: usize| tw[((freq * pos as i64).rem_euclid(m as i64)) as usize];

    let mut partial = vec![Complex64::new(0.0, 0.0); m * m];
    for (ki, k) in (-n..=n).enumerate() {
        for j in 0..m {
            partial[ki * m + j] = (-n..=n).map(|l| z[(k, l)] * phase(l, j)).sum();
        }
    }
    let mut values = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            values.push((0..m).map(|ki| partial[ki * m + j] * phase(ki as i64 - n, i)).sum());
        }
    }
    SampleGrid::new(m, values).expect("square lattice")
}
