//! Sobolev inner products and norms on coefficient grids.
//!
//! The same weighted sum serves fields (Fourier coefficients) and operators
//! (matrix entries): `⟨A|B⟩_α = Σ (1+k²+l²)^α a[k,l]·conj(b[k,l])`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{CoeffGrid, FreqIndex};

/// Weight attached to each index pair; always a function of `k² + l²`.
#[derive(Clone)]
pub enum SobolevWeight {
    /// `(1 + k² + l²)^alpha`; any real `alpha`, negative included.
    Power(f64),
    /// A non-negative radial profile evaluated at `k² + l²`.
    Radial(Arc<dyn Fn(u64) -> f64 + Send + Sync>),
}

impl SobolevWeight {
    pub fn alpha(alpha: f64) -> Self {
        SobolevWeight::Power(alpha)
    }

    pub fn radial(profile: impl Fn(u64) -> f64 + Send + Sync + 'static) -> Self {
        SobolevWeight::Radial(Arc::new(profile))
    }

    pub fn weight(&self, idx: FreqIndex) -> Result<f64> {
        match self {
            SobolevWeight::Power(alpha) => Ok((1.0 + idx.radius_sq() as f64).powf(*alpha)),
            SobolevWeight::Radial(profile) => {
                let w = profile(idx.radius_sq());
                if w.is_nan() || w < 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "radial weight {w} at k²+l² = {} is not non-negative",
                        idx.radius_sq()
                    )));
                }
                Ok(w)
            }
        }
    }

    /// Weights for every index of a band-limited grid, in storage order.
    pub fn table(&self, n: usize) -> Result<Vec<f64>> {
        CoeffGrid::zeros(n).iter().map(|(idx, _)| self.weight(idx)).collect()
    }
}

impl fmt::Debug for SobolevWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SobolevWeight::Power(a) => write!(f, "Power({a})"),
            SobolevWeight::Radial(_) => f.write_str("Radial(..)"),
        }
    }
}

pub fn inner(a: &CoeffGrid, b: &CoeffGrid, w: &SobolevWeight) -> Result<Complex64> {
    a.check_same_size(b)?;
    let weights = w.table(a.band_limit())?;
    Ok(a.entries()
        .iter()
        .zip(b.entries())
        .zip(&weights)
        .map(|((x, y), &g)| x * y.conj() * g)
        .sum())
}

pub fn norm_sq(a: &CoeffGrid, w: &SobolevWeight) -> Result<f64> {
    let weights = w.table(a.band_limit())?;
    Ok(a.entries().iter().zip(&weights).map(|(x, &g)| g * x.norm_sqr()).sum())
}

pub fn norm(a: &CoeffGrid, w: &SobolevWeight) -> Result<f64> {
    norm_sq(a, w).map(f64::sqrt)
}

/// `‖A‖_α` for the power weight; convenience for the common case.
pub fn alpha_norm(a: &CoeffGrid, alpha: f64) -> f64 {
    norm(a, &SobolevWeight::Power(alpha)).expect("power weights are positive")
}

/// `⟨[H,A] | A⟩_α`; purely imaginary for Hermitian `H` and `A`.
pub fn commutator_pairing(h: &CoeffGrid, a: &CoeffGrid, w: &SobolevWeight) -> Result<Complex64> {
    h.check_same_size(a)?;
    let comm = &h.matmul(a)? - &a.matmul(h)?;
    inner(&comm, a, w)
}
