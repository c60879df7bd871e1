//! Spectral transforms between doubly periodic fields on the torus and
//! infinite matrices, with Sobolev-weighted norms, a matrix calculus for
//! fields, open-system evolution and Dirichlet-series generalizations.
//!
//! Coefficient grids are truncated to `|k|, |l| ≤ N` and stored densely.

// `!(x > 0.0)` is used on purpose so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calculus;
pub mod dirichlet;
pub mod dynamics;
pub mod error;
pub mod grid;
pub mod kahan;
pub mod sobolev;
pub mod spectral;

pub use error::{Error, Result};
pub use grid::{CoeffGrid, FreqIndex, GridTag, SampleGrid};
pub use num_complex::Complex64;
pub use sobolev::SobolevWeight;
