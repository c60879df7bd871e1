//! Coefficient and sample grids on the symmetric index window `[-N, N]²`.
//!
//! A [`CoeffGrid`] plays two roles: the Fourier coefficients `z[k,l]` of a
//! band-limited field, and the matrix `w[k,l]` of an operator on the
//! `2N+1`-dimensional space with basis `e_{-N}, ..., e_N`. Entries are stored
//! row-major with `k` outer and `l` inner, both running from `-N` to `N`.

use std::io::{Read, Write};
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance for the symmetry checks, scaled by the max-abs entry.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// A frequency pair `(k, l)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FreqIndex {
    pub k: i64,
    pub l: i64,
}

impl FreqIndex {
    pub fn new(k: i64, l: i64) -> Self {
        Self { k, l }
    }

    /// `k² + l²`, the argument of every rotationally symmetric weight.
    pub fn radius_sq(&self) -> u64 {
        (self.k * self.k + self.l * self.l) as u64
    }
}

/// Symmetry class a grid claims. Tags are checked at operation boundaries
/// and never trusted as stored state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GridTag {
    #[serde(rename = "fourier-real")]
    FourierReal,
    #[serde(rename = "hermitian")]
    Hermitian,
    #[serde(rename = "general")]
    General,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoeffGrid {
    n: usize,
    entries: Vec<Complex64>,
}

impl CoeffGrid {
    pub fn zeros(n: usize) -> Self {
        let side = 2 * n + 1;
        Self { n, entries: vec![Complex64::new(0.0, 0.0); side * side] }
    }

    /// The identity matrix on the index window.
    pub fn identity(n: usize) -> Self {
        let mut g = Self::zeros(n);
        for k in g.range() {
            g[(k, k)] = Complex64::new(1.0, 0.0);
        }
        g
    }

    /// Diagonal matrix from values listed for `n = -N..=N`.
    pub fn diagonal(n: usize, values: &[Complex64]) -> Result<Self> {
        if values.len() != 2 * n + 1 {
            return Err(Error::DimensionMismatch(format!(
                "diagonal needs {} values, got {}",
                2 * n + 1,
                values.len()
            )));
        }
        let mut g = Self::zeros(n);
        for (i, k) in g.range().enumerate() {
            g[(k, k)] = values[i];
        }
        Ok(g)
    }

    pub fn from_entries(n: usize, entries: Vec<Complex64>) -> Result<Self> {
        let side = 2 * n + 1;
        if entries.len() != side * side {
            return Err(Error::DimensionMismatch(format!(
                "band limit {n} needs {} entries, got {}",
                side * side,
                entries.len()
            )));
        }
        Ok(Self { n, entries })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(i64, i64) -> Complex64) -> Self {
        let ni = n as i64;
        let mut entries = Vec::with_capacity((2 * n + 1) * (2 * n + 1));
        for k in -ni..=ni {
            for l in -ni..=ni {
                entries.push(f(k, l));
            }
        }
        Self { n, entries }
    }

    pub fn band_limit(&self) -> usize {
        self.n
    }

    pub fn side(&self) -> usize {
        2 * self.n + 1
    }

    /// The index range `-N..=N`.
    pub fn range(&self) -> std::ops::RangeInclusive<i64> {
        let n = self.n as i64;
        -n..=n
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn entries_mut(&mut self) -> &mut [Complex64] {
        &mut self.entries
    }

    pub fn into_entries(self) -> Vec<Complex64> {
        self.entries
    }

    pub fn contains(&self, k: i64, l: i64) -> bool {
        let n = self.n as i64;
        k.abs() <= n && l.abs() <= n
    }

    #[inline]
    fn offset(&self, k: i64, l: i64) -> usize {
        let n = self.n as i64;
        debug_assert!(self.contains(k, l), "index ({k},{l}) outside band limit {n}");
        ((k + n) as usize) * self.side() + (l + n) as usize
    }

    pub fn get(&self, k: i64, l: i64) -> Option<Complex64> {
        self.contains(k, l).then(|| self.entries[self.offset(k, l)])
    }

    /// Iterates `(FreqIndex, value)` in storage order.
    pub fn iter(&self) -> impl Iterator<Item = (FreqIndex, Complex64)> + '_ {
        let n = self.n as i64;
        let side = self.side();
        self.entries.iter().enumerate().map(move |(i, &v)| {
            let k = (i / side) as i64 - n;
            let l = (i % side) as i64 - n;
            (FreqIndex::new(k, l), v)
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn check_same_size(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "band limits differ: {} vs {}",
                self.n, other.n
            )));
        }
        Ok(())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |k, l| self[(l, k)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |k, l| self[(l, k)])
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self { n: self.n, entries: self.entries.iter().map(|&z| f(z)).collect() }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map(|z| z * s)
    }

    /// Matrix product over the index window.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        self.check_same_size(rhs)?;
        let side = self.side();
        let mut out = vec![Complex64::new(0.0, 0.0); side * side];
        for i in 0..side {
            let row = &self.entries[i * side..(i + 1) * side];
            let out_row = &mut out[i * side..(i + 1) * side];
            for (p, &a) in row.iter().enumerate() {
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let b_row = &rhs.entries[p * side..(p + 1) * side];
                for (o, &b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        Ok(Self { n: self.n, entries: out })
    }

    /// Entrywise `self + s·other`.
    pub fn axpy(&mut self, s: Complex64, other: &Self) -> Result<()> {
        self.check_same_size(other)?;
        for (a, &b) in self.entries.iter_mut().zip(&other.entries) {
            *a += s * b;
        }
        Ok(())
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_size(other)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    fn tolerance(&self) -> f64 {
        SYMMETRY_TOLERANCE * self.max_abs()
    }

    /// Validates the point symmetry of the Fourier coefficients of a real field.
    pub fn check_fourier_real(&self) -> Result<()> {
        let tolerance = self.tolerance();
        for (idx, z) in self.iter() {
            let mirror = self[(-idx.k, -idx.l)];
            let residual = (mirror - z.conj()).norm();
            if residual > tolerance {
                return Err(Error::SymmetryViolation { k: idx.k, l: idx.l, residual, tolerance });
            }
        }
        Ok(())
    }

    pub fn check_hermitian(&self) -> Result<()> {
        let tolerance = self.tolerance();
        for (idx, w) in self.iter() {
            let residual = (self[(idx.l, idx.k)] - w.conj()).norm();
            if residual > tolerance {
                return Err(Error::HermiticityViolation { k: idx.k, l: idx.l, residual, tolerance });
            }
        }
        Ok(())
    }

    pub fn check_tag(&self, tag: GridTag) -> Result<()> {
        match tag {
            GridTag::FourierReal => self.check_fourier_real(),
            GridTag::Hermitian => self.check_hermitian(),
            GridTag::General => Ok(()),
        }
    }

    pub fn to_json(&self, tag: GridTag) -> GridJson {
        GridJson {
            n: self.n,
            tag,
            entries: self.entries.iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn write_json<W: Write>(&self, tag: GridTag, writer: W) -> Result<()> {
        serde_json::to_writer(writer, &self.to_json(tag))?;
        Ok(())
    }

    /// Reads a grid and validates the tag it declares.
    pub fn read_json<R: Read>(reader: R) -> Result<(Self, GridTag)> {
        let raw: GridJson = serde_json::from_reader(reader)?;
        raw.into_grid()
    }
}

/// On-disk form: `{"n": N, "tag": ..., "entries": [[re, im], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridJson {
    pub n: usize,
    pub tag: GridTag,
    pub entries: Vec<[f64; 2]>,
}

impl GridJson {
    pub fn into_grid(self) -> Result<(CoeffGrid, GridTag)> {
        let entries = self.entries.into_iter().map(|[re, im]| Complex64::new(re, im)).collect();
        let grid = CoeffGrid::from_entries(self.n, entries)
            .map_err(|e| Error::Format(e.to_string()))?;
        grid.check_tag(self.tag)?;
        Ok((grid, self.tag))
    }
}

impl Index<(i64, i64)> for CoeffGrid {
    type Output = Complex64;

    fn index(&self, (k, l): (i64, i64)) -> &Complex64 {
        &self.entries[self.offset(k, l)]
    }
}

impl IndexMut<(i64, i64)> for CoeffGrid {
    fn index_mut(&mut self, (k, l): (i64, i64)) -> &mut Complex64 {
        let o = self.offset(k, l);
        &mut self.entries[o]
    }
}

impl Add for &CoeffGrid {
    type Output = CoeffGrid;

    fn add(self, rhs: &CoeffGrid) -> CoeffGrid {
        assert_eq!(self.n, rhs.n, "band limits differ");
        CoeffGrid {
            n: self.n,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CoeffGrid {
    type Output = CoeffGrid;

    fn sub(self, rhs: &CoeffGrid) -> CoeffGrid {
        assert_eq!(self.n, rhs.n, "band limits differ");
        CoeffGrid {
            n: self.n,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &CoeffGrid {
    type Output = CoeffGrid;

    fn neg(self) -> CoeffGrid {
        self.map(|z| -z)
    }
}

impl Mul<Complex64> for &CoeffGrid {
    type Output = CoeffGrid;

    fn mul(self, s: Complex64) -> CoeffGrid {
        self.scale(s)
    }
}

/// Samples of a field at `(i/M, j/M)`, `i, j ∈ [0, M)`, row-major with `i` outer.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleGrid {
    m: usize,
    values: Vec<Complex64>,
}

impl SampleGrid {
    pub fn new(m: usize, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != m * m {
            return Err(Error::DimensionMismatch(format!(
                "{m}x{m} sample grid needs {} values, got {}",
                m * m,
                values.len()
            )));
        }
        Ok(Self { m, values })
    }

    pub fn from_real(m: usize, values: &[f64]) -> Result<Self> {
        Self::new(m, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// Samples `f(x, y)` on the `M × M` lattice.
    pub fn from_fn(m: usize, f: impl Fn(f64, f64) -> Complex64) -> Self {
        let mut values = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                values.push(f(i as f64 / m as f64, j as f64 / m as f64));
            }
        }
        Self { m, values }
    }

    pub fn side(&self) -> usize {
        self.m
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.m + j]
    }
}
