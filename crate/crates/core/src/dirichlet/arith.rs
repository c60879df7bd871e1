//! Arithmetic functions: Möbius, Dirichlet convolution and inversion.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Möbius function by trial division.
pub fn moebius(n: u64) -> i8 {
    assert!(n >= 1, "moebius is defined for n >= 1");
    let mut n = n;
    let mut sign = 1i8;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// `(a*b)_n = Σ_{d|n} a_d·b_{n/d}` for `n = 1..=min(len)`; index 0 holds `n = 1`.
pub fn dirichlet_convolve(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let len = a.len().min(b.len());
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    for d in 1..=len {
        let ad = a[d - 1];
        if ad == Complex64::new(0.0, 0.0) {
            continue;
        }
        for m in 1..=len / d {
            out[d * m - 1] += ad * b[m - 1];
        }
    }
    out
}

/// Dirichlet inverse up to `lmax`: `b_1 = 1/a_1`,
/// `b_n = -(1/a_1) Σ_{d|n, d>1} a_d·b_{n/d}`.
pub fn dirichlet_inverse(a: &[Complex64], lmax: usize) -> Result<Vec<Complex64>> {
    let a1 = *a.first().ok_or(Error::NotInvertible)?;
    if a1 == Complex64::new(0.0, 0.0) {
        return Err(Error::NotInvertible);
    }
    let coeff = |d: usize| a.get(d - 1).copied().unwrap_or_default();
    // acc[n] collects Σ a_d·b_{n/d} over d > 1 as soon as b_{n/d} is final.
    let mut acc = vec![Complex64::new(0.0, 0.0); lmax + 1];
    let mut b = vec![Complex64::new(0.0, 0.0); lmax];
    for m in 1..=lmax {
        let unit = if m == 1 { 1.0 } else { 0.0 };
        let bm = (Complex64::new(unit, 0.0) - acc[m]) / a1;
        b[m - 1] = bm;
        for d in 2..=lmax / m {
            acc[d * m] += coeff(d) * bm;
        }
    }
    Ok(b)
}

/// Truncated complex sequence `(a_l)_{l=1..Lmax}` with a lazily computed
/// Dirichlet inverse.
#[derive(Debug)]
pub struct ArithmeticSeq {
    a: Vec<Complex64>,
    inverse: OnceLock<Vec<Complex64>>,
}

impl Clone for ArithmeticSeq {
    fn clone(&self) -> Self {
        let inverse = OnceLock::new();
        if let Some(b) = self.inverse.get() {
            let _ = inverse.set(b.clone());
        }
        Self { a: self.a.clone(), inverse }
    }
}

impl ArithmeticSeq {
    /// `a[0]` is `a_1`.
    pub fn new(a: Vec<Complex64>) -> Result<Self> {
        match a.first() {
            Some(&a1) if a1 != Complex64::new(0.0, 0.0) => {
                Ok(Self { a, inverse: OnceLock::new() })
            }
            _ => Err(Error::NotInvertible),
        }
    }

    /// A sequence whose inverse is known in closed form; the pair is trusted.
    pub fn with_inverse(a: Vec<Complex64>, b: Vec<Complex64>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch(format!(
                "sequence length {} vs inverse length {}",
                a.len(),
                b.len()
            )));
        }
        let seq = Self::new(a)?;
        let _ = seq.inverse.set(b);
        Ok(seq)
    }

    /// The Dirichlet unit `(1, 0, 0, ...)`.
    pub fn unit(lmax: usize) -> Self {
        let mut a = vec![Complex64::new(0.0, 0.0); lmax.max(1)];
        a[0] = Complex64::new(1.0, 0.0);
        Self::with_inverse(a.clone(), a).expect("unit is invertible")
    }

    pub fn from_fn(lmax: usize, f: impl Fn(u64) -> Complex64) -> Result<Self> {
        Self::new((1..=lmax as u64).map(f).collect())
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.a
    }

    /// `a_l` for `l ≥ 1`, zero beyond the truncation.
    pub fn get(&self, l: usize) -> Complex64 {
        debug_assert!(l >= 1);
        self.a.get(l - 1).copied().unwrap_or_default()
    }

    pub fn inverse(&self) -> &[Complex64] {
        self.inverse
            .get_or_init(|| dirichlet_inverse(&self.a, self.a.len()).expect("a_1 checked nonzero"))
    }

    /// The inverse as a sequence of its own.
    pub fn inverted(&self) -> ArithmeticSeq {
        ArithmeticSeq::with_inverse(self.inverse().to_vec(), self.a.clone())
            .expect("inverse of an invertible sequence is invertible")
    }
}
