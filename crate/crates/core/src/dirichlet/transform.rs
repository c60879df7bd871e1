//! Change-of-basis operators built from an arithmetic sequence.
//!
//! `D` maps `e_m` to `φ_m = Σ_l a_l e_{ml}` for `m > 0`, fixes `e_0`, and
//! uses conjugate coefficients on the negative cone. Its matrix has `a_l` at
//! row `m·l` of column `m`, so `(Dx)_k = Σ_{d|k} a_d·x_{k/d}`. `D⁻¹` has the
//! same shape with the Dirichlet inverse `b` in place of `a`. Divisors never
//! exceed the index, so both act exactly on band-limited vectors.

use num_complex::Complex64;

use crate::dirichlet::arith::ArithmeticSeq;
use crate::error::{Error, Result};
use crate::grid::CoeffGrid;
use crate::spectral::{s_map, split_real_imag};

/// A coefficient vector indexed by `-N..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct FreqVec {
    n: usize,
    entries: Vec<Complex64>,
}

impl FreqVec {
    pub fn zeros(n: usize) -> Self {
        Self { n, entries: vec![Complex64::new(0.0, 0.0); 2 * n + 1] }
    }

    pub fn from_entries(n: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != 2 * n + 1 {
            return Err(Error::DimensionMismatch(format!(
                "band limit {n} needs {} entries, got {}",
                2 * n + 1,
                entries.len()
            )));
        }
        Ok(Self { n, entries })
    }

    pub fn from_fn(n: usize, f: impl Fn(i64) -> Complex64) -> Self {
        let ni = n as i64;
        Self { n, entries: (-ni..=ni).map(f).collect() }
    }

    /// Unit vector at index `m`.
    pub fn unit(n: usize, m: i64) -> Self {
        let mut v = Self::zeros(n);
        v[m] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn band_limit(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries.iter().zip(&other.entries).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

impl std::ops::Index<i64> for FreqVec {
    type Output = Complex64;

    fn index(&self, k: i64) -> &Complex64 {
        &self.entries[(k + self.n as i64) as usize]
    }
}

impl std::ops::IndexMut<i64> for FreqVec {
    fn index_mut(&mut self, k: i64) -> &mut Complex64 {
        let n = self.n as i64;
        &mut self.entries[(k + n) as usize]
    }
}

/// Coefficient `c_{sgn(k)·d}` under the conventions `c_{-d} = conj(c_d)`, `c_0 = 1`.
#[inline]
fn signed_coeff(coeffs: &[Complex64], sign: i64, d: usize) -> Complex64 {
    let v = coeffs.get(d - 1).copied().unwrap_or_default();
    match sign {
        1 => v,
        -1 => v.conj(),
        _ => Complex64::new(1.0, 0.0),
    }
}

/// `(Mx)_k = Σ_{d|k} c_{sgn(k)·d}·x_{k/d}`, `(Mx)_0 = x_0`.
fn apply_divisor_matrix(coeffs: &[Complex64], x: &[Complex64], n: i64) -> Vec<Complex64> {
    let at = |k: i64| x[(k + n) as usize];
    let mut out = vec![Complex64::new(0.0, 0.0); x.len()];
    out[n as usize] = at(0);
    for k in 1..=n {
        let mut pos = Complex64::new(0.0, 0.0);
        let mut neg = Complex64::new(0.0, 0.0);
        for d in 1..=k {
            if k % d == 0 {
                let q = k / d;
                pos += signed_coeff(coeffs, 1, d as usize) * at(q);
                neg += signed_coeff(coeffs, -1, d as usize) * at(-q);
            }
        }
        out[(k + n) as usize] = pos;
        out[(n - k) as usize] = neg;
    }
    out
}

pub fn apply_d(a: &ArithmeticSeq, x: &FreqVec) -> FreqVec {
    FreqVec { n: x.n, entries: apply_divisor_matrix(a.coeffs(), &x.entries, x.n as i64) }
}

pub fn apply_d_inv(a: &ArithmeticSeq, x: &FreqVec) -> FreqVec {
    FreqVec { n: x.n, entries: apply_divisor_matrix(a.inverse(), &x.entries, x.n as i64) }
}

/// Dense matrix of `D` on the window, row `k`, column `m`.
pub fn d_matrix(a: &ArithmeticSeq, n: usize) -> CoeffGrid {
    matrix_of(a.coeffs(), n)
}

fn matrix_of(coeffs: &[Complex64], n: usize) -> CoeffGrid {
    CoeffGrid::from_fn(n, |k, m| {
        if k == 0 || m == 0 {
            return if k == m { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
        }
        if k.signum() != m.signum() || k % m != 0 {
            return Complex64::new(0.0, 0.0);
        }
        signed_coeff(coeffs, k.signum(), (k / m) as usize)
    })
}

/// `Z = D⁻¹·F·(D⁻¹)ᵀ`, applied as `D⁻¹` down every column, then along every row.
pub fn d_transform_2d(a: &ArithmeticSeq, fhat: &CoeffGrid) -> CoeffGrid {
    divisor_transform_2d(a.inverse(), fhat)
}

pub(crate) fn divisor_transform_2d(coeffs: &[Complex64], fhat: &CoeffGrid) -> CoeffGrid {
    let n = fhat.band_limit();
    let ni = n as i64;
    let side = fhat.side();
    let mut cols = vec![Complex64::new(0.0, 0.0); side * side];
    for l in 0..side {
        let column: Vec<_> = (-ni..=ni).map(|k| fhat[(k, l as i64 - ni)]).collect();
        for (k, v) in apply_divisor_matrix(coeffs, &column, ni).into_iter().enumerate() {
            cols[k * side + l] = v;
        }
    }
    let mut out = Vec::with_capacity(side * side);
    for k in 0..side {
        out.extend(apply_divisor_matrix(coeffs, &cols[k * side..(k + 1) * side], ni));
    }
    CoeffGrid::from_entries(n, out).expect("square window")
}

/// The explicit double divisor sum
/// `z[k,l] = Σ_{d|k} Σ_{r|l} b_{sgn(k)d}·b_{sgn(l)r}·f̂[k/d, l/r]`.
pub fn d_transform_2d_direct(a: &ArithmeticSeq, fhat: &CoeffGrid) -> CoeffGrid {
    let b = a.inverse();
    CoeffGrid::from_fn(fhat.band_limit(), |k, l| {
        let mut z = Complex64::new(0.0, 0.0);
        for d in divisors(k) {
            for r in divisors(l) {
                z += signed_coeff(b, k.signum(), d as usize)
                    * signed_coeff(b, l.signum(), r as usize)
                    * fhat[(k / d, l / r)];
            }
        }
        z
    })
}

/// Positive divisors of `|k|`; `{1}` for `k = 0`.
pub fn divisors(k: i64) -> Vec<i64> {
    let m = k.abs();
    if m == 0 {
        return vec![1];
    }
    (1..=m).filter(|d| m % d == 0).collect()
}

/// Generalized Q-transform `Q^D f = S[D⁻¹ f̂ (D⁻¹)ᵀ]` of a real field.
pub fn qd_transform(a: &ArithmeticSeq, f: &CoeffGrid) -> Result<CoeffGrid> {
    f.check_fourier_real()?;
    s_map(&d_transform_2d(a, f))
}

/// Complex extension `Q^D(f + ig) = Q^D f + i·Q^D g` on raw coefficients.
pub fn qd_transform_field(a: &ArithmeticSeq, u: &CoeffGrid) -> Result<CoeffGrid> {
    let (f, g) = split_real_imag(u);
    let mut out = qd_transform(a, &f)?;
    out.axpy(Complex64::new(0.0, 1.0), &qd_transform(a, &g)?)?;
    Ok(out)
}

/// `max{1, Σ|a_n|}`, a bound on the ℓ₂ operator norm of `D`.
pub fn operator_norm_bound(a: &ArithmeticSeq) -> f64 {
    a.coeffs().iter().map(|z| z.norm()).sum::<f64>().max(1.0)
}

/// Spectral norm of the truncated `D` on band limit `n`, by power iteration on `D†D`.
pub fn truncated_operator_norm(a: &ArithmeticSeq, n: usize, max_iter: usize) -> f64 {
    let d = d_matrix(a, n);
    let side = d.side();
    let dtd = d.adjoint().matmul(&d).expect("same window");
    let ni = n as i64;
    let mut v: Vec<Complex64> =
        (0..side).map(|i| Complex64::new(1.0 + 0.01 * i as f64, 0.0)).collect();
    let mut estimate = 0.0;
    for _ in 0..max_iter {
        let w: Vec<Complex64> = (-ni..=ni)
            .map(|k| (0..side).map(|j| dtd[(k, j as i64 - ni)] * v[j]).sum())
            .collect();
        let vn: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        let rayleigh: f64 = v.iter().zip(&w).map(|(x, y)| (x.conj() * y).re).sum::<f64>() / vn;
        let wn = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if wn == 0.0 {
            return 0.0;
        }
        v = w.into_iter().map(|z| z / wn).collect();
        let converged = (rayleigh - estimate).abs() <= 1e-14 * rayleigh;
        estimate = rayleigh;
        if converged {
            break;
        }
    }
    estimate.sqrt()
}
