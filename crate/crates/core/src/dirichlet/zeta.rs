//! Periodized-zeta bases and averaging over zeta-zero ordinates.
//!
//! For `s = σ + iτ` with `σ > 1` the sequence `a_k = k^{-s}` has Dirichlet
//! inverse `b_k = μ(k)·k^{-s}`. Averaging the transforms `D⁻¹_{[σ+iτ_n]}`
//! over the ordinates `τ_n ≤ T` cancels the higher-divisor terms, because
//! the averages of `d^{-iτ_n}` shrink as `T` grows.

use std::collections::HashMap;
use std::io::BufRead;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::dirichlet::arith::{moebius, ArithmeticSeq};
use crate::dirichlet::transform::{divisor_transform_2d, divisors, FreqVec};
use crate::error::{Error, Result};
use crate::grid::CoeffGrid;
use crate::kahan::{KahanSum, KahanVec};

/// Zeros per parallel batch in the per-zero averaging route.
const BATCH: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaParams {
    sigma: f64,
    tau: f64,
}

impl ZetaParams {
    pub fn new(sigma: f64, tau: f64) -> Result<Self> {
        if !(sigma > 1.0) {
            return Err(Error::Domain(format!("sigma must exceed 1, got {sigma}")));
        }
        Ok(Self { sigma, tau })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn s(&self) -> Complex64 {
        Complex64::new(self.sigma, self.tau)
    }

    /// `a_k = k^{-s}` for `k = 1..=lmax`, carrying its inverse `μ(k)·k^{-s}`.
    pub fn sequence(&self, lmax: usize) -> ArithmeticSeq {
        let a: Vec<Complex64> = (1..=lmax as u64).map(|k| Complex64::new(k as f64, 0.0).powc(-self.s())).collect();
        let b = a.iter().enumerate().map(|(i, &ak)| ak * moebius(i as u64 + 1) as f64).collect();
        ArithmeticSeq::with_inverse(a, b).expect("a_1 = 1")
    }
}

/// Partial sum of `F(s,t) = Σ_{k≥1} e^{2πikt}/k^s` with a tail bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialSum {
    pub value: Complex64,
    /// Upper bound on `Σ_{k>terms} k^{-Re s}`.
    pub tail_bound: f64,
}

pub fn periodized_zeta(s: Complex64, t: f64, terms: usize) -> Result<PartialSum> {
    if !(s.re > 1.0) {
        return Err(Error::Domain(format!("Re s must exceed 1, got {}", s.re)));
    }
    let value = (1..=terms as u64)
        .map(|k| {
            let phase = 2.0 * std::f64::consts::PI * (k as f64 * t).fract();
            Complex64::from_polar(1.0, phase) * Complex64::new(k as f64, 0.0).powc(-s)
        })
        .collect::<KahanSum>()
        .value();
    let sigma = s.re;
    // Σ_{k>m} k^{-σ} ≤ ∫_m^∞ x^{-σ} dx for m ≥ 1; the k = 1 term is added for m = 0.
    let tail_bound = if terms == 0 {
        1.0 + 1.0 / (sigma - 1.0)
    } else {
        (terms as f64).powf(1.0 - sigma) / (sigma - 1.0)
    };
    Ok(PartialSum { value, tail_bound })
}

/// Strictly increasing positive zero ordinates `τ_1 < τ_2 < ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroTable {
    ordinates: Vec<f64>,
}

impl ZeroTable {
    pub fn new(ordinates: Vec<f64>) -> Result<Self> {
        if ordinates.is_empty() {
            return Err(Error::ZeroTableParse { line: 0, message: "no ordinates".into() });
        }
        for (i, &t) in ordinates.iter().enumerate() {
            if !(t > 0.0) || !t.is_finite() {
                return Err(Error::ZeroTableParse {
                    line: i + 1,
                    message: format!("ordinate {t} is not a positive number"),
                });
            }
            if i > 0 && t <= ordinates[i - 1] {
                return Err(Error::ZeroTableParse {
                    line: i + 1,
                    message: format!("ordinate {t} does not exceed its predecessor"),
                });
            }
        }
        Ok(Self { ordinates })
    }

    pub fn len(&self) -> usize {
        self.ordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordinates.is_empty()
    }

    pub fn ordinates(&self) -> &[f64] {
        &self.ordinates
    }

    /// `τ_n`, 1-based.
    pub fn ordinate(&self, n: usize) -> Option<f64> {
        n.checked_sub(1).and_then(|i| self.ordinates.get(i).copied())
    }

    /// `N(T)`: the number of ordinates in `(0, T]`.
    pub fn count_upto(&self, t: f64) -> usize {
        self.ordinates.partition_point(|&x| x <= t)
    }

    /// The ordinates `τ_n ≤ T`, erroring when there are none.
    pub fn upto(&self, t: f64) -> Result<&[f64]> {
        let n = self.count_upto(t);
        if n == 0 {
            return Err(Error::EmptyRange(t));
        }
        Ok(&self.ordinates[..n])
    }
}

/// Parses one ordinate per line; blank and `#` lines are skipped.
pub fn load_zero_table<R: BufRead>(reader: R) -> Result<ZeroTable> {
    let mut ordinates = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let t: f64 = text.parse().map_err(|e| Error::ZeroTableParse {
            line: i + 1,
            message: format!("cannot parse {text:?}: {e}"),
        })?;
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::ZeroTableParse {
                line: i + 1,
                message: format!("ordinate {t} is not a positive number"),
            });
        }
        if let Some(&prev) = ordinates.last() {
            if t <= prev {
                return Err(Error::ZeroTableParse {
                    line: i + 1,
                    message: format!("ordinate {t} does not exceed its predecessor {prev}"),
                });
            }
        }
        ordinates.push(t);
    }
    if ordinates.is_empty() {
        return Err(Error::ZeroTableParse { line: 0, message: "table holds no ordinates".into() });
    }
    Ok(ZeroTable { ordinates })
}

/// `(1/N) Σ_n exp(-i·x·τ_n)`, compensated, in ascending-τ order.
fn phase_average(taus: &[f64], x: f64) -> Complex64 {
    let sum = taus.iter().map(|&t| Complex64::from_polar(1.0, -x * t)).collect::<KahanSum>();
    sum.value() / taus.len() as f64
}

/// `c_d(T) = |(1/N(T)) Σ_{τ_n ≤ T} d^{-(σ + iτ_n)}|`.
pub fn c_d(d: u64, sigma: f64, zeros: &ZeroTable, t: f64) -> Result<f64> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("c_d needs d >= 2, got {d}")));
    }
    let taus = zeros.upto(t)?;
    let ln_d = (d as f64).ln();
    Ok((d as f64).powf(-sigma) * phase_average(taus, ln_d).norm())
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma > 1.0) {
        return Err(Error::Domain(format!("sigma must exceed 1, got {sigma}")));
    }
    Ok(())
}

/// 1D average of the Möbius-coefficient transforms over `τ_n ≤ T`:
/// `z_k = Σ_{d|k} μ(d)·avg(d^{-(σ+iτ_n)})·f̂_{k/d}`, conjugate exponents for
/// `k < 0`, `z_0 = f̂_0`.
pub fn broadband_average_1d(fhat: &FreqVec, sigma: f64, zeros: &ZeroTable, t: f64) -> Result<FreqVec> {
    check_sigma(sigma)?;
    let taus = zeros.upto(t)?;
    let n = fhat.band_limit() as i64;
    let mut averages = HashMap::new();
    let mut avg = |d: i64| -> Complex64 {
        *averages.entry(d).or_insert_with(|| {
            (d as f64).powf(-sigma) * phase_average(taus, (d as f64).ln())
        })
    };
    let mut out = FreqVec::zeros(fhat.band_limit());
    out[0] = fhat[0];
    for k in 1..=n {
        let mut pos = fhat[k];
        let mut neg = fhat[-k];
        for d in divisors(k).into_iter().skip(1) {
            let mu = moebius(d as u64) as f64;
            if mu == 0.0 {
                continue;
            }
            let w = avg(d) * mu;
            pos += w * fhat[k / d];
            neg += w.conj() * fhat[-k / d];
        }
        out[k] = pos;
        out[-k] = neg;
    }
    Ok(out)
}

/// 2D average via the closed correction-term formula
/// `z[k,l] = Σ_{d|k, r|l} μ(d)μ(r)(dr)^{-σ}·avg(d^{-iε_k τ} r^{-iε_l τ})·f̂[k/d, l/r]`
/// with `ε = sgn`, and `d|0` meaning `d = 1`.
pub fn broadband_average_2d(fhat: &CoeffGrid, sigma: f64, zeros: &ZeroTable, t: f64) -> Result<CoeffGrid> {
    check_sigma(sigma)?;
    let taus = zeros.upto(t)?;
    let mut averages: HashMap<(i64, i64), Complex64> = HashMap::new();
    let mut out = CoeffGrid::zeros(fhat.band_limit());
    for k in fhat.range() {
        for l in fhat.range() {
            let mut z = Complex64::new(0.0, 0.0);
            for d in divisors(k) {
                let mu_d = moebius(d as u64);
                if mu_d == 0 {
                    continue;
                }
                for r in divisors(l) {
                    let mu_r = moebius(r as u64);
                    if mu_r == 0 {
                        continue;
                    }
                    let f = fhat[(k / d, l / r)];
                    if d * r == 1 {
                        z += f;
                        continue;
                    }
                    // signed divisors identify the phase exponent ε_k ln d + ε_l ln r
                    let key = (k.signum() * d, l.signum() * r);
                    let avg = *averages.entry(key).or_insert_with(|| {
                        let x = k.signum() as f64 * (d as f64).ln()
                            + l.signum() as f64 * (r as f64).ln();
                        phase_average(taus, x)
                    });
                    let weight = (mu_d * mu_r) as f64 * ((d * r) as f64).powf(-sigma);
                    z += avg * weight * f;
                }
            }
            out[(k, l)] = z;
        }
    }
    Ok(out)
}

/// 2D average by transforming once per zero and reducing the results with a
/// compensated sum in ascending-τ order. Per-zero work runs on the rayon pool
/// in fixed batches; the reduction order does not depend on the thread count.
pub fn broadband_average_2d_per_zero(
    fhat: &CoeffGrid,
    sigma: f64,
    zeros: &ZeroTable,
    t: f64,
) -> Result<CoeffGrid> {
    check_sigma(sigma)?;
    let taus = zeros.upto(t)?;
    let lmax = fhat.band_limit().max(1);
    let mut acc = KahanVec::new(fhat.entries().len());
    for batch in taus.chunks(BATCH) {
        let terms: Vec<CoeffGrid> = batch
            .par_iter()
            .map(|&tau| {
                let seq = ZetaParams::new(sigma, tau).expect("sigma checked").sequence(lmax);
                divisor_transform_2d(seq.inverse(), fhat)
            })
            .collect();
        for term in &terms {
            acc.add(term.entries());
        }
    }
    let scale = 1.0 / taus.len() as f64;
    let entries = acc.values().into_iter().map(|z| z * scale).collect();
    CoeffGrid::from_entries(fhat.band_limit(), entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn small_table() -> ZeroTable {
        ZeroTable::new(vec![14.134725141734693, 21.022039638771555, 25.01085758014569]).unwrap()
    }

    #[test]
    fn sigma_domain() {
        assert!(ZetaParams::new(1.0, 3.0).is_err());
        assert!(ZetaParams::new(1.5, 3.0).is_ok());
        assert!(periodized_zeta(c(1.0, 5.0), 0.0, 10).is_err());
    }

    #[test]
    fn sequence_inverse_matches_recursion() {
        let seq = ZetaParams::new(2.5, 14.134725).unwrap().sequence(60);
        let recomputed = crate::dirichlet::arith::dirichlet_inverse(seq.coeffs(), 60).unwrap();
        for (x, y) in seq.inverse().iter().zip(&recomputed) {
            assert!((x - y).norm() < 1e-15);
        }
    }

    #[test]
    fn periodized_zeta_special_values() {
        let z = periodized_zeta(c(2.0, 0.0), 0.0, 200_000).unwrap();
        assert!((z.value.re - PI * PI / 6.0).abs() <= z.tail_bound);
        let alt = periodized_zeta(c(2.0, 0.0), 0.5, 200_000).unwrap();
        assert!((alt.value.re + PI * PI / 12.0).abs() < 1e-10);
        assert!(alt.value.im.abs() < 1e-10);
        let empty = periodized_zeta(c(3.0, 1.0), 0.3, 0).unwrap();
        assert_eq!(empty.value, c(0.0, 0.0));
    }

    #[test]
    fn zero_table_queries() {
        let t = small_table();
        assert_eq!(t.count_upto(20.0), 1);
        assert_eq!(t.count_upto(14.0), 0);
        assert_eq!(t.count_upto(1e9), 3);
        assert_eq!(t.ordinate(2), Some(21.022039638771555));
        assert!(matches!(t.upto(10.0), Err(Error::EmptyRange(_))));
    }

    #[test]
    fn zero_table_parsing() {
        let text = "# comment\n14.1\n\n21.0\n25.0\n";
        assert_eq!(load_zero_table(text.as_bytes()).unwrap().len(), 3);
        assert!(load_zero_table("".as_bytes()).is_err());
        assert!(load_zero_table("# only comments\n".as_bytes()).is_err());
        match load_zero_table("14.1\n13.0\n".as_bytes()) {
            Err(Error::ZeroTableParse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        match load_zero_table("14.1\nabc\n".as_bytes()) {
            Err(Error::ZeroTableParse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(load_zero_table("-3.0\n".as_bytes()).is_err());
    }

    #[test]
    fn c_d_single_zero_is_modulus_of_term() {
        let t = small_table();
        let v = c_d(2, 3.0, &t, 15.0).unwrap();
        assert!((v - 0.125).abs() < 1e-16);
        assert!(c_d(1, 3.0, &t, 15.0).is_err());
        for d in [2, 3, 10, 97] {
            assert!(c_d(d, 2.0, &t, 100.0).unwrap() <= (d as f64).powf(-2.0) + 1e-16);
        }
    }

    #[test]
    fn average_1d_unit_entries() {
        let t = small_table();
        let out = broadband_average_1d(&FreqVec::unit(8, 1), 3.0, &t, 30.0).unwrap();
        assert_eq!(out[1], c(1.0, 0.0));
        assert!((out[2].norm() - c_d(2, 3.0, &t, 30.0).unwrap()).abs() < 1e-16);
        assert_eq!(out[4], c(0.0, 0.0)); // μ(4) = 0
        let out = broadband_average_1d(&FreqVec::unit(8, 0), 3.0, &t, 30.0).unwrap();
        assert_eq!(out, FreqVec::unit(8, 0));
    }

    #[test]
    fn average_2d_unit_entries() {
        let t = small_table();
        let mut f = CoeffGrid::zeros(4);
        f[(0, 0)] = c(1.0, 0.0);
        assert_eq!(broadband_average_2d(&f, 3.0, &t, 30.0).unwrap(), f);
        let mut f = CoeffGrid::zeros(4);
        f[(1, 1)] = c(0.5, 0.2);
        let z = broadband_average_2d(&f, 3.0, &t, 30.0).unwrap();
        assert_eq!(z[(1, 1)], c(0.5, 0.2));
    }

    #[test]
    fn direct_and_per_zero_routes_agree() {
        let t = small_table();
        let f = CoeffGrid::from_fn(6, |k, l| c(((k + 2 * l) as f64).sin(), ((k * l) as f64).cos()));
        let direct = broadband_average_2d(&f, 2.5, &t, 30.0).unwrap();
        let per_zero = broadband_average_2d_per_zero(&f, 2.5, &t, 30.0).unwrap();
        assert!(direct.max_abs_diff(&per_zero).unwrap() < 1e-14);
    }

    #[test]
    fn averaging_errors() {
        let t = small_table();
        assert!(broadband_average_1d(&FreqVec::zeros(2), 0.9, &t, 30.0).is_err());
        assert!(broadband_average_2d(&CoeffGrid::zeros(2), 3.0, &t, 1.0).is_err());
        assert!(broadband_average_2d_per_zero(&CoeffGrid::zeros(2), 3.0, &t, 1.0).is_err());
    }
}
