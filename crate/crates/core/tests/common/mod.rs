#![allow(dead_code)]

use std::path::PathBuf;

use qtl_core::dirichlet::{load_zero_table, ArithmeticSeq, FreqVec, ZeroTable};
use qtl_core::{CoeffGrid, Complex64};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn complex(rng: &mut impl Rng) -> Complex64 {
    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn general(rng: &mut impl Rng, n: usize) -> CoeffGrid {
    CoeffGrid::from_fn(n, |_, _| complex(rng))
}

/// Entries shrink like `(1+k²+l²)^{-decay}` so weighted norms stay moderate.
pub fn general_decaying(rng: &mut impl Rng, n: usize, decay: f64) -> CoeffGrid {
    CoeffGrid::from_fn(n, |k, l| complex(rng) * (1.0 + (k * k + l * l) as f64).powf(-decay))
}

pub fn hermitian(rng: &mut impl Rng, n: usize) -> CoeffGrid {
    let a = general(rng, n);
    CoeffGrid::from_fn(n, |k, l| (a[(k, l)] + a[(l, k)].conj()) * 0.5)
}

pub fn hermitian_decaying(rng: &mut impl Rng, n: usize, decay: f64) -> CoeffGrid {
    let a = general_decaying(rng, n, decay);
    CoeffGrid::from_fn(n, |k, l| (a[(k, l)] + a[(l, k)].conj()) * 0.5)
}

/// Exactly point-symmetric coefficients of a real field.
pub fn fourier_real(rng: &mut impl Rng, n: usize) -> CoeffGrid {
    let a = general(rng, n);
    CoeffGrid::from_fn(n, |k, l| (a[(k, l)] + a[(-k, -l)].conj()) * 0.5)
}

/// A real trigonometric polynomial of degree `deg` embedded at band limit `n`.
pub fn trig_poly(rng: &mut impl Rng, n: usize, deg: i64) -> CoeffGrid {
    let mut f = fourier_real(rng, n);
    for (idx, _) in CoeffGrid::zeros(n).iter() {
        if idx.k.abs() > deg || idx.l.abs() > deg {
            f[(idx.k, idx.l)] = c(0.0, 0.0);
        }
    }
    f
}

pub fn freq_vec(rng: &mut impl Rng, n: usize) -> FreqVec {
    FreqVec::from_entries(n, (0..2 * n + 1).map(|_| complex(rng)).collect()).unwrap()
}

/// `a_k = r_k / k²` with `a_1` bounded away from zero.
pub fn summable_seq(rng: &mut impl Rng, lmax: usize) -> ArithmeticSeq {
    let a: Vec<Complex64> = (1..=lmax)
        .map(|k| {
            if k == 1 {
                c(rng.gen_range(0.5..2.0), rng.gen_range(-1.0..1.0))
            } else {
                complex(rng) / (k * k) as f64
            }
        })
        .collect();
    ArithmeticSeq::new(a).unwrap()
}

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn zero_table(name: &str) -> ZeroTable {
    let file = std::fs::File::open(data_path(name)).expect("zero table fixture");
    load_zero_table(std::io::BufReader::new(file)).expect("valid zero table")
}

pub fn rel_close(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol * x.abs().max(y.abs()).max(f64::MIN_POSITIVE)
}
