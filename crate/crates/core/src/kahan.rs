//! Compensated summation for complex accumulators.

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, Default)]
struct Kahan {
    sum: f64,
    compensation: f64,
}

impl Kahan {
    #[inline]
    fn add(&mut self, value: f64) {
        let y = value - self.compensation;
        let t = self.sum + y;
        self.compensation = (t - self.sum) - y;
        self.sum = t;
    }
}

/// Kahan sum over complex values, real and imaginary parts compensated
/// independently. The result depends on the order of `add` calls only.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    re: Kahan,
    im: Kahan,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: Complex64) {
        self.re.add(value.re);
        self.im.add(value.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.sum, self.im.sum)
    }
}

impl FromIterator<Complex64> for KahanSum {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        let mut acc = Self::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// Entrywise compensated accumulation of equally sized slices.
#[derive(Debug, Clone)]
pub struct KahanVec {
    slots: Vec<KahanSum>,
}

impl KahanVec {
    pub fn new(len: usize) -> Self {
        Self { slots: vec![KahanSum::new(); len] }
    }

    pub fn add(&mut self, values: &[Complex64]) {
        assert_eq!(values.len(), self.slots.len(), "accumulator length mismatch");
        for (slot, &v) in self.slots.iter_mut().zip(values) {
            slot.add(v);
        }
    }

    pub fn values(&self) -> Vec<Complex64> {
        self.slots.iter().map(KahanSum::value).collect()
    }
}
