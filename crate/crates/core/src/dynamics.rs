//! Evolution of observables under a Lindblad generator with an affine
//! (harmonic) Hamiltonian `H₀ = Σ (a·n + b)|e_n⟩⟨e_n|`, a compact Hermitian
//! perturbation `C` and dissipators `L_j`.
//!
//! `H₀` is never materialized: its action on a matrix is the entrywise
//! multiplier `i(h_k - h_l)`. A diagonal Lindblad operator `diag(λ_n)` is
//! likewise entrywise. The integrator propagates that entrywise part exactly
//! and applies RK4 to the remainder.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::CoeffGrid;
use crate::sobolev::alpha_norm;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Affine spectrum `h_n = a·n + b`, optionally zeroed below a floor `n₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicSpec {
    pub a: f64,
    pub b: f64,
    pub floor: Option<i64>,
}

impl HarmonicSpec {
    pub fn new(a: f64, b: f64) -> Self {
        Self { a, b, floor: None }
    }

    pub fn with_floor(mut self, n0: i64) -> Self {
        self.floor = Some(n0);
        self
    }

    pub fn energy(&self, n: i64) -> f64 {
        match self.floor {
            Some(n0) if n < n0 => 0.0,
            _ => self.a * n as f64 + self.b,
        }
    }

    /// With a floor set, the grid must vanish whenever `k < n₀` or `l < n₀`.
    pub fn check_support(&self, grid: &CoeffGrid) -> Result<()> {
        let Some(n0) = self.floor else { return Ok(()) };
        for (idx, v) in grid.iter() {
            if (idx.k < n0 || idx.l < n0) && v != Complex64::new(0.0, 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "entry ({}, {}) is nonzero below the spectral floor {n0}",
                    idx.k, idx.l
                )));
            }
        }
        Ok(())
    }

    /// `max |h_k - h_l|` over the window of band limit `n`.
    pub fn max_gap(&self, n: usize) -> f64 {
        let ni = n as i64;
        let (lo, hi) = (-ni..=ni)
            .map(|k| self.energy(k))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), e| (lo.min(e), hi.max(e)));
        hi - lo
    }
}

/// Compact Hermitian perturbation, dense dissipators and an optional
/// diagonal dissipator `diag(λ_n)` with `λ` listed for `n = -N..=N`.
#[derive(Debug, Clone, Default)]
pub struct LindbladSet {
    pub compact: Option<CoeffGrid>,
    pub operators: Vec<CoeffGrid>,
    pub diagonal: Option<Vec<Complex64>>,
}

impl LindbladSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_compact(mut self, c: CoeffGrid) -> Result<Self> {
        c.check_hermitian()?;
        self.compact = Some(c);
        Ok(self)
    }

    pub fn with_operator(mut self, l: CoeffGrid) -> Self {
        self.operators.push(l);
        self
    }

    pub fn with_diagonal(mut self, lambda: Vec<Complex64>) -> Self {
        self.diagonal = Some(lambda);
        self
    }

    /// `λ_n = c·n` on the window of band limit `n`.
    pub fn linear_rates(n: usize, c: f64) -> Vec<Complex64> {
        let ni = n as i64;
        (-ni..=ni).map(|k| Complex64::new(c * k as f64, 0.0)).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.compact.is_none() && self.operators.is_empty() && self.diagonal.is_none()
    }

    fn validate(&self, n: usize) -> Result<()> {
        let probe = CoeffGrid::zeros(n);
        if let Some(c) = &self.compact {
            probe.check_same_size(c)?;
        }
        for l in &self.operators {
            probe.check_same_size(l)?;
        }
        if let Some(lambda) = &self.diagonal {
            if lambda.len() != 2 * n + 1 {
                return Err(Error::DimensionMismatch(format!(
                    "diagonal rates need {} values, got {}",
                    2 * n + 1,
                    lambda.len()
                )));
            }
        }
        Ok(())
    }

    /// The diagonal dissipator as a matrix, if present.
    pub fn diagonal_operator(&self) -> Option<CoeffGrid> {
        let lambda = self.diagonal.as_ref()?;
        let n = (lambda.len() - 1) / 2;
        CoeffGrid::diagonal(n, lambda).ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Picture {
    /// Observables evolve: `∂A = i[H,A] + Σ L†AL - ½{L†L, A}`.
    #[default]
    Heisenberg,
    /// States evolve: `∂ρ = -i[H,ρ] + Σ LρL† - ½{L†L, ρ}`.
    Schrodinger,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    /// Entrywise part of the generator propagated exactly, RK4 on the rest.
    #[default]
    InteractionFrame,
    /// Plain RK4 on the full generator.
    Classical,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveConfig {
    pub t_end: f64,
    pub dt: f64,
    pub alpha: f64,
    pub record_every: usize,
    pub picture: Picture,
    pub scheme: Scheme,
}

impl EvolveConfig {
    pub fn new(t_end: f64, dt: f64, alpha: f64) -> Self {
        Self {
            t_end,
            dt,
            alpha,
            record_every: 1,
            picture: Picture::Heisenberg,
            scheme: Scheme::InteractionFrame,
        }
    }

    pub fn record_every(mut self, steps: usize) -> Self {
        self.record_every = steps;
        self
    }

    pub fn picture(mut self, picture: Picture) -> Self {
        self.picture = picture;
        self
    }

    pub fn scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    /// `min(1e-3, 0.5 / max|h_k - h_l|)`.
    pub fn default_dt(h: &HarmonicSpec, n: usize) -> f64 {
        let gap = h.max_gap(n);
        if gap > 0.0 {
            (0.5 / gap).min(1e-3)
        } else {
            1e-3
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::InvalidParameter(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_end >= 0.0) || !self.t_end.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "t_end must be non-negative, got {}",
                self.t_end
            )));
        }
        if self.record_every == 0 {
            return Err(Error::InvalidParameter("record_every must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub state: CoeffGrid,
    pub alpha_norm: f64,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub points: Vec<TrajectoryPoint>,
    pub warnings: Vec<String>,
}

impl Trajectory {
    pub fn last(&self) -> &TrajectoryPoint {
        self.points.last().expect("a trajectory records at least its initial point")
    }
}

/// Closed-form harmonic flow: `a[k,l](t) = a[k,l](0)·exp(i(h_k - h_l)t)`.
pub fn heisenberg_closed(a0: &CoeffGrid, h: &HarmonicSpec, t: f64) -> Result<CoeffGrid> {
    h.check_support(a0)?;
    Ok(CoeffGrid::from_fn(a0.band_limit(), |k, l| {
        a0[(k, l)] * Complex64::from_polar(1.0, (h.energy(k) - h.energy(l)) * t)
    }))
}

/// Transport velocity `(v_x, v_y)` of the field under the harmonic flow with slope `a`.
pub fn drift_velocity(a: f64) -> (f64, f64) {
    (a / (2.0 * PI), -a / (2.0 * PI))
}

/// The harmonic flow seen on the field side: a rigid translation
/// `f_t(x,y) = f_0(x + v_x t, y + v_y t)`, applied as a phase modulation of
/// the coefficients.
pub fn drift_oracle(f0: &CoeffGrid, a: f64, t: f64) -> CoeffGrid {
    let (vx, vy) = drift_velocity(a);
    CoeffGrid::from_fn(f0.band_limit(), |k, l| {
        f0[(k, l)] * Complex64::from_polar(1.0, 2.0 * PI * (k as f64 * vx + l as f64 * vy) * t)
    })
}

fn diagonal_rate(lambda: &[Complex64], n: i64, k: i64, l: i64, picture: Picture) -> Complex64 {
    let lk = lambda[(k + n) as usize];
    let ll = lambda[(l + n) as usize];
    let cross = match picture {
        Picture::Heisenberg => lk.conj() * ll,
        Picture::Schrodinger => lk * ll.conj(),
    };
    cross - 0.5 * lk.norm_sqr() - 0.5 * ll.norm_sqr()
}

/// Closed-form flow for a single diagonal Lindblad operator `diag(λ)`:
/// `a[k,l](t) = a[k,l](0)·exp((conj(λ_k)λ_l - |λ_k|²/2 - |λ_l|²/2)t)`.
pub fn diagonal_lindblad_closed(a0: &CoeffGrid, lambda: &[Complex64], t: f64) -> Result<CoeffGrid> {
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!("time must be non-negative, got {t}")));
    }
    if lambda.len() != a0.side() {
        return Err(Error::DimensionMismatch(format!(
            "{} rates for a grid of side {}",
            lambda.len(),
            a0.side()
        )));
    }
    let n = a0.band_limit() as i64;
    Ok(CoeffGrid::from_fn(a0.band_limit(), |k, l| {
        a0[(k, l)] * (diagonal_rate(lambda, n, k, l, Picture::Heisenberg) * t).exp()
    }))
}

struct Dissipator {
    l: CoeffGrid,
    l_adj: CoeffGrid,
    l_adj_l: CoeffGrid,
}

/// Precomputed generator: entrywise multipliers plus the dense remainder.
struct Generator {
    n: usize,
    multipliers: Vec<Complex64>,
    compact: Option<CoeffGrid>,
    dissipators: Vec<Dissipator>,
    picture: Picture,
}

impl Generator {
    fn new(n: usize, h: &HarmonicSpec, set: &LindbladSet, picture: Picture) -> Result<Self> {
        set.validate(n)?;
        let sign = match picture {
            Picture::Heisenberg => 1.0,
            Picture::Schrodinger => -1.0,
        };
        let ni = n as i64;
        let multipliers = CoeffGrid::from_fn(n, |k, l| {
            let mut m = I * sign * (h.energy(k) - h.energy(l));
            if let Some(lambda) = &set.diagonal {
                m += diagonal_rate(lambda, ni, k, l, picture);
            }
            m
        })
        .into_entries();
        let dissipators = set
            .operators
            .iter()
            .map(|l| {
                let l_adj = l.adjoint();
                let l_adj_l = l_adj.matmul(l).expect("validated sizes");
                Dissipator { l: l.clone(), l_adj, l_adj_l }
            })
            .collect();
        Ok(Self { n, multipliers, compact: set.compact.clone(), dissipators, picture })
    }

    /// Everything except the entrywise multipliers.
    fn remainder(&self, a: &CoeffGrid) -> CoeffGrid {
        let mut out = CoeffGrid::zeros(self.n);
        if let Some(c) = &self.compact {
            let comm = &c.matmul(a).unwrap() - &a.matmul(c).unwrap();
            let s = match self.picture {
                Picture::Heisenberg => I,
                Picture::Schrodinger => -I,
            };
            out.axpy(s, &comm).unwrap();
        }
        for d in &self.dissipators {
            let sandwich = match self.picture {
                Picture::Heisenberg => d.l_adj.matmul(&a.matmul(&d.l).unwrap()).unwrap(),
                Picture::Schrodinger => d.l.matmul(&a.matmul(&d.l_adj).unwrap()).unwrap(),
            };
            out.axpy(Complex64::new(1.0, 0.0), &sandwich).unwrap();
            out.axpy(Complex64::new(-0.5, 0.0), &d.l_adj_l.matmul(a).unwrap()).unwrap();
            out.axpy(Complex64::new(-0.5, 0.0), &a.matmul(&d.l_adj_l).unwrap()).unwrap();
        }
        out
    }

    fn has_remainder(&self) -> bool {
        self.compact.is_some() || !self.dissipators.is_empty()
    }

    fn full(&self, a: &CoeffGrid) -> CoeffGrid {
        let mut out = self.remainder(a);
        for ((o, &m), &x) in out.entries_mut().iter_mut().zip(&self.multipliers).zip(a.entries()) {
            *o += m * x;
        }
        out
    }

    fn propagators(&self, h: f64) -> Vec<Complex64> {
        self.multipliers.iter().map(|&m| (m * h).exp()).collect()
    }

    /// Bound on the remainder's action, used for step-size diagnostics.
    fn remainder_scale(&self) -> f64 {
        let c = self.compact.as_ref().map_or(0.0, |c| 2.0 * alpha_norm(c, 0.0));
        let l: f64 = self.dissipators.iter().map(|d| 2.0 * alpha_norm(&d.l, 0.0).powi(2)).sum();
        c + l
    }
}

fn hadamard(p: &[Complex64], a: &CoeffGrid) -> CoeffGrid {
    let mut out = a.clone();
    for (o, &e) in out.entries_mut().iter_mut().zip(p) {
        *o *= e;
    }
    out
}

/// Right-hand side of the master equation with `H = H₀ + C`.
pub fn lindblad_rhs(
    a: &CoeffGrid,
    h: &HarmonicSpec,
    set: &LindbladSet,
    picture: Picture,
) -> Result<CoeffGrid> {
    Ok(Generator::new(a.band_limit(), h, set, picture)?.full(a))
}

fn classical_step(gen: &Generator, a: &CoeffGrid, dt: f64) -> CoeffGrid {
    let half = Complex64::new(dt / 2.0, 0.0);
    let k1 = gen.full(a);
    let mut y = a.clone();
    y.axpy(half, &k1).unwrap();
    let k2 = gen.full(&y);
    let mut y = a.clone();
    y.axpy(half, &k2).unwrap();
    let k3 = gen.full(&y);
    let mut y = a.clone();
    y.axpy(Complex64::new(dt, 0.0), &k3).unwrap();
    let k4 = gen.full(&y);
    let mut out = a.clone();
    let sixth = Complex64::new(dt / 6.0, 0.0);
    out.axpy(sixth, &k1).unwrap();
    out.axpy(sixth * 2.0, &k2).unwrap();
    out.axpy(sixth * 2.0, &k3).unwrap();
    out.axpy(sixth, &k4).unwrap();
    out
}

/// Lawson (integrating-factor) RK4 step; exact when the remainder vanishes.
fn interaction_step(
    gen: &Generator,
    a: &CoeffGrid,
    dt: f64,
    e_half: &[Complex64],
    e_full: &[Complex64],
) -> CoeffGrid {
    let propagated = hadamard(e_full, a);
    if !gen.has_remainder() {
        return propagated;
    }
    let half = Complex64::new(dt / 2.0, 0.0);
    let a_half = hadamard(e_half, a);

    let k1 = gen.remainder(a);
    let mut y = a.clone();
    y.axpy(half, &k1).unwrap();
    let k2 = gen.remainder(&hadamard(e_half, &y));
    let mut y = a_half.clone();
    y.axpy(half, &k2).unwrap();
    let k3 = gen.remainder(&y);
    let mut y = propagated.clone();
    y.axpy(Complex64::new(dt, 0.0), &hadamard(e_half, &k3)).unwrap();
    let k4 = gen.remainder(&y);

    let sixth = Complex64::new(dt / 6.0, 0.0);
    let mut out = propagated;
    out.axpy(sixth, &hadamard(e_full, &k1)).unwrap();
    out.axpy(sixth * 2.0, &hadamard(e_half, &(&k2 + &k3))).unwrap();
    out.axpy(sixth, &k4).unwrap();
    out
}

/// Fixed-step fourth-order integration of the master equation.
///
/// The step is `t_end / ceil(t_end / dt)`, so the final point lands on
/// `t_end` exactly. Points are recorded every `record_every` steps and at the
/// final time, each with its α-norm.
pub fn evolve_rk4(
    a0: &CoeffGrid,
    h: &HarmonicSpec,
    set: &LindbladSet,
    cfg: &EvolveConfig,
) -> Result<Trajectory> {
    cfg.validate()?;
    h.check_support(a0)?;
    let n = a0.band_limit();
    let gen = Generator::new(n, h, set, cfg.picture)?;

    let steps = (cfg.t_end / cfg.dt - 1e-9).ceil().max(0.0) as usize;
    let dt = if steps > 0 { cfg.t_end / steps as f64 } else { cfg.dt };

    let mut warnings = Vec::new();
    let stiffness = match cfg.scheme {
        Scheme::Classical => {
            gen.multipliers.iter().map(|m| m.norm()).fold(0.0, f64::max) + gen.remainder_scale()
        }
        Scheme::InteractionFrame => gen.remainder_scale(),
    };
    if dt * stiffness > 0.5 {
        warnings.push(format!(
            "step {dt:e} under-resolves the generator (dt x rate = {:.3} > 0.5)",
            dt * stiffness
        ));
    }

    let e_half = gen.propagators(dt / 2.0);
    let e_full = gen.propagators(dt);

    let record = |t: f64, state: &CoeffGrid| TrajectoryPoint {
        t,
        state: state.clone(),
        alpha_norm: alpha_norm(state, cfg.alpha),
    };
    let mut points = vec![record(0.0, a0)];
    let mut state = a0.clone();
    for step in 1..=steps {
        state = match cfg.scheme {
            Scheme::Classical => classical_step(&gen, &state, dt),
            Scheme::InteractionFrame => interaction_step(&gen, &state, dt, &e_half, &e_full),
        };
        let t = if step == steps { cfg.t_end } else { step as f64 * dt };
        if state.entries().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Diverged {
                t,
                message: format!("non-finite entry after step {step} (dt = {dt:e})"),
            });
        }
        if step % cfg.record_every == 0 || step == steps {
            points.push(record(t, &state));
        }
    }
    Ok(Trajectory { points, warnings })
}

/// Certificates on the α-norm growth of the dissipative flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthBound {
    /// `c = 4‖C‖_α + 4 Σ ‖L_j‖²_α`.
    pub c: f64,
    /// `e^{ct}`, valid for the flow without `H₀`.
    pub dissipative: f64,
    /// `1 + √(c·t·(e^{2ct} - 1)) / (2√2)`, valid with `H₀` present.
    pub full: f64,
}

pub fn growth_constant(alpha: f64, set: &LindbladSet) -> f64 {
    let compact = set.compact.as_ref().map_or(0.0, |c| alpha_norm(c, alpha));
    let mut dissipation: f64 = set.operators.iter().map(|l| alpha_norm(l, alpha).powi(2)).sum();
    if let Some(d) = set.diagonal_operator() {
        dissipation += alpha_norm(&d, alpha).powi(2);
    }
    4.0 * compact + 4.0 * dissipation
}

pub fn growth_bound(alpha: f64, set: &LindbladSet, t: f64) -> Result<GrowthBound> {
    if !(alpha >= 0.0) || !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "growth bound needs alpha >= 0 and t >= 0 (got alpha = {alpha}, t = {t})"
        )));
    }
    let c = growth_constant(alpha, set);
    let dissipative = (c * t).exp();
    let full = 1.0 + (c * t * (2.0 * c * t).exp_m1()).sqrt() / (2.0 * SQRT_2);
    Ok(GrowthBound { c, dissipative, full })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{q_inverse, q_transform, synthesize};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample_matrix(n: usize) -> CoeffGrid {
        CoeffGrid::from_fn(n, |k, l| {
            let x = (k * 7 + l * 3) as f64;
            c((x * 0.37).sin() / (1.0 + (k * k + l * l) as f64), (x * 0.11).cos() * 0.1)
        })
    }

    fn hermitian_sample(n: usize) -> CoeffGrid {
        let a = sample_matrix(n);
        (&a + &a.adjoint()).scale(c(0.5, 0.0))
    }

    #[test]
    fn degenerate_spectrum_freezes_state() {
        let a0 = sample_matrix(3);
        let out = heisenberg_closed(&a0, &HarmonicSpec::new(0.0, 4.0), 1.7).unwrap();
        assert_eq!(out, a0);
    }

    #[test]
    fn diagonal_entries_never_move() {
        let a0 = sample_matrix(3);
        let out = heisenberg_closed(&a0, &HarmonicSpec::new(1.3, 0.0), 2.1).unwrap();
        for k in a0.range() {
            assert_eq!(out[(k, k)], a0[(k, k)]);
        }
    }

    #[test]
    fn quarter_period_phase() {
        let mut a0 = CoeffGrid::zeros(2);
        a0[(1, 0)] = c(1.0, 0.0);
        let out = heisenberg_closed(&a0, &HarmonicSpec::new(2.0 * PI, 0.0), 0.25).unwrap();
        assert!((out[(1, 0)] - c(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn floor_support_enforced() {
        let h = HarmonicSpec::new(1.0, 0.0).with_floor(-1);
        let mut a0 = CoeffGrid::zeros(2);
        a0[(-2, 0)] = c(1.0, 0.0);
        assert!(heisenberg_closed(&a0, &h, 1.0).is_err());
        assert_eq!(h.energy(-2), 0.0);
        assert_eq!(h.energy(-1), -1.0);
    }

    #[test]
    fn drift_identity_at_zero_time() {
        let f = CoeffGrid::from_fn(2, |k, l| c(k as f64, l as f64));
        assert_eq!(drift_oracle(&f, 3.0, 0.0), f);
    }

    #[test]
    fn drift_translates_samples() {
        // a = 2π: v = (1, -1), so f_t(x, y) = f_0(x + t, y - t).
        let (vx, vy) = drift_velocity(2.0 * PI);
        assert!((vx - 1.0).abs() < 1e-15 && (vy + 1.0).abs() < 1e-15);
        let mut f = CoeffGrid::zeros(3);
        f[(1, 0)] = c(0.5, 0.0);
        f[(-1, 0)] = c(0.5, 0.0);
        let s = synthesize(&drift_oracle(&f, 2.0 * PI, 0.25));
        for i in 0..7 {
            let x = i as f64 / 7.0;
            // cos(2π(x + 1/4)) = -sin(2πx)
            assert!((s.at(i, 3).re + (2.0 * PI * x).sin()).abs() < 1e-14);
        }
    }

    #[test]
    fn drift_equals_conjugated_harmonic_flow() {
        let mut f = CoeffGrid::zeros(3);
        f[(1, 2)] = c(0.3, -0.2);
        f[(-1, -2)] = c(0.3, 0.2);
        f[(2, -1)] = c(0.1, 0.4);
        f[(-2, 1)] = c(0.1, -0.4);
        f[(1, 1)] = c(0.25, 0.5);
        f[(-1, -1)] = c(0.25, -0.5);
        let h = HarmonicSpec::new(1.7, -0.4);
        let a = heisenberg_closed(&q_transform(&f, None).unwrap(), &h, 0.8).unwrap();
        let (back, _) = q_inverse(&a);
        assert!(back.max_abs_diff(&drift_oracle(&f, 1.7, 0.8)).unwrap() < 1e-15);
    }

    #[test]
    fn linear_rates_decay_one_over_e() {
        let mut a0 = CoeffGrid::zeros(2);
        a0[(1, 0)] = c(1.0, 0.0);
        let lambda = LindbladSet::linear_rates(2, 1.0);
        let out = diagonal_lindblad_closed(&a0, &lambda, 2.0).unwrap();
        assert!((out[(1, 0)].re - (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn constant_rates_freeze_state() {
        let a0 = sample_matrix(2);
        let out = diagonal_lindblad_closed(&a0, &[c(0.7, 0.2); 5], 3.0).unwrap();
        assert!(out.max_abs_diff(&a0).unwrap() < 1e-15);
        assert!(diagonal_lindblad_closed(&a0, &[c(0.7, 0.2); 5], -1.0).is_err());
    }

    #[test]
    fn rhs_reduces_to_heisenberg() {
        let a = sample_matrix(2);
        let h = HarmonicSpec::new(0.9, 0.3);
        let rhs = lindblad_rhs(&a, &h, &LindbladSet::new(), Picture::Heisenberg).unwrap();
        for (idx, v) in rhs.iter() {
            let expect = I * (h.energy(idx.k) - h.energy(idx.l)) * a[(idx.k, idx.l)];
            assert!((v - expect).norm() < 1e-15);
        }
    }

    #[test]
    fn identity_is_fixed_by_dissipator() {
        let n = 2;
        let one = CoeffGrid::identity(n);
        let set = LindbladSet::new().with_operator(sample_matrix(n));
        let rhs = lindblad_rhs(&one, &HarmonicSpec::new(0.0, 0.0), &set, Picture::Heisenberg).unwrap();
        assert!(rhs.max_abs() < 1e-15);
    }

    #[test]
    fn diagonal_rhs_matches_closed_form_derivative() {
        let n = 3;
        let a = sample_matrix(n);
        let lambda: Vec<_> = (-3..=3).map(|k| c(0.5 * k as f64, 0.1 * (k * k) as f64)).collect();
        let set = LindbladSet::new().with_diagonal(lambda.clone());
        let rhs = lindblad_rhs(&a, &HarmonicSpec::new(0.0, 0.0), &set, Picture::Heisenberg).unwrap();
        // the same dissipator given as a dense matrix
        let dense = LindbladSet::new().with_operator(CoeffGrid::diagonal(n, &lambda).unwrap());
        let rhs_dense =
            lindblad_rhs(&a, &HarmonicSpec::new(0.0, 0.0), &dense, Picture::Heisenberg).unwrap();
        for (idx, v) in rhs.iter() {
            let (lk, ll) = (lambda[(idx.k + 3) as usize], lambda[(idx.l + 3) as usize]);
            let rate = lk.conj() * ll - 0.5 * lk.norm_sqr() - 0.5 * ll.norm_sqr();
            assert!((v - rate * a[(idx.k, idx.l)]).norm() < 1e-14);
        }
        assert!(rhs.max_abs_diff(&rhs_dense).unwrap() < 1e-14);
    }

    #[test]
    fn rhs_preserves_hermiticity() {
        let n = 3;
        let a = hermitian_sample(n);
        let set = LindbladSet::new()
            .with_compact(hermitian_sample(n).scale(c(0.3, 0.0)))
            .unwrap()
            .with_operator(sample_matrix(n));
        for picture in [Picture::Heisenberg, Picture::Schrodinger] {
            let rhs = lindblad_rhs(&a, &HarmonicSpec::new(1.0, 0.5), &set, picture).unwrap();
            rhs.check_hermitian().unwrap();
        }
    }

    #[test]
    fn schrodinger_flow_preserves_trace() {
        let n = 2;
        let rho = hermitian_sample(n);
        let set = LindbladSet::new().with_operator(sample_matrix(n));
        let rhs = lindblad_rhs(&rho, &HarmonicSpec::new(1.0, 0.0), &set, Picture::Schrodinger).unwrap();
        let trace: Complex64 = rhs.range().map(|k| rhs[(k, k)]).sum();
        assert!(trace.norm() < 1e-14);
    }

    #[test]
    fn classical_rk4_tracks_harmonic_flow_when_resolved() {
        let a0 = sample_matrix(3);
        let h = HarmonicSpec::new(1.0, 0.0);
        let cfg = EvolveConfig::new(1.0, 1e-3, 1.0).scheme(Scheme::Classical).record_every(100);
        let traj = evolve_rk4(&a0, &h, &LindbladSet::new(), &cfg).unwrap();
        let exact = heisenberg_closed(&a0, &h, 1.0).unwrap();
        assert!(traj.last().state.max_abs_diff(&exact).unwrap() < 1e-9);
        assert_eq!(traj.points.len(), 11);
        assert!(traj.warnings.is_empty());
    }

    #[test]
    fn interaction_frame_is_exact_without_remainder() {
        let a0 = sample_matrix(4);
        let h = HarmonicSpec::new(2.0 * PI, 0.3);
        let cfg = EvolveConfig::new(0.7, 0.01, 0.5);
        let traj = evolve_rk4(&a0, &h, &LindbladSet::new(), &cfg).unwrap();
        let exact = heisenberg_closed(&a0, &h, 0.7).unwrap();
        assert!(traj.last().state.max_abs_diff(&exact).unwrap() < 1e-13);
        assert_eq!(traj.last().t, 0.7);
    }

    #[test]
    fn under_resolved_classical_step_warns() {
        let a0 = sample_matrix(3);
        let h = HarmonicSpec::new(10.0, 0.0);
        let cfg = EvolveConfig::new(0.1, 0.05, 0.0).scheme(Scheme::Classical);
        let traj = evolve_rk4(&a0, &h, &LindbladSet::new(), &cfg).unwrap();
        assert_eq!(traj.warnings.len(), 1);
    }

    #[test]
    fn divergence_is_reported() {
        let a0 = sample_matrix(2);
        let set = LindbladSet::new().with_operator(sample_matrix(2).scale(c(1e3, 0.0)));
        let cfg = EvolveConfig::new(100.0, 0.5, 0.0);
        let err = evolve_rk4(&a0, &HarmonicSpec::new(0.0, 0.0), &set, &cfg).unwrap_err();
        assert!(matches!(err, Error::Diverged { .. }));
    }

    #[test]
    fn config_validation() {
        let a0 = sample_matrix(1);
        let h = HarmonicSpec::new(0.0, 0.0);
        let set = LindbladSet::new();
        assert!(evolve_rk4(&a0, &h, &set, &EvolveConfig::new(1.0, 0.0, 0.0)).is_err());
        assert!(evolve_rk4(&a0, &h, &set, &EvolveConfig::new(-1.0, 0.1, 0.0)).is_err());
        assert!(evolve_rk4(&a0, &h, &set, &EvolveConfig::new(1.0, 0.1, 0.0).record_every(0)).is_err());
        let traj = evolve_rk4(&a0, &h, &set, &EvolveConfig::new(0.0, 0.1, 0.0)).unwrap();
        assert_eq!(traj.points.len(), 1);
    }

    #[test]
    fn default_step_policy() {
        assert_eq!(EvolveConfig::default_dt(&HarmonicSpec::new(0.0, 1.0), 4), 1e-3);
        let dt = EvolveConfig::default_dt(&HarmonicSpec::new(100.0, 0.0), 8);
        assert!((dt - 0.5 / 1600.0).abs() < 1e-18);
    }

    #[test]
    fn growth_bound_examples() {
        let empty = growth_bound(1.0, &LindbladSet::new(), 3.0).unwrap();
        assert_eq!((empty.c, empty.dissipative, empty.full), (0.0, 1.0, 1.0));

        // ‖L‖²_α = 1/4 at α = 0 → c = 1
        let mut l = CoeffGrid::zeros(2);
        l[(0, 0)] = c(0.5, 0.0);
        let b = growth_bound(0.0, &LindbladSet::new().with_operator(l), 1.0).unwrap();
        assert!((b.c - 1.0).abs() < 1e-15);
        assert!((b.dissipative - std::f64::consts::E).abs() < 1e-15);
        let full = 1.0 + ((2.0f64).exp() - 1.0).sqrt() / (2.0 * SQRT_2);
        assert!((b.full - full).abs() < 1e-15);

        assert!(growth_bound(-0.5, &LindbladSet::new(), 1.0).is_err());
        assert!(growth_bound(0.5, &LindbladSet::new(), -1.0).is_err());
    }
}
