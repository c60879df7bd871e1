use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use qtl_core::calculus::field_commutator;
use qtl_core::dirichlet::{broadband_average_2d_per_zero, load_zero_table};
use qtl_core::dynamics::{
    evolve_rk4, growth_bound, EvolveConfig, HarmonicSpec, LindbladSet,
};
use qtl_core::sobolev::{alpha_norm, norm};
use qtl_core::spectral::{analyze_to, q_inverse, q_transform, s_map};
use qtl_core::{CoeffGrid, GridTag, SobolevWeight};
use serde_json::json;

use crate::output::{grid_bytes, Csv, Field, Run};
use crate::pgm::Pgm;

fn read_grid(path: &Path) -> Result<(CoeffGrid, GridTag)> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    CoeffGrid::read_json(BufReader::new(file))
        .with_context(|| format!("cannot read grid from {}", path.display()))
}

fn read_field(path: &Path) -> Result<CoeffGrid> {
    let (grid, _) = read_grid(path)?;
    grid.check_fourier_real()
        .with_context(|| format!("{} does not hold a real field", path.display()))?;
    Ok(grid)
}

fn emit_grid(run: &Run, path: &Path, grid: &CoeffGrid, tag: GridTag) -> Result<()> {
    grid.check_tag(tag).with_context(|| format!("result for {} failed validation", path.display()))?;
    run.emit(path, &grid_bytes(grid, tag)?)
}

pub fn smap(input: &Path, out: &Path) -> Result<()> {
    let run = Run::new("smap", vec![input.to_owned()], json!({}));
    let w = s_map(&read_field(input)?)?;
    emit_grid(&run, out, &w, GridTag::Hermitian)
}

pub fn qtransform(f: &Path, g: Option<&Path>, out: &Path) -> Result<()> {
    let mut inputs = vec![f.to_owned()];
    inputs.extend(g.map(Path::to_owned));
    let run = Run::new("qtransform", inputs, json!({}));
    let f = read_field(f)?;
    let g = g.map(read_field).transpose()?;
    let c = q_transform(&f, g.as_ref())?;
    let tag = if g.is_some() { GridTag::General } else { GridTag::Hermitian };
    emit_grid(&run, out, &c, tag)
}

pub fn qinverse(input: &Path, out_f: &Path, out_g: Option<&Path>) -> Result<()> {
    let run = Run::new("qinverse", vec![input.to_owned()], json!({}));
    let (c, _) = read_grid(input)?;
    let (f, g) = q_inverse(&c);
    emit_grid(&run, out_f, &f, GridTag::FourierReal)?;
    if let Some(path) = out_g {
        emit_grid(&run, path, &g, GridTag::FourierReal)?;
    }
    Ok(())
}

pub fn ingest_pgm(input: &Path, n: usize, out: &Path) -> Result<()> {
    let run = Run::new("ingest-pgm", vec![input.to_owned()], json!({ "n": n }));
    let bytes = std::fs::read(input).with_context(|| format!("cannot open {}", input.display()))?;
    let image = Pgm::parse(&bytes).with_context(|| format!("in {}", input.display()))?;
    let (samples, warnings) = image.to_samples(2 * n + 1);
    for w in warnings {
        eprintln!("warning: {w}");
    }
    let z = analyze_to(&samples, n)?;
    emit_grid(&run, out, &z, GridTag::FourierReal)
}

pub fn norms(input: &Path, alphas: &[f64], out: Option<&Path>) -> Result<()> {
    let run = Run::new("norms", vec![input.to_owned()], json!({ "alphas": alphas }));
    let (grid, _) = read_grid(input)?;
    let mut csv = Csv::new(&["alpha", "norm"]);
    for &alpha in alphas {
        csv.row(&[Field::Real(alpha), Field::Real(norm(&grid, &SobolevWeight::Power(alpha))?)]);
    }
    print!("{}", csv.as_str());
    if let Some(path) = out {
        run.emit(path, csv.as_str().as_bytes())?;
    }
    Ok(())
}

pub struct EvolveRequest {
    pub field: PathBuf,
    pub a: f64,
    pub b: f64,
    pub floor: Option<i64>,
    pub compact: Option<PathBuf>,
    pub lindblad: Vec<PathBuf>,
    pub lambda: Option<String>,
    pub t: f64,
    pub dt: Option<f64>,
    pub alpha: f64,
    pub record_every: usize,
    pub out: PathBuf,
    pub trace: PathBuf,
}

fn parse_lambda(spec: &str, n: usize) -> Result<Vec<qtl_core::Complex64>> {
    let Some(rate) = spec.strip_prefix("linear:") else {
        bail!("--lambda expects linear:<c>, got {spec:?}");
    };
    let c: f64 = rate.parse().with_context(|| format!("bad rate in --lambda {spec:?}"))?;
    Ok(LindbladSet::linear_rates(n, c))
}

pub fn evolve(req: &EvolveRequest) -> Result<()> {
    let mut inputs = vec![req.field.clone()];
    inputs.extend(req.compact.clone());
    inputs.extend(req.lindblad.iter().cloned());
    let field = read_field(&req.field)?;
    let n = field.band_limit();

    let mut h = HarmonicSpec::new(req.a, req.b);
    if let Some(n0) = req.floor {
        h = h.with_floor(n0);
    }
    let mut set = LindbladSet::new();
    if let Some(path) = &req.compact {
        set = set.with_compact(read_grid(path)?.0).context("compact term")?;
    }
    for path in &req.lindblad {
        set = set.with_operator(read_grid(path)?.0);
    }
    if let Some(spec) = &req.lambda {
        set = set.with_diagonal(parse_lambda(spec, n)?);
    }
    let dt = req.dt.unwrap_or_else(|| EvolveConfig::default_dt(&h, n));
    let run = Run::new(
        "evolve",
        inputs,
        json!({
            "a": req.a, "b": req.b, "floor": req.floor, "lambda": req.lambda,
            "t": req.t, "dt": dt, "alpha": req.alpha, "record_every": req.record_every,
        }),
    );

    let a0 = q_transform(&field, None)?;
    let cfg = EvolveConfig::new(req.t, dt, req.alpha).record_every(req.record_every);
    let traj = evolve_rk4(&a0, &h, &set, &cfg)?;
    for w in &traj.warnings {
        eprintln!("warning: {w}");
    }

    let norm0 = alpha_norm(&a0, req.alpha);
    let mut csv = Csv::new(&["t", "alpha_norm", "bound_est_T2", "bound_estimate_full"]);
    for p in &traj.points {
        let bound = growth_bound(req.alpha, &set, p.t)?;
        csv.row(&[
            Field::Real(p.t),
            Field::Real(p.alpha_norm),
            Field::Real(bound.dissipative * norm0),
            Field::Real(bound.full * norm0),
        ]);
    }

    let (f, g) = q_inverse(&traj.last().state);
    let scale = f.max_abs().max(f64::MIN_POSITIVE);
    if g.max_abs() > 1e-10 * scale {
        eprintln!(
            "warning: final state has an anti-Hermitian part of size {:e}; writing its real field only",
            g.max_abs()
        );
    }
    emit_grid(&run, &req.out, &f, GridTag::FourierReal)?;
    run.emit(&req.trace, csv.as_str().as_bytes())
}

pub struct RedundancyRequest {
    pub field: PathBuf,
    pub sigma: f64,
    pub zeros: PathBuf,
    pub counts: Vec<usize>,
    pub alpha: f64,
    pub out: PathBuf,
}

pub fn redundancy(req: &RedundancyRequest) -> Result<()> {
    let run = Run::new(
        "redundancy",
        vec![req.field.clone(), req.zeros.clone()],
        json!({ "sigma": req.sigma, "counts": req.counts, "alpha": req.alpha }),
    );
    let file = File::open(&req.zeros)
        .with_context(|| format!("cannot open zero table {}", req.zeros.display()))?;
    let zeros = load_zero_table(BufReader::new(file))
        .with_context(|| format!("in {}", req.zeros.display()))?;
    let fhat = read_field(&req.field)?;
    let weight = SobolevWeight::Power(req.alpha);

    let mut csv = Csv::new(&["zero_count", "T", "l2_error_field", "hs_error_operator"]);
    for &count in &req.counts {
        ensure!(count > 0, "zero counts must be positive");
        let Some(t) = zeros.ordinate(count) else {
            bail!("zero table holds {} ordinates, fewer than the requested {count}", zeros.len());
        };
        let avg = broadband_average_2d_per_zero(&fhat, req.sigma, &zeros, t)?;
        let diff = &avg - &fhat;
        let field_err = norm(&diff, &weight)?;
        let op_err = norm(&s_map(&diff)?, &weight)?;
        csv.row(&[Field::Int(count as u64), Field::Real(t), Field::Real(field_err), Field::Real(op_err)]);
    }
    run.emit(&req.out, csv.as_str().as_bytes())
}

pub fn commutator(f: &Path, g: &Path, out: &Path) -> Result<()> {
    let run = Run::new("commutator", vec![f.to_owned(), g.to_owned()], json!({}));
    let bracket = field_commutator(&read_field(f)?, &read_field(g)?)?;
    emit_grid(&run, out, &bracket, GridTag::FourierReal)
}
