mod commands;
mod output;
mod pgm;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Encode periodic fields as matrices, evolve them, and probe Dirichlet-series bases.
#[derive(Debug, Parser)]
#[command(name = "qtl", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rearrange a fourier-real grid into a Hermitian one.
    Smap(SmapArgs),
    /// Q-transform f (and optionally g, for f + ig) into a matrix.
    Qtransform(QtransformArgs),
    /// Recover the field coefficients from a matrix.
    Qinverse(QinverseArgs),
    /// Read a grayscale PGM image and analyze it into coefficients.
    IngestPgm(IngestArgs),
    /// Print Sobolev norms of a grid as CSV.
    Norms(NormsArgs),
    /// Evolve the matrix of a field under a harmonic Hamiltonian and dissipators.
    Evolve(EvolveArgs),
    /// Average zeta-zero re-encodings and report the recovery error.
    Redundancy(RedundancyArgs),
    /// Field commutator Q⁻¹(i[Qf, Qg]).
    Commutator(CommutatorArgs),
}

#[derive(Debug, Args)]
struct SmapArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct QtransformArgs {
    #[arg(long)]
    f: PathBuf,
    #[arg(long)]
    g: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct QinverseArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Real-part field f.
    #[arg(long = "out-f")]
    out_f: PathBuf,
    /// Imaginary-part field g.
    #[arg(long = "out-g")]
    out_g: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct IngestArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Band limit; the image is cropped or padded to 2N+1 pixels per side.
    #[arg(long)]
    n: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct NormsArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Comma-separated α values.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
    alphas: Vec<f64>,
    /// Also write the CSV here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvolveArgs {
    /// Fourier-real field grid.
    #[arg(long)]
    field: PathBuf,
    /// Slope of the spectrum h_n = a·n + b.
    #[arg(long, allow_negative_numbers = true)]
    a: f64,
    #[arg(long, allow_negative_numbers = true)]
    b: f64,
    /// Spectral floor n₀: h_n = 0 below it.
    #[arg(long, allow_negative_numbers = true)]
    floor: Option<i64>,
    /// Hermitian compact perturbation C.
    #[arg(long)]
    compact: Option<PathBuf>,
    /// Dissipator L_j; repeat or list several.
    #[arg(long, num_args = 1..)]
    lindblad: Vec<PathBuf>,
    /// Diagonal dissipator, e.g. `linear:1.5` for λ_n = 1.5·n.
    #[arg(long)]
    lambda: Option<String>,
    #[arg(long)]
    t: f64,
    /// Step size; defaults to min(1e-3, 0.5/max|h_k - h_l|).
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    /// Trace every this many steps (the final step is always traced).
    #[arg(long, default_value_t = 1)]
    record_every: usize,
    /// Final field grid.
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    trace: PathBuf,
}

#[derive(Debug, Args)]
struct RedundancyArgs {
    #[arg(long)]
    field: PathBuf,
    #[arg(long)]
    sigma: f64,
    /// Zero-ordinate table, one ordinate per line.
    #[arg(long)]
    zeros: PathBuf,
    /// Numbers of zeros to average over.
    #[arg(long, value_delimiter = ',', required = true)]
    counts: Vec<usize>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct CommutatorArgs {
    #[arg(long)]
    f: PathBuf,
    #[arg(long)]
    g: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

fn configure_threads() {
    if let Some(n) = std::env::var("QTL_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            // fails only if a pool exists already, which cannot happen this early
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    configure_threads();
    let result = match cli.command {
        Command::Smap(a) => commands::smap(&a.input, &a.out),
        Command::Qtransform(a) => commands::qtransform(&a.f, a.g.as_deref(), &a.out),
        Command::Qinverse(a) => commands::qinverse(&a.input, &a.out_f, a.out_g.as_deref()),
        Command::IngestPgm(a) => commands::ingest_pgm(&a.input, a.n, &a.out),
        Command::Norms(a) => commands::norms(&a.input, &a.alphas, a.out.as_deref()),
        Command::Evolve(a) => commands::evolve(&commands::EvolveRequest {
            field: a.field,
            a: a.a,
            b: a.b,
            floor: a.floor,
            compact: a.compact,
            lindblad: a.lindblad,
            lambda: a.lambda,
            t: a.t,
            dt: a.dt,
            alpha: a.alpha,
            record_every: a.record_every,
            out: a.out,
            trace: a.trace,
        }),
        Command::Redundancy(a) => commands::redundancy(&commands::RedundancyRequest {
            field: a.field,
            sigma: a.sigma,
            zeros: a.zeros,
            counts: a.counts,
            alpha: a.alpha,
            out: a.out,
        }),
        Command::Commutator(a) => commands::commutator(&a.f, &a.g, &a.out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
