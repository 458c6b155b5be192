use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "qht", version, about = "Quantum hypothesis-testing exponents and finite-n bound checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// D(rho||sigma) and psi_bar, psi on an s-grid.
    Exponents {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long = "grid-s", allow_hyphen_values = true, default_value = "0:1:0.1")]
        grid_s: String,
        /// Also write the pair, as used, to this JSON file.
        #[arg(long = "export-pair")]
        export_pair: Option<PathBuf>,
        #[command(flatten)]
        tol: TolArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Curve sweeps for plotting.
    Curves {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long = "grid-s", allow_hyphen_values = true)]
        grid_s: Option<String>,
        #[arg(long = "grid-a", allow_hyphen_values = true)]
        grid_a: Option<String>,
        /// Emit a single curve as `param,value,argmax_s`.
        #[arg(long, value_enum)]
        curve: Option<CurveArg>,
        #[command(flatten)]
        tol: TolArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// u_bar(r) and a_r on an r-grid.
    Hoeffding {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long = "grid-r", allow_hyphen_values = true, default_value = "0.01:0.5:0.01")]
        grid_r: String,
        #[command(flatten)]
        tol: TolArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Exact error probabilities of the pinched test against their bounds.
    FiniteN {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long = "n-max", default_value_t = 4)]
        n_max: usize,
        /// Absolute a-grid; defaults to {0.25, 0.5, 0.75, 0.9} x D(rho||sigma).
        #[arg(long = "grid-a", allow_hyphen_values = true)]
        grid_a: Option<String>,
        #[command(flatten)]
        tol: TolArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Invariant suite on seeded random pairs; exit 1 if any check fails.
    Verify {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        pairs: usize,
        #[arg(long = "n-max", default_value_t = 4)]
        n_max: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[command(flatten)]
        tol: TolArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Experimental finite-n rates of the plain test.
    Conjecture {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long = "n-max", default_value_t = 6)]
        n_max: usize,
        /// Absolute threshold a; overrides --a-fraction.
        #[arg(long, allow_hyphen_values = true)]
        a: Option<f64>,
        /// Threshold as a fraction of D(rho||sigma).
        #[arg(long = "a-fraction", default_value_t = 0.5)]
        a_fraction: f64,
        #[command(flatten)]
        tol: TolArgs,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct PairArgs {
    /// JSON file `{"rho": {...}, "sigma": {...}}`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// identical, commuting-1, or qubit-generic.
    #[arg(long)]
    pub preset: Option<String>,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct TolArgs {
    #[arg(long = "tol-cluster")]
    pub tol_cluster: Option<f64>,
    /// Smoothing weight; implies --smooth.
    #[arg(long = "smoothing-delta", conflicts_with = "strict")]
    pub smoothing_delta: Option<f64>,
    /// Reject singular states (default).
    #[arg(long, conflicts_with = "smooth")]
    pub strict: bool,
    /// Smooth both states towards I/d before use.
    #[arg(long)]
    pub smooth: bool,
}

#[derive(Debug, Args)]
pub struct OutArgs {
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format; inferred from the --out extension when absent.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CurveArg {
    PsiBar,
    Psi,
    PhiBar,
    Phi,
}
