use thiserror::Error;

/// Errors produced by the operator, exponent, and finite-n layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("hermitian check failed: max |M - M*| = {deviation:e} exceeds {allowed:e}")]
    NonHermitianInput { deviation: f64, allowed: f64 },

    #[error("psd check failed: minimum eigenvalue {min_eigenvalue:e} below -{allowed:e}")]
    NotPositiveSemidefinite { min_eigenvalue: f64, allowed: f64 },

    #[error("trace check failed: trace {trace} differs from 1 by more than {allowed:e}")]
    TraceNotUnit { trace: f64, allowed: f64 },

    #[error("non-integer power {exponent} of an operator with negative eigenvalue {min_eigenvalue:e}")]
    NegativeSpectrum { exponent: f64, min_eigenvalue: f64 },

    #[error("negative power {exponent} requested in strict mode but eigenvalue {eigenvalue:e} is below the support cutoff")]
    SingularInStrictMode { exponent: f64, eigenvalue: f64 },

    #[error("operator is singular: eigenvalue {eigenvalue:e} is below the support cutoff")]
    SingularInput { eigenvalue: f64 },

    #[error("dimension {dim} exceeds the configured budget {max}")]
    DimensionBudgetExceeded { dim: usize, max: usize },

    #[error("invalid tolerance `{name}` = {value}: must be strictly positive")]
    InvalidTolerance { name: &'static str, value: f64 },

    #[error("invalid optimizer configuration: {0}")]
    InvalidOptimizerConfig(String),

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("rate r = {0} must be strictly positive")]
    NonpositiveRate(f64),

    #[error("rate r = {rate} too small: the maximizing s sits at the lower cutoff {s_min:e}")]
    RateTooSmall { rate: f64, s_min: f64 },

    #[error("rate-parameter bracket failed: lower bracket passed {bound:e} before reaching r = {rate}")]
    BracketFailure { rate: f64, bound: f64 },

    #[error("a = {a} must be below the relative entropy D = {divergence}")]
    RateAboveDivergence { a: f64, divergence: f64 },

    #[error("trace argument has non-negligible imaginary part {imag:e}")]
    ComplexTrace { imag: f64 },

    #[error("parameter {name} = {value} outside [{lo}, {hi}]")]
    ParameterOutOfRange { name: &'static str, value: f64, lo: f64, hi: f64 },

    #[error("block count n must be at least 1")]
    ZeroBlockCount,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Short name of the violated invariant, used in CLI diagnostics.
    pub fn invariant(&self) -> &'static str {
        match self {
            Error::NotSquare { .. } | Error::DimensionMismatch { .. } => "dimension",
            Error::NonHermitianInput { .. } => "hermitian",
            Error::NotPositiveSemidefinite { .. } | Error::NegativeSpectrum { .. } => "psd",
            Error::TraceNotUnit { .. } => "trace",
            Error::SingularInStrictMode { .. } | Error::SingularInput { .. } => "full-rank",
            Error::DimensionBudgetExceeded { .. } => "dimension-budget",
            Error::InvalidTolerance { .. } => "tolerance",
            Error::InvalidOptimizerConfig(_) => "optimizer-config",
            Error::InvalidDistribution(_) => "distribution",
            Error::InvalidGrid(_) => "grid",
            Error::NonpositiveRate(_) | Error::RateTooSmall { .. } => "rate",
            Error::BracketFailure { .. } => "bracket",
            Error::RateAboveDivergence { .. } => "rate-below-divergence",
            Error::ComplexTrace { .. } => "real-trace",
            Error::ParameterOutOfRange { .. } => "parameter-range",
            Error::ZeroBlockCount => "block-count",
            Error::Parse(_) => "parse",
        }
    }
}
