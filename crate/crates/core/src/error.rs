use thiserror::Error;

/// Errors raised anywhere in the evaluation pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid precision: {0}")]
    InvalidPrecision(String),

    #[error("division by exact zero")]
    DivisionByZero,

    #[error("pole of the gamma function at {0}")]
    Pole(String),

    #[error("series divisor vanishes identically on its window")]
    DivisionByZeroSeries,

    #[error("series divisor has a leading coefficient indistinguishable from zero (|c| = 10^{0:.1})")]
    PossiblyZeroLeading(f64),

    #[error("exponent {exponent} lies outside the series window [{low}, {high})")]
    Window { exponent: i64, low: i64, high: i64 },

    #[error("unstable Hodge-number classification: {0}")]
    Ambiguity(String),

    #[error("cancellation exceeded the guard digits ({lost:.1} digits lost, {available} available)")]
    Precision { lost: f64, available: u32 },

    #[error("truncation: {0}")]
    Truncation(String),

    #[error("continued fraction degenerates at depth {0}")]
    Degenerate(usize),

    #[error("crossover check failed: |taylor - asymptotic| = {residual:e} > {eps:e} at t = {t}")]
    Crossover { t: f64, residual: f64, eps: f64 },

    #[error("parameter `{0}` is unknown; use the solver")]
    UnknownParameter(String),

    #[error("ill-conditioned system (condition estimate 10^{0:.1})")]
    IllConditioned(f64),

    #[error("coefficient {index} = {value} is not integral (distance 10^{distance_log10:.1})")]
    NonIntegral {
        index: String,
        value: String,
        distance_log10: f64,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{assumption} violated: {message}")]
    Validation { assumption: &'static str, message: String },

    #[error("{0}")]
    Unsupported(String),

    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
