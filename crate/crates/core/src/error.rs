use std::fmt;
use std::io;

/// Errors produced by the numeric kernels and the scan pipeline.
#[derive(Debug)]
pub enum Error {
    /// An argument fell outside the mathematical domain of an operation.
    Domain { op: &'static str, detail: String },
    /// Log-gamma requested at a pole (non-positive integer).
    GammaPole { re: f64, im: f64 },
    /// The Bessel series did not converge within the term cap.
    SeriesDivergence {
        nu: f64,
        z: f64,
        terms: usize,
        last_ratio: f64,
    },
    /// Adaptive quadrature did not reach the requested tolerance.
    QuadratureDivergence {
        levels: u32,
        panels: usize,
        last_change: f64,
    },
    /// A covariance matrix violated physicality.
    Unphysical { detail: String },
    /// A mode specification failed a hard precondition.
    InvalidSpec(String),
    /// Operation applied to a mode kind that does not support it.
    UnsupportedMode {
        op: &'static str,
        kind: &'static str,
    },
    /// A numeric result that must be positive or finite was not.
    Numeric { op: &'static str, detail: String },
    /// Rejection sampling failed to find admissible parameters.
    SamplingStarvation { index: usize, attempts: u32 },
    /// An invalid scan or sweep configuration.
    InvalidConfig(String),
    /// Cache or output I/O failure.
    Io(io::Error),
    /// A cache entry or table field failed to parse.
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { op, detail } => write!(f, "{op}: argument outside domain: {detail}"),
            Error::GammaPole { re, im } => {
                write!(f, "log-gamma evaluated at a pole: z = {re} + {im}i")
            }
            Error::SeriesDivergence {
                nu,
                z,
                terms,
                last_ratio,
            } => write!(
                f,
                "Bessel series did not converge: nu = {nu}, z = {z}, \
                 {terms} terms, last term ratio {last_ratio:.3e}"
            ),
            Error::QuadratureDivergence {
                levels,
                panels,
                last_change,
            } => write!(
                f,
                "quadrature did not converge after {levels} bisections \
                 ({panels} panels, last relative change {last_change:.3e})"
            ),
            Error::Unphysical { detail } => write!(f, "unphysical covariance matrix: {detail}"),
            Error::InvalidSpec(msg) => write!(f, "invalid mode specification: {msg}"),
            Error::UnsupportedMode { op, kind } => {
                write!(f, "{op} is not supported for {kind} modes")
            }
            Error::Numeric { op, detail } => write!(f, "{op}: numeric failure: {detail}"),
            Error::SamplingStarvation { index, attempts } => write!(
                f,
                "rejection sampling starved at record {index} after {attempts} attempts"
            ),
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
            Error::Io(e) => write!(f, "i/o error: {e}"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<io::Error> for Error {
    fn from(e: io::Error) -> Self {
        Error::Io(e)
    }
}
