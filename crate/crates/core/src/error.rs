use thiserror::Error;

/// Errors raised by the numerical kernels, the test law and the simulators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series did not converge within {max_terms} terms (a={a}, b={b}, x={x})")]
    NonConvergence { a: f64, b: f64, x: f64, max_terms: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no sign change found below theta={ceiling} for k={k}")]
    BracketFailure { k: f64, ceiling: f64 },

    #[error("root finder did not converge in {iterations} iterations")]
    RootNotConverged { iterations: usize },

    #[error("quadrature did not reach tolerance {tol:e} on [{lo}, {hi}]")]
    QuadratureFailure { lo: f64, hi: f64, tol: f64 },

    #[error("k={k} outside the supported range [{min}, {max}]")]
    OutOfRange { k: f64, min: f64, max: f64 },

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("no critical value: target probability {target} not attainable (range [{lo}, {hi}])")]
    NoSolution { target: f64, lo: f64, hi: f64 },

    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("degenerate null: {count} of {total} points clamped to the {endpoint} endpoint")]
    DegenerateNull { count: usize, total: usize, endpoint: &'static str },

    #[error("empty window: no order statistic lies in [{a}, {b}]")]
    EmptyWindow { a: f64, b: f64 },

    #[error("configuration error: {0}")]
    ConfigError(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Non-fatal diagnostics attached to law evaluations and test reports.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Warning {
    /// The asymptotic law assumes a large sample.
    SmallSample { n: f64, min: f64 },
    /// Transformed values that landed on 0 or 1 and were pulled inside (0, 1).
    ClampedValues { count: usize },
}

impl std::fmt::Display for Warning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Warning::SmallSample { n, min } => {
                write!(f, "sample size {n} is below {min}; the asymptotic law may be inaccurate")
            }
            Warning::ClampedValues { count } => {
                write!(f, "{count} transformed value(s) clamped into (0, 1)")
            }
        }
    }
}
