use thiserror::Error;

/// Errors raised by the estimation pipeline.
///
/// [`Error::kind`] gives the stable machine-readable name used in CLI reports.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error at row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: usize,
        message: String,
    },
    #[error("io error: {0}")]
    Io(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("feature {index} is constant across units")]
    DegenerateFeature { index: usize },
    #[error("numerical error: {0}")]
    Numerical(String),
    #[error("value out of range: {0}")]
    Range(String),
    #[error("likelihood undefined: {0}")]
    Domain(String),
    #[error("bound for k = {k} is degenerate: {reason}")]
    DegenerateBound { k: usize, reason: String },
    #[error("degenerate spectrum: {0}")]
    DegenerateSpectrum(String),
    #[error("every grid point was skipped; no vote was cast")]
    EmptyTally,
    #[error("infeasible scenario: {0}")]
    InfeasibleScenario(String),
    #[error("config error: {0}")]
    Config(String),
}

impl Error {
    /// Stable error name, e.g. `"ParseError"`.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } | Error::Io(_) => "ParseError",
            Error::Shape(_) => "ShapeError",
            Error::DegenerateFeature { .. } => "DegenerateFeature",
            Error::Numerical(_) => "NumericalError",
            Error::Range(_) => "RangeError",
            Error::Domain(_) => "DomainError",
            Error::DegenerateBound { .. } => "DegenerateBound",
            Error::DegenerateSpectrum(_) => "DegenerateSpectrum",
            Error::EmptyTally => "EmptyTally",
            Error::InfeasibleScenario(_) => "InfeasibleScenario",
            Error::Config(_) => "ConfigError",
        }
    }

    /// Internal numerical failures, as opposed to bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Numerical(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
