use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed header: {0}")]
    MalformedHeader(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("expected real-valued input, got complex data")]
    ComplexInput,

    #[error("too few samples: need at least {need}, got {got}")]
    TooFewSamples { need: usize, got: usize },

    #[error("invalid value for `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("requested {requested} components but at most {max} are available")]
    TooManyComponents { requested: usize, max: usize },

    #[error("matrix is singular: {0}")]
    Singular(String),

    #[error("rank deficient: {0}")]
    RankDeficient(String),

    #[error("kernel matrix is not centered; apply center_kernel first")]
    NotCentered,

    #[error("zero variance in {0}")]
    ZeroVariance(&'static str),

    #[error("infeasible generator specification: {0}")]
    Infeasible(String),

    #[error("csv: {0}")]
    Csv(csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// Coarse error classes used for CLI exit codes and FFI status codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    InvalidConfig,
    Format,
    Numerical,
    Io,
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        if e.is_io_error() {
            match e.into_kind() {
                csv::ErrorKind::Io(io) => Error::Io(io),
                _ => unreachable!("is_io_error checked"),
            }
        } else {
            Error::Csv(e)
        }
    }
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::InvalidParameter { .. }
            | Error::TooManyComponents { .. }
            | Error::ComplexInput
            | Error::TooFewSamples { .. }
            | Error::InvalidShape(_)
            | Error::Infeasible(_)
            | Error::NotCentered => ErrorClass::InvalidConfig,
            Error::MalformedHeader(_)
            | Error::DimensionMismatch(_)
            | Error::NonFinite { .. }
            | Error::Parse(_)
            | Error::Csv(_)
            | Error::Json(_) => ErrorClass::Format,
            Error::Singular(_) | Error::RankDeficient(_) | Error::ZeroVariance(_) => {
                ErrorClass::Numerical
            }
            Error::Io(_) => ErrorClass::Io,
        }
    }

    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::MalformedHeader(_) => "malformed_header",
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::NonFinite { .. } => "non_finite",
            Error::Parse(_) => "parse",
            Error::InvalidShape(_) => "invalid_shape",
            Error::ComplexInput => "complex_input",
            Error::TooFewSamples { .. } => "too_few_samples",
            Error::InvalidParameter { .. } => "invalid_parameter",
            Error::TooManyComponents { .. } => "too_many_components",
            Error::Singular(_) => "singular",
            Error::RankDeficient(_) => "rank_deficient",
            Error::NotCentered => "not_centered",
            Error::ZeroVariance(_) => "zero_variance",
            Error::Infeasible(_) => "infeasible",
            Error::Csv(_) => "csv",
            Error::Json(_) => "json",
            Error::Io(_) => "io",
        }
    }

    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
