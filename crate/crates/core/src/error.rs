use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("scalar tower mismatch: {left} vs {right}")]
    TowerMismatch { left: String, right: String },
    #[error("degree mismatch: {0}")]
    Degree(String),
    #[error("invalid complex structure: {0}")]
    ComplexStructure(String),
    #[error("form is not of bidegree ({p},{q})")]
    Bidegree { p: usize, q: usize },
    #[error("form is not real")]
    NotReal,
    #[error("rotation parameter is not in A+: {0}")]
    NotInAPlus(String),
    #[error("not a Spin(7) structure: {0}")]
    NotSpin7(String),
    #[error("singular system: {0}")]
    Singular(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("schema error at {field}: {message}")]
    Schema { field: String, message: String },
    #[error("step needs floating point: {0}")]
    FloatFallbackRequired(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable name of the variant, used in machine-readable reports.
    pub fn name(&self) -> &'static str {
        match self {
            Error::TowerMismatch { .. } => "TowerMismatch",
            Error::Degree(_) => "Degree",
            Error::ComplexStructure(_) => "ComplexStructure",
            Error::Bidegree { .. } => "Bidegree",
            Error::NotReal => "NotReal",
            Error::NotInAPlus(_) => "NotInAPlus",
            Error::NotSpin7(_) => "NotSpin7",
            Error::Singular(_) => "Singular",
            Error::InvalidInput(_) => "InvalidInput",
            Error::Schema { .. } => "Schema",
            Error::FloatFallbackRequired(_) => "FloatFallbackRequired",
        }
    }
}
