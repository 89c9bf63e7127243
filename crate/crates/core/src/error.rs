use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("limit diverges: coefficient of eps^{0} is nonzero")]
    DivergentLimit(i32),
    #[error("Laurent exponent {0} outside [-16, 16]")]
    ExponentOverflow(i64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported algebraic extension: {0} (coefficients must lie in Q(i, sqrt2, sqrt3))")]
    UnsupportedExtension(String),
    #[error("invalid form: {0}")]
    InvalidForm(String),
    #[error("invalid group element: {0}")]
    InvalidGroupElem(String),
    #[error("not a quadratic algebra: {0}")]
    NotAQuadraticAlgebra(String),
    #[error("normalizing square root leaves Q(i, sqrt2, sqrt3)")]
    SquareRootOutsideField,
    #[error("unknown canonical label: {0}")]
    UnknownLabel(String),
    #[error("unknown system: {0}")]
    UnknownSystem(String),
    #[error("invalid contraction family: {0}")]
    InvalidFamily(String),
    #[error("normalization hypothesis not met: {0}")]
    HypothesisNotMet(String),
    #[error("no bundled witness for {0} -> {1}")]
    MissingWitness(String, String),
    #[error("chart mismatch")]
    ChartMismatch,
    #[error("grading violation: {0}")]
    GradingViolation(String),
    #[error("degenerate Casimir: {0}")]
    DegenerateCasimir(String),
    #[error("Staeckel matrix is singular")]
    SingularStackelMatrix,
    #[error("generators are linearly dependent")]
    LinearlyDependent,
    #[error("data error: {0}")]
    Data(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable tag used in CLI error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "DivisionByZero",
            Error::DivergentLimit(_) => "DivergentLimit",
            Error::ExponentOverflow(_) => "ExponentOverflow",
            Error::Parse(_) => "Parse",
            Error::UnsupportedExtension(_) => "UnsupportedExtension",
            Error::InvalidForm(_) => "InvalidForm",
            Error::InvalidGroupElem(_) => "InvalidGroupElem",
            Error::NotAQuadraticAlgebra(_) => "NotAQuadraticAlgebra",
            Error::SquareRootOutsideField => "SquareRootOutsideField",
            Error::UnknownLabel(_) => "UnknownLabel",
            Error::UnknownSystem(_) => "UnknownSystem",
            Error::InvalidFamily(_) => "InvalidFamily",
            Error::HypothesisNotMet(_) => "HypothesisNotMet",
            Error::MissingWitness(..) => "MissingWitness",
            Error::ChartMismatch => "ChartMismatch",
            Error::GradingViolation(_) => "GradingViolation",
            Error::DegenerateCasimir(_) => "DegenerateCasimir",
            Error::SingularStackelMatrix => "SingularStackelMatrix",
            Error::LinearlyDependent => "LinearlyDependent",
            Error::Data(_) => "Data",
            Error::Io(_) => "Io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
