use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("variable index {index} out of range for {num_vars} variables")]
    VariableOutOfRange { index: usize, num_vars: usize },

    #[error("the zero polynomial has no finite root list")]
    ZeroPolynomial,

    #[error("expected a univariate polynomial, got {num_vars} variables")]
    NotUnivariate { num_vars: usize },

    #[error("nonnegativity on R^{num_vars} is undecidable here; model the domain as finite points or a grid")]
    Undecidable { num_vars: usize },

    #[error("polynomial is not in E (residual {residual:e})")]
    NotInSpan { residual: f64 },

    #[error("basis functions are linearly dependent (rank {rank} < {expected})")]
    DependentBasis { rank: usize, expected: usize },

    #[error("invalid weight {0}: weights must be finite and > 1e-12")]
    InvalidWeight(f64),

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("starting point is not a nonnegative solution (residual {residual:e})")]
    InfeasibleStart { residual: f64 },

    #[error("support insufficient: the moment sequence is not representable over the given points")]
    SupportInsufficient,

    #[error("zero functional")]
    ZeroFunctional,

    #[error("separation hypothesis fails: moment vectors are linearly dependent")]
    SeparationFails { dependency: Vec<f64> },

    #[error("the set V_1 is infinite on this domain; supply a finite point model")]
    InfiniteVariety,

    #[error("empty measure cannot represent a nonzero sequence")]
    EmptyMeasure,

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid problem: {0}")]
    Invalid(String),
}

impl Error {
    /// Process exit code used by the command-line frontend.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ZeroFunctional | Error::SupportInsufficient | Error::EmptyMeasure => 3,
            _ => 2,
        }
    }
}
