use thiserror::Error;

/// Errors raised anywhere in the construction and verification pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("hermitian mode needs an even extension degree, got s = {0}")]
    HermitianNeedsEvenS(u32),
    #[error("field of order {p}^{degree} exceeds the supported maximum of 2^20 elements")]
    FieldTooLarge { p: u32, degree: u32 },
    #[error("{n} does not divide the multiplicative group order {order}")]
    DoesNotDivideGroupOrder { n: usize, order: usize },
    #[error("F_{order} is not a subfield of F_{big}")]
    NotASubfield { order: u32, big: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different field towers")]
    TowerMismatch,

    #[error("base {base} is not coprime to modulus {modulus}")]
    BaseNotCoprime { base: usize, modulus: usize },
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: usize, right: usize },
    #[error("{divisor} does not divide {modulus}")]
    NotADivisor { divisor: usize, modulus: usize },
    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("exponent set is not {base}-complete")]
    NotComplete { base: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("malformed input: {0}")]
    Parse(String),

    #[error("divisibility violation: {0}")]
    DivisibilityViolation(String),
    #[error("exponent out of range: {0}")]
    ExponentOutOfRange(String),

    #[error("field order {0} is not a square")]
    FieldNotSquare(u32),
    #[error("empty index set")]
    EmptyIndexSet,
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("the zero code has no minimum distance")]
    ZeroCode,

    #[error("coordinate {coordinate} has no recovery set")]
    NotLocallyRecoverable { coordinate: usize },
    #[error("recovery-set search infeasible: {0}")]
    SearchInfeasible(String),
    #[error("invalid locality parameters: {0}")]
    InvalidLocality(String),

    #[error("code is not self-orthogonal")]
    NotSelfOrthogonal,
    #[error("code is not dual-containing")]
    NotDualContaining,

    #[error("invalid family specification: {0}")]
    SpecInvalid(String),
    #[error("axis size {size} must be at least 2 and below {limit}")]
    AxisTooLarge { size: usize, limit: u32 },
    #[error("axis point set is not contained in F_{0}")]
    AxisNotInSubfield(u32),
    #[error("verification mismatch: {0}")]
    VerificationMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Short machine-readable name of the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "NotPrime",
            Error::HermitianNeedsEvenS(_) => "HermitianNeedsEvenS",
            Error::FieldTooLarge { .. } => "FieldTooLarge",
            Error::DoesNotDivideGroupOrder { .. } => "DoesNotDivideGroupOrder",
            Error::NotASubfield { .. } => "NotASubfield",
            Error::DivisionByZero => "DivisionByZero",
            Error::TowerMismatch => "TowerMismatch",
            Error::BaseNotCoprime { .. } => "BaseNotCoprime",
            Error::ModulusMismatch { .. } => "ModulusMismatch",
            Error::NotADivisor { .. } => "NotADivisor",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::NotComplete { .. } => "NotComplete",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::Parse(_) => "Parse",
            Error::DivisibilityViolation(_) => "DivisibilityViolation",
            Error::ExponentOutOfRange(_) => "ExponentOutOfRange",
            Error::FieldNotSquare(_) => "FieldNotSquare",
            Error::EmptyIndexSet => "EmptyIndexSet",
            Error::Infeasible(_) => "Infeasible",
            Error::ZeroCode => "ZeroCode",
            Error::NotLocallyRecoverable { .. } => "NotLocallyRecoverable",
            Error::SearchInfeasible(_) => "SearchInfeasible",
            Error::InvalidLocality(_) => "InvalidLocality",
            Error::NotSelfOrthogonal => "NotSelfOrthogonal",
            Error::NotDualContaining => "NotDualContaining",
            Error::SpecInvalid(_) => "SpecInvalid",
            Error::AxisTooLarge { .. } => "AxisTooLarge",
            Error::AxisNotInSubfield(_) => "AxisNotInSubfield",
            Error::VerificationMismatch(_) => "VerificationMismatch",
        }
    }
}
