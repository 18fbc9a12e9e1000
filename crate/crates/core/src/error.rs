use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u32, u32),
    #[error("argument outside the convergence domain: {0}")]
    OutOfDomain(String),
    #[error("point outside the open unit disc: {0}")]
    OutOfDisc(String),
    #[error("r and s are not coprime (r = {r}, s = {s})")]
    NotCoprime { r: i64, s: i64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("rank deficient: {0}")]
    RankDeficient(String),
    #[error("subspace is not Frobenius-stable: {0}")]
    NotStable(String),
    #[error("Newton vector is not polarized: {0}")]
    NotPolarized(String),
    #[error("sum of nilpotent operators is not nilpotent")]
    NotNilpotentSum,
    #[error("operator is not nilpotent")]
    NotNilpotent,
    #[error("zero nilpotent operator has no sl2-triple")]
    ZeroNilpotent,
    #[error("1/k! denominators exhaust precision (k = {0})")]
    DenominatorPrecision(usize),
    #[error("pairing diverges: {0}")]
    Divergent(String),
    #[error("enumeration budget exceeded ({0} candidates)")]
    BudgetExceeded(usize),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
