use thiserror::Error;

/// Every failure the library can report.
///
/// Indices carried by variants are the 1-based (or 0-based, for parameter
/// sequences) positions used throughout the crate, so a message such as
/// `PositivityBreak(5)` points at γ₅ directly.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
    #[error("zero denominator in literal {0:?}")]
    ZeroDenominatorLiteral(String),
    #[error("stream `{name}` exhausted: index {index} requested, valid range is {range}")]
    StreamExhausted {
        name: String,
        index: usize,
        range: String,
    },
    #[error("polynomial has a nonzero odd-degree coefficient (degree {0})")]
    NonEvenPolynomial(usize),
    #[error("polynomial has a nonzero even-degree coefficient (degree {0})")]
    NonOddPolynomial(usize),
    #[error("degree violation: {0}")]
    DegreeViolation(String),
    #[error("γ_{0} must be positive")]
    NonPositiveGamma(usize),
    #[error("not a chain sequence: parameter {0} leaves (0, 1)")]
    NotAChainSequence(usize),
    #[error("γ₁ must satisfy 0 ≤ γ₁ < b₁")]
    InvalidGamma1,
    #[error("γ recovery lost positivity at γ_{0}")]
    PositivityBreak(usize),
    #[error("t coincides with b_{0}")]
    PoleAtB(usize),
    #[error("zero denominator at index {0}")]
    ZeroDenominator(usize),
    #[error("parameter sequence is not minimal (g₀ ≠ 0)")]
    NotMinimal,
    #[error("parameter g_{0} out of range")]
    ParameterOutOfRange(usize),
    #[error("γ₁ = 0 violates the hypothesis γ₁ ≠ 0")]
    Gamma1Zero,
    #[error("Favard positivity fails: a²_{0} ≤ 0")]
    DegenerateFavard(usize),
    #[error("LU pivot {0} is not positive")]
    PivotBreakdown(usize),
    #[error("a²_{0} must be positive")]
    NonPositiveA2(usize),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("α must exceed −1 (got {0})")]
    AlphaOutOfRange(String),
    #[error("degree {n} is outside the family window (largest valid degree {n_max})")]
    DegreeBeyondFamily { n: usize, n_max: usize },
    #[error("input must be positive: {0}")]
    NonPositiveInput(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Breakdowns of the numerical/algebraic process itself, as opposed to
    /// malformed input. The CLI maps these to exit code 3.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NotAChainSequence(_)
                | Error::PositivityBreak(_)
                | Error::PoleAtB(_)
                | Error::ZeroDenominator(_)
                | Error::DegenerateFavard(_)
                | Error::PivotBreakdown(_)
                | Error::NonPositiveA2(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
