use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymError {
    #[error("division by an identically zero denominator")]
    DegenerateDivision,
    #[error("denominator mixes several exponential factors: {0}")]
    UnsupportedDenominator(String),
    #[error("cyclic substitution through symbol `{0}`")]
    CyclicSubstitution(String),
    #[error("expression is not polynomial in marker `{0}`")]
    NotPolynomial(String),
    #[error("negative power of zero")]
    ZeroToNegativePower,
    #[error("cannot evaluate `{0}`")]
    Unevaluable(String),
}
