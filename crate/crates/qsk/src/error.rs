use thiserror::Error;

/// Everything that can go wrong during evaluation. Variants are coarse on
/// purpose: callers branch on the kind, the message carries the detail.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// Input outside the documented domain (|q| >= 1, weight argument off
    /// the orthogonality interval, and so on).
    #[error("domain violation: {0}")]
    DomainViolation(String),

    /// A series failed to meet the truncation policy within max_terms, or
    /// its parameters make it divergent outright.
    #[error("series did not converge: {0}")]
    NonConvergent(String),

    /// A lower q-shifted-factorial parameter hits q^{-m}, so a term
    /// denominator vanishes before the series terminates.
    #[error("denominator parameter pole: {0}")]
    DenominatorPole(String),

    /// An infinite product in a denominator is numerically zero.
    #[error("division by vanishing product: {0}")]
    DivisionByVanishingProduct(String),

    /// Gamma or q-gamma evaluated at a pole.
    #[error("pole: {0}")]
    PoleError(String),

    /// Argument sits on a branch cut (z <= 1 for the Legendre functions of
    /// the second kind, fractional power of a negative real, ...).
    #[error("branch cut: {0}")]
    BranchDomain(String),

    /// The two-2F1 combination for the Jacobi function of the second kind
    /// degenerates when alpha is an integer.
    #[error("integer alpha unsupported: {0}")]
    IntegerAlphaUnsupported(String),

    /// A parameter combination the formula excludes (vanishing Pochhammer
    /// denominator, nonpositive parametric excess at z = 1, ...).
    #[error("parameter domain: {0}")]
    ParameterDomain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
