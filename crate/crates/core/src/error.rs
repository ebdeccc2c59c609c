use thiserror::Error;

use crate::cfrac::Fraction;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cannot evaluate a polynomial with negative exponents at zero")]
    ZeroWithNegativeExponent,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("divisor does not divide the dividend exactly")]
    NotDivisible,
    #[error("matrices use different variable conventions")]
    ConventionMismatch,
    #[error(
        "determinant is not a signed monomial; matrix is not invertible over the Laurent ring"
    )]
    NotUnitDeterminant,
    #[error("the zero matrix has no projective class")]
    ZeroMatrix,
    #[error("expected a positive rational, got {0}")]
    NonPositive(Fraction),
    #[error("infinity has no continued fraction expansion")]
    Infinite,
    #[error("reflection of a q-rational with zero numerator")]
    ZeroNumerator,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("I/O error: {0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("integer overflow while {0}")]
    Overflow(&'static str),
    #[error("root finder did not converge for degree {degree} (residual {residual:e}){}", context_suffix(.context))]
    NoConvergence {
        degree: usize,
        residual: f64,
        context: Option<String>,
    },
    #[error("denominator constant term is {0}, expected +1 or -1 for an integer Taylor series")]
    NonUnitConstantTerm(String),
    #[error("numerator has a negative q-valuation; the expansion is not a power series")]
    NegativeValuation,
    #[error("Taylor series did not stabilize to order {order} before convergent {cap}")]
    StabilizationNotReached { order: usize, cap: usize },
    #[error("specialization point must be nonzero")]
    ZeroInput,
    #[error("decomposition verification failed: sigma1^{k} z^{m} does not reproduce the word")]
    InconsistentDecomposition { k: i64, m: i64 },
}

fn context_suffix(context: &Option<String>) -> String {
    match context {
        Some(c) => format!(" at {c}"),
        None => String::new(),
    }
}

impl Error {
    /// Attach the name of the offending input to a convergence failure.
    pub fn with_context(self, ctx: impl Into<String>) -> Self {
        match self {
            Error::NoConvergence {
                degree, residual, ..
            } => Error::NoConvergence {
                degree,
                residual,
                context: Some(ctx.into()),
            },
            other => other,
        }
    }
}
