use crate::exponents::Exponent;

/// Errors raised anywhere in the library.
///
/// Lazy series remember the first error their generator produced, so the
/// type is `Clone`.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// No term was found at or below the cap and the series is not known to
    /// be zero.
    #[error("valuation undetermined below {cap}{}", context_suffix(.context))]
    UndeterminedValuation {
        cap: Exponent,
        context: Option<String>,
    },
    #[error("division by the zero series")]
    DivisionByZero,
    #[error("division by a numerically zero coefficient")]
    NumericallyZeroDivisor,
    #[error("substitution argument {index} must have positive valuation")]
    NonPositiveSubstitution { index: usize },
    #[error("sequence is not Cauchy as promised: {0}")]
    NotCauchy(String),
    #[error("series generator emitted terms out of order at exponent {0}")]
    NonMonotoneStream(Exponent),
    #[error("the zero polynomial has no well-defined roots")]
    ZeroPolynomial,
    #[error("coefficient {index} has negative valuation {value}")]
    NegativeValuation { index: usize, value: Exponent },
    #[error("root clusters remain ambiguous at {precision} bits; raise the precision")]
    PrecisionExhausted { precision: u32 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Semantic(String),
}

fn context_suffix(context: &Option<String>) -> String {
    match context {
        Some(c) => format!(" ({c})"),
        None => String::new(),
    }
}

impl Error {
    pub(crate) fn undetermined(cap: &Exponent) -> Self {
        Error::UndeterminedValuation {
            cap: cap.clone(),
            context: None,
        }
    }

    /// Attach a human-readable location to an undetermined-valuation error.
    pub fn with_context(self, context: impl Into<String>) -> Self {
        match self {
            Error::UndeterminedValuation { cap, .. } => Error::UndeterminedValuation {
                cap,
                context: Some(context.into()),
            },
            other => other,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
