//! Error type shared by all laboratory operations.
//!
//! Variants separate caller mistakes (bad parameters, incompatible
//! operands) from runtime conditions discovered mid-computation
//! (ill-conditioning, exhausted trusted ranges, degree overflow), so a
//! front end can map them to distinct exit codes.

/// Failure cases for vector arithmetic, generators and experiments.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A precondition on an argument was violated. The message names it.
    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    /// `lin_comb` was called with no terms.
    #[error("linear combination requires at least one term")]
    EmptyCombination,

    /// Operands do not share the degree or trusted range the operation needs.
    #[error("mismatched operand ranges: {0}")]
    MismatchedRanges(String),

    /// Index arithmetic (for example `n^m`) overflowed the machine word.
    #[error("index arithmetic overflow: {0}")]
    IndexOverflow(String),

    /// The result would need more coefficients than the configured budget.
    #[error("degree budget exceeded: needed {needed} coefficients, budget {budget}")]
    DegreeBudget { needed: usize, budget: usize },

    /// An orbit or profile ran out of trusted coefficients.
    #[error("trusted range exhausted: {0}")]
    TrustedRangeExhausted(String),

    /// A Gram system was numerically singular and no ridge was allowed.
    #[error("gram system ill-conditioned (condition estimate {condition:.3e}) with ridge 0")]
    IllConditioned { condition: f64 },

    /// An operation needed stride-1 snapshots that the orbit does not carry.
    #[error("orbit does not carry stride-1 snapshots")]
    MissingSnapshots,

    /// A tail bound was required but the vector's tail is unknown.
    #[error("tail bound unknown: {0}")]
    UnknownTail(String),
}

impl Error {
    /// True when the failure is a caller mistake rather than a runtime
    /// condition. Front ends use this to pick the exit code.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidParam(_)
                | Error::EmptyCombination
                | Error::MismatchedRanges(_)
                | Error::MissingSnapshots
        )
    }
}
