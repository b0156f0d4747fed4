use num_bigint::BigUint;

/// Failure modes shared by every module.
///
/// Absence of a solution is never an error; it is reported as a value
/// (`Option::None`, an empty list). Errors mean the question itself was
/// malformed, or that no theorem covers it.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// A precondition on the inputs does not hold.
    #[error("domain error: {0}")]
    Domain(String),

    /// Factoring gave up on a composite cofactor after spending its budget.
    #[error("incomplete factorization of {value}: cofactor {cofactor} was not split within budget")]
    IncompleteFactorization { value: BigUint, cofactor: BigUint },

    /// The (shape, equation) pair is not covered by any implemented theorem.
    #[error("no theorem applies: {0}")]
    NoTheorem(String),

    /// An application query lies outside every theorem's hypotheses.
    #[error("uncovered: {0}")]
    Uncovered(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
