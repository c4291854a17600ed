use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A theorem's hypothesis does not hold for the given input.
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    /// The input lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Two ring elements were built over different `(a, b)`.
    #[error("parameter mismatch: ({0}, {1}) vs ({2}, {3})")]
    ParameterMismatch(String, String, String, String),

    #[error("degenerate discriminant: a^2 + 4b = 0")]
    DegenerateDiscriminant,

    #[error("non-degenerate discriminant: a^2 + 4b = {0}")]
    NonDegenerateDiscriminant(String),

    /// A bounded computation (factoring, rank search) ran out of budget.
    #[error("resource limit: {0}")]
    Resource(String),

    /// An internal exactness invariant failed. Indicates a bug.
    #[error("internal invariant failed: {0}")]
    InternalInvariant(String),
}

impl Error {
    pub(crate) fn hypothesis(msg: impl Into<String>) -> Self {
        Error::HypothesisViolation(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }
}
