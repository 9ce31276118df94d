use thiserror::Error;

/// Errors raised while building structures or evaluating maps.
///
/// Identity failures are not errors: checkers report them as data.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("root-of-unity order must be odd and at least 3, got {0}")]
    InvalidOrder(u32),
    #[error("{what} is only available for order 3, got {order}")]
    UnsupportedOrder { what: &'static str, order: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("scalars from different fields (orders {0} and {1})")]
    FieldMismatch(u32, u32),
    #[error("label `{0}` is not in the basis")]
    UnknownLabel(String),
    #[error("arity mismatch: expected {expected}, got {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("algebra axiom violated: {0}")]
    AxiomViolation(String),
    #[error("element is not invertible: {0}")]
    NotInvertible(String),
    #[error("convention mismatch: {0}")]
    ConventionMismatch(String),
    #[error("invalid star structure: {0}")]
    InvalidStar(String),
    #[error("subspace is not stable under the braiding: {0}")]
    NotStable(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("malformed data: {0}")]
    Malformed(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
