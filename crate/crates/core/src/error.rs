use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("not defined: {0}")]
    NotDefined(String),

    #[error("field degree {needed} exceeds the capacity limit of {limit}")]
    Capacity { needed: u64, limit: u32 },

    #[error("enumeration of 2^{needed_log2} points exceeds the budget of 2^{budget_log2}")]
    BudgetExceeded { needed_log2: u32, budget_log2: u32 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("field mismatch: degree {left} vs degree {right}")]
    FieldMismatch { left: u32, right: u32 },

    #[error("linearized polynomial is inseparable (zero linear coefficient)")]
    Inseparable,

    #[error("right side is in the image of y^2+y: the cover is reducible")]
    ReducibleCover,

    #[error("exponent {0} is not of the form 2^a(2^e+1) or 2^b")]
    NotRepresentable(u64),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("beta is not admissible: the splitting system is incompatible")]
    BetaNotAdmissible,

    #[error("alpha is zero or not a root of the alpha-space equation")]
    NotInAlphaSpace,

    #[error("curve is reducible")]
    Reducible,

    #[error("inconsistent point counts: {0}")]
    InconsistentCounts(String),

    #[error("right side reduces to even degree: infinity is not totally ramified")]
    UnsupportedRamification,

    #[error("internal consistency failure: {0}")]
    Internal(String),
}
