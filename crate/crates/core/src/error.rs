use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u64),
    #[error("field order {p}^{m} exceeds the cap of 2^20")]
    OrderTooLarge { p: u64, m: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    MixedFields,
    #[error(
        "no embedding: F_{{{source_p}^{source_m}}} does not embed in F_{{{target_p}^{target_m}}}"
    )]
    NoEmbedding {
        source_p: u64,
        source_m: u32,
        target_p: u64,
        target_m: u32,
    },
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("expected {expected} coordinates, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("estimated work {estimated} exceeds the cap {cap}")]
    WorkCapExceeded { estimated: u128, cap: u128 },
    #[error("degree {degree} exceeds the factorization cap {cap}")]
    DegreeCapExceeded { degree: u32, cap: u32 },
    #[error("field order {order} exceeds the cap {cap}")]
    OrderCapExceeded { order: u64, cap: u64 },
    #[error("intervals are not pairwise disjoint")]
    IntervalOverlap,
    #[error("series leading term is not a nonzero rational at exponent 0")]
    NonUnitLeading,
    #[error("series is known only below u^{have}, need at least u^{need}")]
    InsufficientOrder { have: i32, need: i32 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Cap violations map to a distinct CLI exit status.
    pub fn is_cap_violation(&self) -> bool {
        matches!(
            self,
            Error::OrderTooLarge { .. }
                | Error::WorkCapExceeded { .. }
                | Error::DegreeCapExceeded { .. }
                | Error::OrderCapExceeded { .. }
        )
    }
}
