use num_bigint::BigUint;
use thiserror::Error;

use crate::wss::WssClassification;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid modulus {0}: must be at least 2")]
    InvalidModulus(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("factorization incomplete: budget exhausted with unfactored cofactor {cofactor}")]
    FactorizationIncomplete { cofactor: BigUint },

    #[error("elements live in different rings: (k={0}, m={1}) vs (k={2}, m={3})")]
    IncompatibleElements(u64, u64, u64, u64),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("hypothesis violated for k={k}: {reason}")]
    HypothesisViolation { k: u64, reason: String },

    #[error("criterion {0} is not defined at p = 2")]
    UnsupportedCriterion(&'static str),

    #[error("order search exceeded cap {0}")]
    OrderCapExceeded(u64),

    #[error("criteria disagree for k={}, p={}", .0.k, .0.p)]
    InternalInconsistency(Box<WssClassification>),
}

pub type Result<T> = std::result::Result<T, Error>;
