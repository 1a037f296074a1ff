use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("group order {order} exceeds the element cap {cap}")]
    CapExceeded { order: u64, cap: u64 },

    #[error("{what}: size {size} exceeds budget {budget}")]
    BudgetExceeded { what: &'static str, size: u64, budget: u64 },

    #[error("permutation {0} is not an element of the group")]
    NotAnElement(String),

    #[error("mask is not a subgroup: {0}")]
    NotSubgroup(String),

    #[error("subgroup is not normal")]
    NotNormal,

    #[error("action is not transitive")]
    NotTransitive,

    #[error("group is not nonabelian simple: {0}")]
    NotSimple(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("unsupported parameter: {0}")]
    Unsupported(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("certificate rejected: {0}")]
    CertificateRejected(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
