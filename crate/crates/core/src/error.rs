use thiserror::Error;

/// Errors raised by group, block, closure and CI operations.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("image sequence is not a bijection of 0..{0}")]
    NotBijection(usize),
    #[error("group order {order} exceeds the enumeration cap {cap}")]
    CapExceeded { order: u128, cap: u128 },
    #[error("degree {degree} exceeds the arity-{arity} budget of {budget}")]
    BudgetExceeded { degree: usize, arity: usize, budget: usize },
    #[error("group is not transitive")]
    NotTransitive,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("not a subgroup of the ambient group")]
    NotSubgroup,
    #[error("partition is not invariant under the group")]
    NotBlockSystem,
    #[error("set is not a block of the group")]
    NotABlock,
    #[error("malformed partition: {0}")]
    MalformedPartition(String),
    #[error("first block system does not refine the second")]
    NotRefining,
    #[error("invalid group spec: {0}")]
    InvalidSpec(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
