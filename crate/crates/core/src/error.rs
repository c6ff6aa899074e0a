use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("resource limit exceeded: {what} (limit {limit})")]
    LimitExceeded { what: String, limit: u128 },
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("map is not a homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("group is not abelian")]
    NotAbelian,
    #[error("action is not a homomorphism into automorphisms: {0}")]
    NotAnAction(String),
    #[error("group is not of nilpotency class at most 2")]
    NotClassTwo,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is neither diagonal nor antidiagonal")]
    NotMonomial,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl GroupError {
    pub fn limit(what: impl Into<String>, limit: impl Into<u128>) -> Self {
        GroupError::LimitExceeded {
            what: what.into(),
            limit: limit.into(),
        }
    }

    pub fn is_limit(&self) -> bool {
        matches!(self, GroupError::LimitExceeded { .. })
    }
}

pub type Result<T> = std::result::Result<T, GroupError>;
