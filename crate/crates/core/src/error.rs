use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cycle lengths must be at least 3, got n={n}, k={k}")]
    Domain { n: usize, k: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid face: {0}")]
    InvalidFace(String),

    #[error("invalid complex: {0}")]
    InvalidComplex(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("graph has {vertices} vertices, above the search cap of {cap}")]
    SizeLimit { vertices: usize, cap: usize },

    #[error("group action does not preserve the complex: {0}")]
    ActionNotPreserving(String),

    #[error("point set does not affinely span R^4 (smallest Gram eigenvalue {0:e})")]
    RankDeficient(f64),

    #[error("invalid realization: {0}")]
    InvalidRealization(String),

    #[error("face {0} is not a quadrilateral")]
    NonQuadrilateral(usize),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}
