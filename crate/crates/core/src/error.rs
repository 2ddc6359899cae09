use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("weight list is empty")]
    Empty,

    #[error("weight {index} has dimension {found}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },

    #[error("weights have rank {rank} but live in Z^{dim}; the weight map must be surjective modulo torsion")]
    RankDeficient { rank: usize, dim: usize },

    #[error("problem is not Calabi-Yau: the weights sum to {det_v}")]
    NotCalabiYau { det_v: String },

    #[error("the weights generate a sublattice of index {index}; the discriminant comparison needs them to generate the whole character lattice")]
    Torsion { index: String },

    #[error("rays {0} and {1} coincide")]
    IndistinctRays(usize, usize),

    #[error("weight {0} is zero")]
    ZeroWeight(usize),

    #[error("operation needs rank {expected}, problem has rank {found}")]
    WrongRank { expected: usize, found: usize },

    #[error("subspace has rank {found}, expected codimension one (rank {expected})")]
    NotCodimOne { expected: usize, found: usize },

    #[error("stability condition {0} lies on a hyperplane of the arrangement")]
    NonGeneric(String),

    #[error("chamber {0} does not exist")]
    NoSuchChamber(usize),

    #[error("chamber {0} is empty (outside the cone of weights)")]
    EmptyChamber(usize),

    #[error("linear form of weight {index} vanishes at the given point")]
    VanishingForm { index: usize },

    #[error("vector has length {found}, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("no monotone path from chamber {0} to a minimal chamber")]
    NoMonotonePath(usize),

    #[error("intersection multiplicity is only implemented up to Coulomb rank 2, face has rank {0}")]
    UnsupportedRank(usize),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
