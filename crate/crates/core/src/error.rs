use thiserror::Error;

/// Errors raised while building or querying the algebraic data.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime below 2^32")]
    NotPrime(u64),
    #[error("denominator of {value} vanishes modulo {prime}")]
    DenominatorVanishes { value: String, prime: u64 },

    #[error("duplicate vertex name `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate arrow name `{0}`")]
    DuplicateArrow(String),
    #[error("arrow `{arrow}` refers to undeclared vertex `{vertex}`")]
    UnknownArrowEndpoint { arrow: String, vertex: String },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("arrows `{outer}` and `{inner}` do not compose")]
    NotComposable { outer: String, inner: String },

    #[error("relation {index} is not homogeneous in path length")]
    InhomogeneousRelation { index: usize },
    #[error("relation {index} contains a path of length {length}; generators must have length >= 2")]
    NonAdmissibleRelation { index: usize, length: usize },
    #[error("relation {index} is zero")]
    ZeroRelation { index: usize },
    #[error("algebra is not finite dimensional up to length {0}; supply a Loewy bound")]
    InfiniteDimensional(usize),

    #[error("top must contain at least one simple module")]
    EmptyTop,
    #[error("degree vector has {got} entries but the top has {expected} slots")]
    DegreeVectorLength { expected: usize, got: usize },

    #[error("skeleton has {got} slots but the top has {expected}")]
    SlotCount { expected: usize, got: usize },
    #[error("slot {slot}: path {path} does not start at the slot vertex")]
    WrongStartVertex { slot: usize, path: String },
    #[error("slot {slot}: path {path} is present but its right subpath {missing} is not")]
    NotSubpathClosed {
        slot: usize,
        path: String,
        missing: String,
    },
    #[error("slot {slot}: path {path} is zero in the algebra")]
    PathInIdeal { slot: usize, path: String },
    #[error("slot {slot}: path {path} is longer than the Loewy length {loewy}")]
    PathTooLong {
        slot: usize,
        path: String,
        loewy: usize,
    },
    #[error("skeleton has {got} paths, expected {expected}")]
    SkeletonSize { expected: usize, got: usize },
    #[error("slot index {0} out of range")]
    SlotOutOfRange(usize),

    #[error("point has {got} coordinates but the chart has {expected} variables")]
    PointArity { expected: usize, got: usize },
    #[error("reduction did not terminate within {0} substitution steps")]
    ReductionDiverged(usize),

    #[error("submodule is not contained in the radical: {0}")]
    NotInRadical(String),
    #[error("subspace is not closed under the arrow action")]
    NotSubmodule,

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("polynomial {0} is not homogeneous")]
    InhomogeneousPolynomial(String),
    #[error("polynomial degree {degree} exceeds the realization depth {depth}")]
    PolynomialDegree { degree: usize, depth: usize },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
