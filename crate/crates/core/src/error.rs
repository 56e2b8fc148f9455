use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("entry count {found} does not form a {dim}x{dim} matrix")]
    MalformedMatrix { dim: usize, found: usize },

    #[error("non-finite value at position {index}")]
    NonFinite { index: usize },

    #[error("vector is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },

    #[error("cannot normalize the zero vector")]
    ZeroVector,

    #[error("basis vectors {i} and {j} are not orthonormal (inner product magnitude {inner})")]
    NotOrthonormal { i: usize, j: usize, inner: f64 },

    #[error("expected {expected} basis vectors, found {found}")]
    BasisSize { expected: usize, found: usize },

    #[error("operator is not unitary (max deviation {deviation})")]
    NotUnitary { deviation: f64 },

    #[error("state is not an eigenvector of the operator (residual {residual})")]
    NotEigenvector { residual: f64 },

    #[error("expected {expected} bits, found {found}")]
    BitCount { expected: usize, found: usize },

    #[error("invalid bit value {0}")]
    InvalidBit(u8),

    #[error("invalid arity: {0}")]
    InvalidArity(String),

    #[error("dimension {base}^{exponent} exceeds the supported budget of {budget}")]
    DimensionBudget { base: usize, exponent: usize, budget: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("filter systems are not expressed in the same context")]
    ContextMismatch,

    #[error("malformed truth table {0:?}")]
    MalformedTable(String),

    #[error("one-bit function index {0} out of range 0..=3")]
    FunctionIndex(usize),

    #[error("k = {k} out of supported range {min}..={max}")]
    KOutOfRange { k: usize, min: usize, max: usize },

    #[error("unknown table {0:?}")]
    UnknownTable(String),

    #[error("unknown decision problem {0:?}")]
    UnknownProblem(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
