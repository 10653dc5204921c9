use thiserror::Error;

use crate::scheme::AxiomViolation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("rows have unequal lengths")]
    RaggedRows,

    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("Jacobi iteration did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("matrix has rank {rank} but {cols} columns")]
    RankDeficient { rank: usize, cols: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("division by the zero polynomial")]
    ZeroPolynomial,

    #[error("axiom ({}) violated: {}", .0.axiom(), .0)]
    Axiom(AxiomViolation),

    #[error("graph is disconnected: no path from {from} to {to}")]
    Disconnected { from: String, to: String },

    #[error("graph is not distance-regular: A_{i} A_{j} is not constant on relation {k}")]
    NotDistanceRegular { i: usize, j: usize, k: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("scheme on {v} vertices exceeds the size cap of {cap}")]
    TooLarge { v: usize, cap: usize },

    #[error("eigenspace refinement produced {found} spaces, expected {expected}")]
    Refinement { expected: usize, found: usize },

    #[error("vertex {0} appears in more than one cell")]
    OverlappingCells(String),

    #[error("cell {0} is empty")]
    EmptyCell(usize),

    #[error("vertex {0} is not covered by any cell")]
    Uncovered(String),

    #[error("unknown vertex label {0:?}")]
    UnknownVertex(String),

    #[error("partition is not equitable")]
    NotEquitable,

    #[error("mapping is not a bijection: {0}")]
    NotBijection(String),

    #[error("vertex set is empty")]
    EmptyVertexSet,

    #[error("relation index {index} out of range (scheme has {classes} classes)")]
    RelationOutOfRange { index: usize, classes: usize },

    #[error("invalid size range {lo}..{hi} for {v} vertices")]
    InvalidSizeRange { lo: usize, hi: usize, v: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
