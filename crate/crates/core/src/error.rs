use thiserror::Error;

use crate::lattice::CoordinateIdeal;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("negative entry {value} at ({row}, {col})")]
    NegativeEntry { row: usize, col: usize, value: f64 },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("eigensolver did not converge after {iterations} iterations")]
    EigenNoConvergence { iterations: usize },

    #[error("quasinilpotent: no peripheral splitting")]
    Quasinilpotent,

    #[error("peripheral set not numerically separated (gap {gap:e} relative to radius {radius:e})")]
    NotSeparated { radius: f64, gap: f64 },

    #[error("return horizon exceeded: best m = {best_m}, residual {best_residual:e}")]
    ReturnHorizonExceeded { best_m: usize, best_residual: f64 },

    #[error("period undefined for reducible matrix (invariant ideal {witness})")]
    Reducible { witness: CoordinateIdeal },

    #[error("ball explosion: {elements} rays after length {length}")]
    BallExplosion { elements: usize, length: usize },

    #[error("no non-nilpotent minimal-rank element found in the ball; increase L")]
    NoProjection,

    #[error("flanking search failed; increase L")]
    FlankingFailed,

    #[error("range not numerically a lattice: {0}")]
    RangeNotLattice(String),

    #[error("no global permutation structure: minimal projections have distinct ranges")]
    DistinctRanges,

    #[error("not a weighted permutation: {0}")]
    NotWeightedPermutation(String),

    #[error("disjointness violated between blocks {0} and {1}")]
    DisjointnessViolated(usize, usize),

    #[error("operators do not commute (||SK - KS|| = {0:e})")]
    NotCommuting(f64),

    #[error("neither operator is ideal irreducible")]
    BothReducible,

    #[error("invalid vector: {0}")]
    InvalidVector(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// True for failures that a larger word length or horizon could resolve.
    pub fn is_inconclusive(&self) -> bool {
        matches!(
            self,
            Error::ReturnHorizonExceeded { .. } | Error::NoProjection | Error::FlankingFailed
        )
    }
}
