use alloc::string::String;

/// Errors raised by the geometric kernels and the oracles.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("configuration is not full-dimensional (dimension {dim}, ambient {ambient})")]
    ConfigDegenerate { dim: usize, ambient: usize },
    #[error("point {0} is not part of the configuration")]
    NotInConfiguration(String),
    #[error("heights are not generic enough to induce a triangulation")]
    DegenerateHeights,
    #[error("no fine mixed refinement found after {0} attempts")]
    RetriesExhausted(usize),
    #[error("two fiber points agree under primary and tiebreak covector")]
    TieUnresolved,
    #[error("reference oracle produced a non-integral point")]
    NonIntegralResult,
    #[error("invalid projection split: n = {n}, k = {k}")]
    InvalidSplit { n: usize, k: usize },
    #[error("oracle answer violates a confirmed facet")]
    OracleInconsistent,
    #[error("linear program is unbounded")]
    Unbounded,
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
