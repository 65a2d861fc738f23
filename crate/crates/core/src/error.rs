use thiserror::Error;

use crate::linalg::EigenError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("Laplacian shift requested on a directed graph")]
    LaplacianOnDirected,
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("shift is not diagonalizable (sigma_min/sigma_max of V = {inv_cond:.3e}, residual = {residual:.3e})")]
    NonDiagonalizable { inv_cond: f64, residual: f64 },
    #[error("eigensolver failed: {0}")]
    Eigen(#[from] EigenError),
    #[error("active eigenvalue {active} collides with inactive eigenvalue {inactive}")]
    ConditionViolation { active: usize, inactive: usize },
    #[error("kernel dimension {found} differs from expected {expected}; singular values {singular_values:?}")]
    KernelDimension { expected: usize, found: usize, singular_values: Vec<f64> },
    #[error("seeding system has rank {rank} < {required}; singular values {singular_values:?}")]
    RankDeficient { rank: usize, required: usize, singular_values: Vec<f64> },
    #[error("node {node} cannot express active frequencies {frequencies:?}")]
    NodeCannotExpress { node: usize, frequencies: Vec<usize> },
    #[error("{repeats} repeated eigenvalue(s) among the active frequencies")]
    DegenerateSpectrum { repeats: usize },
    #[error("split system is inconsistent; frequencies {frequencies:?} cannot be zeroed")]
    Infeasible { frequencies: Vec<usize> },
    #[error("budget P = {p} is smaller than the bandwidth K = {k}")]
    BudgetTooSmall { p: usize, k: usize },
    #[error("search space of {candidates} candidates exceeds the limit of {limit}")]
    SearchTooLarge { candidates: u128, limit: u128 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
