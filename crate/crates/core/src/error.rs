use std::path::PathBuf;

use crate::linalg::SolverReport;

/// Errors raised anywhere in the discretisation pipeline.
#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("structured mesh needs n >= 3 to avoid duplicate periodic entities (got n = {0})")]
    MeshTooSmall(usize),

    #[error("cannot read mesh file {path}: {message}")]
    Io { path: PathBuf, message: String },

    #[error("unparseable MSH file at line {line}: {message}")]
    MshParse { line: usize, message: String },

    #[error("non-triangle element (gmsh type {element_type}) with id {id}")]
    NonTriangleElement { id: usize, element_type: usize },

    #[error("unmatched boundary vertex {id} at ({x}, {y}): no periodic partner within {tol}")]
    UnmatchedBoundaryVertex { id: usize, x: f64, y: f64, tol: f64 },

    #[error("invalid mesh topology: {0}")]
    Topology(String),

    #[error("degenerate cell {cell}: det J = {det}")]
    DegenerateCell { cell: usize, det: f64 },

    #[error("unsupported quadrature exactness degree {requested} (supported 1..={max})")]
    UnsupportedQuadrature { requested: usize, max: usize },

    #[error("unknown element family {0:?} (expected rt0, bdm1, bdfm1 or bdm2)")]
    UnknownFamily(String),

    #[error("conjugate gradient did not converge: {0}")]
    NotConverged(SolverReport),

    #[error("singular block {block} in block-diagonal solve")]
    SingularBlock { block: usize },

    #[error(
        "operator is not block diagonal: entry ({row}, {col}) lies outside block size {block_size}"
    )]
    NotBlockDiagonal {
        row: usize,
        col: usize,
        block_size: usize,
    },

    #[error("layer depth {value} <= {threshold} at a quadrature point of cell {cell}")]
    NonPositiveDepth {
        cell: usize,
        value: f64,
        threshold: f64,
    },

    #[error("space mismatch: {0}")]
    SpaceMismatch(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error(
        "energy blow-up at step {step}: |E| = {energy:e} exceeds {factor:e} x E0 = {initial:e}"
    )]
    BlowUp {
        step: usize,
        energy: f64,
        initial: f64,
        factor: f64,
    },

    #[error("step {step} failed: {source}")]
    StepFailed { step: usize, source: Box<Error> },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
