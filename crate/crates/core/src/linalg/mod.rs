//! Sparse storage and the solvers used on mass matrices.

mod block;
mod cg;
mod sparse;

pub use block::{block_diag_solve, BlockDiagonalSolver};
pub use cg::{cg_solve, cg_solve_from, default_maxit, CgOptions, SolverReport, DEFAULT_TOL};
pub use sparse::{CellScatter, CsrMatrix, Duplicates};

/// Row-compressed operator type used throughout the crate.
pub type SparseOperator = CsrMatrix;
