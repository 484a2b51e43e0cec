//! Mixed finite element solver for the rotating shallow-water equations on
//! doubly-periodic triangular meshes.

pub mod error;
pub mod experiments;
pub mod fem;
pub mod linalg;
pub mod mesh;
pub mod swe;
pub mod timeint;

pub use error::{Error, Result};
pub use fem::{
    l2_project, make_triple, ElementFamily, ElementKind, Field, FunctionSpace, Source, Triple,
};
pub use linalg::{CsrMatrix, SolverReport, SparseOperator};
pub use mesh::{read_msh, structured_mesh, write_msh, Mesh};
pub use swe::{Params, Scheme, State, Tendency};
pub use timeint::{rk4_step, run, RunRecord, Sample};
