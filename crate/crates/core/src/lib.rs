//! Eigenvalues of drift (Bakry-Émery) Laplacians on weighted intervals and
//! Neumann eigenvalues of thin domains collapsing onto them.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, configuration
//! and the command-line runner live in the `drift-spectra` companion crate.
//!
//! Layout, bottom to top:
//!
//! * [`expr`]: weight expressions (parse, evaluate, differentiate).
//! * [`weight`]: height/weight profiles built from expressions or samples.
//! * [`mesh`]: interval meshes and the mapped tensor grid of a thin domain.
//! * [`linalg`]: the small sparse and dense kernels the solvers need.
//! * [`assembly`]: stiffness/mass pencils for the three model problems.
//! * [`eigen`]: dense (Cholesky + Jacobi) and block iterative eigensolvers.
//! * [`experiments`]: convergence studies, gap checks and residual reports.
#![no_std]
// Negated comparisons are how NaN inputs get rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod assembly;
pub mod eigen;
mod error;
pub mod experiments;
pub mod expr;
pub mod linalg;
pub(crate) mod math;
pub mod mesh;
pub mod weight;

pub use assembly::{
    assemble_dirichlet_1d, assemble_drift_1d, assemble_thin_2d, BoundaryCondition, OperatorPencil,
    ProblemKind,
};
pub use eigen::{
    solve_dense, solve_iterative, solve_smallest, Normalization, SolveOptions, SolverKind,
    SolverPath, SpectrumResult,
};
pub use error::{Error, Result};
pub use expr::{parse_expr, EvalError, Expr, ParseError};
pub use mesh::{
    build_interval_mesh, build_mapped_grid, BoundaryTag, IntervalDomain, IntervalMesh, MappedGrid,
    ThinDomainSpec,
};
pub use weight::{Height, Profile, SampledSquare, WeightMode, WeightSpec};
