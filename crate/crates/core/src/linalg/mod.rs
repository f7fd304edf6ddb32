//! Minimal sparse and dense kernels for symmetric pencils.

mod banded;
mod dense;
mod sparse;

pub use banded::BandCholesky;
pub use dense::{
    cholesky_in_place, generalized_eigen, jacobi_eigen, DenseMatrix, SymmetricEigen,
    JACOBI_MAX_SWEEPS,
};
pub(crate) use sparse::dd_add_product;
pub use sparse::{CsrMatrix, TripletBuilder};
