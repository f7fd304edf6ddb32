use alloc::vec::Vec;

use super::{finish, SolveOptions, SolverPath, SpectrumResult};
use crate::assembly::OperatorPencil;
use crate::linalg::generalized_eigen;
use crate::{Error, Result};

/// Smallest `k` eigenpairs by full dense reduction.
pub fn solve_dense(p: &OperatorPencil, k: usize, opts: &SolveOptions) -> Result<SpectrumResult> {
    let n = p.dof_count();
    if n > opts.dense_cap {
        return Err(Error::DenseCapExceeded {
            dofs: n,
            cap: opts.dense_cap,
        });
    }
    if k > n {
        return Err(Error::InvalidArgument("more eigenpairs requested than degrees of freedom"));
    }
    let eig = generalized_eigen(&p.stiffness().to_dense(), &p.mass().to_dense())?;
    let values = eig.values[..k].to_vec();
    let vectors: Vec<Vec<f64>> = (0..k).map(|j| eig.vectors.column(j)).collect();
    Ok(finish(p, values, vectors, SolverPath::Dense, eig.sweeps, opts))
}
