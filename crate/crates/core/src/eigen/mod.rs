//! Smallest eigenpairs of symmetric pencils `K v = mu M v`.
//!
//! Two independent routes: a dense reduction (Cholesky of `M`, cyclic Jacobi
//! on `L^-1 K L^-T`) that serves as the oracle, and a locally optimal block
//! preconditioned iteration for pencils too large to densify.

mod block;
mod dense;
mod lobpcg;

use alloc::vec::Vec;

use crate::assembly::OperatorPencil;
use crate::linalg::CsrMatrix;
use crate::math;
use crate::{Error, Result};

pub use dense::solve_dense;
pub use lobpcg::solve_iterative;

/// Largest pencil the dispatcher sends to the dense path by default.
pub const DEFAULT_DENSE_CAP: usize = 600;
pub const DEFAULT_MAX_ITERATIONS: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolverKind {
    Auto,
    Dense,
    Iterative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolverPath {
    Dense,
    Iterative,
}

impl SolverPath {
    pub fn as_str(self) -> &'static str {
        match self {
            SolverPath::Dense => "dense",
            SolverPath::Iterative => "iterative",
        }
    }
}

/// Eigenvector scaling: `v^T M v = 1`, or `v^T M v = c` (with `c = eps`
/// this is the volume-`eps` convention for thin domains).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Normalization {
    Unit,
    Mass(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub solver: SolverKind,
    pub tol: f64,
    pub seed: u64,
    pub dense_cap: usize,
    pub max_iterations: usize,
    pub normalization: Normalization,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            solver: SolverKind::Auto,
            tol: 1e-8,
            seed: 42,
            dense_cap: DEFAULT_DENSE_CAP,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            normalization: Normalization::Unit,
        }
    }
}

/// Ascending eigenvalues with `M`-orthonormal eigenvectors.
///
/// Residuals are relative backward errors
/// `|K v - mu M v| / ((|K| + |mu| |M|) |v|)` with infinity norms for the
/// matrices and Euclidean norms for vectors, so that the zero Neumann mode
/// has a meaningful residual.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
    pub path: SolverPath,
    pub iterations: usize,
    pub converged: bool,
}

impl SpectrumResult {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    /// Error out unless every requested pair met the tolerance.
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NotConverged {
                iterations: self.iterations,
                residual: self.max_residual(),
            })
        }
    }

    /// Index ranges of eigenvalues closer than `1e-8 * max |mu|` to their
    /// neighbour. Inside a cluster only the sorted values are meaningful.
    pub fn clusters(&self) -> Vec<(usize, usize)> {
        let scale = self
            .eigenvalues
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()));
        let gap = 1e-8 * scale;
        let mut out = Vec::new();
        let mut start = 0;
        for i in 1..=self.eigenvalues.len() {
            let split = i == self.eigenvalues.len()
                || self.eigenvalues[i] - self.eigenvalues[i - 1] >= gap;
            if split {
                if i - start > 1 {
                    out.push((start, i));
                }
                start = i;
            }
        }
        out
    }
}

/// Dense when the pencil is small (or the caller forces it), iterative
/// otherwise. The chosen route is recorded in [`SpectrumResult::path`].
pub fn solve_smallest(p: &OperatorPencil, k: usize, opts: &SolveOptions) -> Result<SpectrumResult> {
    let dense = match opts.solver {
        SolverKind::Dense => true,
        SolverKind::Iterative => false,
        SolverKind::Auto => p.dof_count() <= opts.dense_cap,
    };
    if dense {
        solve_dense(p, k, opts)
    } else {
        solve_iterative(p, k, opts)
    }
}

fn norm2(v: &[f64]) -> f64 {
    math::sqrt(v.iter().map(|x| x * x).sum())
}

pub(crate) fn backward_error(k: &CsrMatrix, m: &CsrMatrix, norms: (f64, f64), mu: f64, v: &[f64]) -> f64 {
    let kv = k.mul_vec(v);
    let mv = m.mul_vec(v);
    let r: Vec<f64> = kv.iter().zip(&mv).map(|(a, b)| a - mu * b).collect();
    let denom = (norms.0 + mu.abs() * norms.1) * norm2(v);
    if denom == 0.0 {
        return norm2(&r);
    }
    norm2(&r) / denom
}

/// Scale to the requested `M`-norm and make the entry of largest magnitude
/// positive (the first one on ties).
pub(crate) fn normalize(m: &CsrMatrix, v: &mut [f64], normalization: Normalization) {
    let target = match normalization {
        Normalization::Unit => 1.0,
        Normalization::Mass(c) => c,
    };
    let current = m.bilinear(v, v);
    let mut scale = if current > 0.0 { math::sqrt(target / current) } else { 1.0 };
    let mut best = 0.0f64;
    let mut sign = 1.0;
    for &x in v.iter() {
        if x.abs() > best {
            best = x.abs();
            sign = if x < 0.0 { -1.0 } else { 1.0 };
        }
    }
    scale *= sign;
    for x in v.iter_mut() {
        *x *= scale;
    }
}

/// Normalize vectors, compute residuals and package a result.
pub(crate) fn finish(
    p: &OperatorPencil,
    mut values: Vec<f64>,
    mut vectors: Vec<Vec<f64>>,
    path: SolverPath,
    iterations: usize,
    opts: &SolveOptions,
) -> SpectrumResult {
    let k = p.stiffness();
    let m = p.mass();
    let norms = (k.norm_inf(), m.norm_inf());
    let mut residuals = Vec::with_capacity(values.len());
    for (v, mu) in vectors.iter_mut().zip(values.iter_mut()) {
        normalize(m, v, opts.normalization);
        // The Rayleigh quotient is second-order accurate in the vector, so
        // evaluating it in extended precision removes the rounding floor of
        // plain matrix-vector products on fine meshes.
        let vmv = m.bilinear_compensated(v, v);
        if vmv > 0.0 {
            *mu = p.stiffness_form(v) / vmv;
        }
        residuals.push(backward_error(k, m, norms, *mu, v));
    }
    let converged = residuals.iter().all(|&r| r <= opts.tol);
    SpectrumResult {
        eigenvalues: values,
        eigenvectors: vectors,
        residuals,
        path,
        iterations,
        converged,
    }
}
