use crate::assembly::{assemble_drift_1d, assemble_thin_2d, BoundaryCondition};
use crate::eigen::{solve_smallest, SolveOptions, SpectrumResult};
use crate::expr::{BinOp, Expr};
use crate::mesh::{build_interval_mesh, build_mapped_grid, IntervalDomain, ThinDomainSpec};
use crate::weight::{Profile, WeightMode, WeightSpec};
use crate::Result;

/// Smallest `k` drift eigenvalues on `n` elements. Neumann spectra start at
/// `mu_0 = 0`, Dirichlet spectra at `lambda_1`.
pub fn drift_spectrum(
    domain: IntervalDomain,
    weight: &dyn Profile,
    bc: BoundaryCondition,
    n: usize,
    k: usize,
    opts: &SolveOptions,
) -> Result<SpectrumResult> {
    let mesh = build_interval_mesh(domain, n)?;
    let pencil = assemble_drift_1d(&mesh, weight, bc)?;
    solve_smallest(&pencil, k, opts)
}

/// Dirichlet eigenvalues `lambda_1, ..., lambda_k` of the weighted interval.
pub fn dirichlet_spectrum(
    domain: IntervalDomain,
    weight: &dyn Profile,
    n: usize,
    k: usize,
    opts: &SolveOptions,
) -> Result<SpectrumResult> {
    drift_spectrum(domain, weight, BoundaryCondition::Dirichlet, n, k, opts)
}

/// Smallest `k` Neumann eigenvalues of the thin domain on an `nx x nt` grid.
pub fn thin_spectrum(
    spec: ThinDomainSpec,
    nx: usize,
    nt: usize,
    k: usize,
    opts: &SolveOptions,
) -> Result<SpectrumResult> {
    let grid = build_mapped_grid(spec, nx, nt)?;
    let pencil = assemble_thin_2d(&grid)?;
    solve_smallest(&pencil, k, opts)
}

/// The weight `f^2`, kept in the mode `w` was given in.
pub fn squared_weight(w: &WeightSpec) -> WeightSpec {
    match w.mode() {
        WeightMode::PhiGiven => WeightSpec::from_phi(Expr::binary(
            BinOp::Mul,
            Expr::constant(2.0),
            w.phi_expr().clone(),
        )),
        WeightMode::FGiven => WeightSpec::from_f(Expr::pow(w.f_expr().clone(), 2.0)),
    }
}
