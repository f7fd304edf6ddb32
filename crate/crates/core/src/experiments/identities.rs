use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::spectra::{dirichlet_spectrum, drift_spectrum};
use crate::assembly::{BoundaryCondition, OperatorPencil};
use crate::eigen::{solve_smallest, SolveOptions};
use crate::expr::{BinOp, Expr, Func};
use crate::linalg::CsrMatrix;
use crate::math;
use crate::mesh::IntervalDomain;
use crate::weight::WeightSpec;
use crate::Result;

/// Default relative tolerance of the Dirichlet-gap identity.
pub const PROP2_TOLERANCE: f64 = 5e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prop2Row {
    pub k: usize,
    /// `lambda_k - lambda_1` of the flat Dirichlet problem.
    pub lambda_gap: f64,
    /// `mu_{k-1}` of the drift problem with measure `phi_1^2 dx`.
    pub drift_mu: f64,
    /// `|lambda_gap - drift_mu| / max(lambda_gap, 1)`.
    pub mismatch: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prop2Report {
    pub rows: Vec<Prop2Row>,
    pub dirichlet: Vec<f64>,
    pub tolerance: f64,
}

impl Prop2Report {
    pub fn holds(&self) -> bool {
        self.rows.iter().all(|r| r.mismatch <= self.tolerance)
    }
}

/// The analytic ground state `sin(pi (x - a) / d)` of the flat interval,
/// squared, as an f-given weight.
fn ground_state_square(domain: IntervalDomain) -> WeightSpec {
    let d = domain.diameter();
    let shifted = if domain.a() == 0.0 {
        Expr::X
    } else {
        Expr::binary(BinOp::Sub, Expr::X, Expr::constant(domain.a()))
    };
    let arg = Expr::binary(
        BinOp::Div,
        Expr::binary(BinOp::Mul, Expr::Pi, shifted),
        Expr::constant(d),
    );
    WeightSpec::from_f(Expr::pow(Expr::func(Func::Sin, arg), 2.0))
}

/// Dirichlet gaps `lambda_k - lambda_1` against drift Neumann eigenvalues
/// `mu_{k-1}` for the measure `phi_1^2 dx`, `k = 1..=k_max`.
pub fn prop2_check(domain: IntervalDomain, n: usize, k_max: usize, opts: &SolveOptions) -> Result<Prop2Report> {
    let flat = WeightSpec::flat();
    let dir = dirichlet_spectrum(domain, &flat, n, k_max, opts)?.require_converged()?;
    let weight = ground_state_square(domain);
    let drift = drift_spectrum(domain, &weight, BoundaryCondition::Neumann, n, k_max, opts)?
        .require_converged()?;
    let rows = (1..=k_max)
        .map(|k| {
            let lambda_gap = dir.eigenvalues[k - 1] - dir.eigenvalues[0];
            let drift_mu = drift.eigenvalues[k - 1];
            Prop2Row {
                k,
                lambda_gap,
                drift_mu,
                mismatch: (lambda_gap - drift_mu).abs() / lambda_gap.abs().max(1.0),
            }
        })
        .collect();
    Ok(Prop2Report {
        rows,
        dirichlet: dir.eigenvalues,
        tolerance: PROP2_TOLERANCE,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prop4Report {
    pub k: usize,
    pub trials: usize,
    /// `sum_{j <= k} mu_j`.
    pub eigen_sum: f64,
    /// Smallest `sum_j R(xi_j) - sum_j mu_j` over the random trial sets,
    /// relative to `max(sum_j mu_j, 1)`.
    pub min_relative_slack: f64,
    pub violations: usize,
    /// Relative `|sum_j R(v_j) - sum_j mu_j|` for the eigenvectors themselves.
    pub eigenvector_defect: f64,
}

impl Prop4Report {
    pub fn holds(&self, equality_tol: f64) -> bool {
        self.violations == 0 && self.eigenvector_defect <= equality_tol
    }
}

fn rayleigh_sum(p: &OperatorPencil, set: &[Vec<f64>]) -> f64 {
    set.iter()
        .map(|v| p.stiffness().bilinear(v, v) / p.mass().bilinear(v, v))
        .sum()
}

/// Modified Gram-Schmidt in the `M` inner product, repeated once.
fn m_orthogonalize(m: &CsrMatrix, set: &mut [Vec<f64>]) {
    for _ in 0..2 {
        for i in 0..set.len() {
            let (done, rest) = set.split_at_mut(i);
            let v = &mut rest[0];
            for u in done.iter() {
                let c = m.bilinear(u, v) / m.bilinear(u, u);
                for (a, b) in v.iter_mut().zip(u) {
                    *a -= c * b;
                }
            }
            let norm = math::sqrt(m.bilinear(v, v));
            for a in v.iter_mut() {
                *a /= norm;
            }
        }
    }
}

/// Partial-sum inequality `sum_{j<=k} mu_j <= sum_{j<=k} R(xi_j)` for
/// `M`-orthogonal trial sets `xi_0..xi_k`, with `R` the weighted Rayleigh
/// quotient. Half of the sets are uniform noise, half are eigenvectors
/// with a small random perturbation (so the inequality is tested near
/// equality too).
pub fn prop4_check(
    p: &OperatorPencil,
    k: usize,
    trials: usize,
    seed: u64,
    opts: &SolveOptions,
) -> Result<Prop4Report> {
    let n = p.dof_count();
    let spectrum = solve_smallest(p, k + 1, opts)?.require_converged()?;
    let eigen_sum: f64 = spectrum.eigenvalues.iter().sum();
    let scale = eigen_sum.abs().max(1.0);
    let eigenvector_defect = (rayleigh_sum(p, &spectrum.eigenvectors) - eigen_sum).abs() / scale;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_relative_slack = f64::INFINITY;
    let mut violations = 0;
    for t in 0..trials {
        let mut set: Vec<Vec<f64>> = if t % 2 == 0 {
            (0..=k)
                .map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect())
                .collect()
        } else {
            let size = math::powf(10.0, -f64::from(rng.gen_range(1..6u8)));
            spectrum
                .eigenvectors
                .iter()
                .map(|v| v.iter().map(|x| x + size * rng.gen_range(-1.0..1.0)).collect())
                .collect()
        };
        m_orthogonalize(p.mass(), &mut set);
        let slack = (rayleigh_sum(p, &set) - eigen_sum) / scale;
        min_relative_slack = min_relative_slack.min(slack);
        if slack < -1e-10 {
            violations += 1;
        }
    }
    Ok(Prop4Report {
        k,
        trials,
        eigen_sum,
        min_relative_slack,
        violations,
        eigenvector_defect,
    })
}
