use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::spectra::{dirichlet_spectrum, drift_spectrum, thin_spectrum};
use crate::assembly::BoundaryCondition;
use crate::eigen::{SolveOptions, SpectrumResult};
use crate::math;
use crate::mesh::{IntervalDomain, ThinDomainSpec};
use crate::weight::{Height, SampledSquare, WeightSpec};
use crate::{Error, Result};

/// Resolution of the thin-domain solves in a study.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StudyGrid {
    pub nx: usize,
    pub nt: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub epsilon: f64,
    pub k: usize,
    pub mu_eps: f64,
    pub mu_ref: f64,
    pub abs_err: f64,
}

/// Fitted behaviour of one eigenvalue index across the `eps` list.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderFit {
    pub k: usize,
    /// Least-squares slope of `log err` against `log eps`; `None` when some
    /// error is within ten times the reference uncertainty or at the floor.
    pub order: Option<f64>,
    /// Uncertainty of the reference value itself.
    pub reference_tol: f64,
    /// Error level explained by the base discretization alone.
    pub floor: f64,
    /// Some error is at most twice the floor.
    pub at_floor: bool,
    /// `mu_k(eps) <= mu_k + C eps^2 + floor` on the smaller `eps`, with
    /// `C >= 0` taken from the two largest.
    pub upper_bound_holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub epsilons: Vec<f64>,
    /// Row-major in `(eps, k)` with `eps` in the given order.
    pub rows: Vec<ConvergenceRow>,
    pub orders: Vec<OrderFit>,
    pub reference_note: String,
}

impl ConvergenceReport {
    pub fn row(&self, epsilon_index: usize, k: usize) -> &ConvergenceRow {
        &self.rows[epsilon_index * self.orders.len() + k]
    }

    pub fn order(&self, k: usize) -> Option<&OrderFit> {
        self.orders.iter().find(|o| o.k == k)
    }
}

/// Corollary harness output: the study itself plus the computed ground state.
#[derive(Debug, Clone, PartialEq)]
pub struct CorollaryReport {
    pub study: ConvergenceReport,
    /// `lambda_1, ..., lambda_{k_max + 1}` on the harness mesh.
    pub dirichlet: Vec<f64>,
    pub ground_state_nodes: Vec<f64>,
    pub ground_state: Vec<f64>,
    /// `max |phi_1 - sqrt(2/d) sin(pi (x - a) / d)|` over the nodes.
    pub ground_state_sup_error: f64,
    /// Smallest interior nodal value of `phi_1`; should be positive.
    pub min_interior_ground_state: f64,
}

/// Least-squares slope of `log errs` against `log eps`.
pub fn fit_order(eps: &[f64], errs: &[f64]) -> f64 {
    let n = eps.len() as f64;
    let xs: Vec<f64> = eps.iter().map(|&e| math::ln(e)).collect();
    let ys: Vec<f64> = errs.iter().map(|&e| math::ln(e)).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

struct Reference {
    value: f64,
    change: f64,
}

/// Richardson extrapolation of a second-order quantity from `n` and `2n`.
fn richardson(coarse: &[f64], fine: &[f64]) -> Vec<Reference> {
    coarse
        .iter()
        .zip(fine)
        .map(|(&c, &f)| {
            let value = f + (f - c) / 3.0;
            Reference {
                value,
                change: (value - f).abs(),
            }
        })
        .collect()
}

/// The extrapolated change must stay below a tenth of the smallest expected
/// `eps^2` signal.
fn guard(reference: &[Reference], eps_min: f64) -> Result<()> {
    for (k, r) in reference.iter().enumerate().skip(1) {
        let threshold = eps_min * eps_min * r.value.abs() / 10.0;
        if !(r.change < threshold) {
            return Err(Error::ReferenceNotConverged {
                k,
                change: r.change,
                threshold,
            });
        }
    }
    Ok(())
}

fn validate_eps(eps_list: &[f64], min_len: usize) -> Result<()> {
    if eps_list.len() < min_len {
        return Err(Error::InvalidCount {
            what: "epsilon count",
            value: eps_list.len(),
            min: min_len,
        });
    }
    for &e in eps_list {
        if !(e > 0.0 && e.is_finite()) {
            return Err(Error::InvalidEpsilon(e));
        }
    }
    if eps_list.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::InvalidArgument("epsilon list must be strictly descending"));
    }
    if eps_list.len() > 2 {
        let ratio = eps_list[1] / eps_list[0];
        if eps_list
            .windows(2)
            .any(|w| (w[1] / w[0] - ratio).abs() > 1e-9 * ratio)
        {
            return Err(Error::InvalidArgument("epsilon list must be geometric"));
        }
    }
    Ok(())
}

fn converged_values(r: SpectrumResult) -> Result<Vec<f64>> {
    Ok(r.require_converged()?.eigenvalues)
}

fn build_report(
    eps_list: &[f64],
    thin: &[Vec<f64>],
    reference: &[Reference],
    coarse_1d: &[f64],
    tol: f64,
    reference_note: String,
) -> ConvergenceReport {
    let nk = reference.len();
    let mut rows = Vec::with_capacity(eps_list.len() * nk);
    for (&epsilon, values) in eps_list.iter().zip(thin) {
        for (k, r) in reference.iter().enumerate() {
            let mu_eps = values[k];
            rows.push(ConvergenceRow {
                epsilon,
                k,
                mu_eps,
                mu_ref: r.value,
                abs_err: (mu_eps - r.value).abs(),
            });
        }
    }

    let mut orders = Vec::with_capacity(nk);
    for (k, r) in reference.iter().enumerate() {
        let scale = r.value.abs().max(1.0);
        let reference_tol = r.change + tol * scale;
        let floor = (coarse_1d[k] - r.value).abs() + 10.0 * tol * scale;
        let errs: Vec<f64> = (0..eps_list.len()).map(|i| rows[i * nk + k].abs_err).collect();
        let at_floor = errs.iter().any(|&e| e <= 2.0 * floor);
        let order = (!at_floor && errs.iter().all(|&e| e > 10.0 * reference_tol))
            .then(|| fit_order(eps_list, &errs));

        let signed: Vec<f64> = (0..eps_list.len())
            .map(|i| rows[i * nk + k].mu_eps - r.value)
            .collect();
        let c = eps_list
            .iter()
            .zip(&signed)
            .take(2)
            .map(|(e, d)| d / (e * e))
            .fold(0.0f64, f64::max);
        let upper_bound_holds = eps_list
            .iter()
            .zip(&signed)
            .skip(2)
            .all(|(e, d)| *d <= c * e * e + floor);

        orders.push(OrderFit {
            k,
            order,
            reference_tol,
            floor,
            at_floor,
            upper_bound_holds,
        });
    }

    ConvergenceReport {
        epsilons: eps_list.to_vec(),
        rows,
        orders,
        reference_note,
    }
}

/// Thin-domain eigenvalues `mu_k(eps)`, `k = 0..=k_max`, against the drift
/// eigenvalues of the weight `w` (which is also the height profile).
pub fn convergence_study(
    base: IntervalDomain,
    w: &WeightSpec,
    eps_list: &[f64],
    grid: StudyGrid,
    k_max: usize,
    ref_n: usize,
    opts: &SolveOptions,
) -> Result<ConvergenceReport> {
    validate_eps(eps_list, 4)?;
    let count = k_max + 1;
    let neumann = |n: usize| {
        drift_spectrum(base, w, BoundaryCondition::Neumann, n, count, opts).and_then(converged_values)
    };
    let reference = richardson(&neumann(ref_n)?, &neumann(2 * ref_n)?);
    guard(&reference, eps_list[eps_list.len() - 1])?;
    let coarse = neumann(grid.nx)?;

    let mut thin = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        let spec = ThinDomainSpec::new(base, w.clone(), eps)?;
        thin.push(converged_values(thin_spectrum(spec, grid.nx, grid.nt, count, opts)?)?);
    }
    let note = format!(
        "1D drift Neumann reference, Richardson extrapolation from n = {} and n = {}",
        ref_n,
        2 * ref_n
    );
    Ok(build_report(eps_list, &thin, &reference, &coarse, opts.tol, note))
}

/// Thin domains of height `eps * phi_1^2`, with `phi_1` the computed
/// Dirichlet ground state of the flat interval, compared against the gaps
/// `lambda_{k+1} - lambda_1` for `k = 0..=k_max`.
pub fn corollary1_harness(
    base: IntervalDomain,
    n: usize,
    eps_list: &[f64],
    grid: StudyGrid,
    k_max: usize,
    opts: &SolveOptions,
) -> Result<CorollaryReport> {
    validate_eps(eps_list, 1)?;
    let count = k_max + 1;
    let flat = WeightSpec::flat();
    let unit = SolveOptions {
        normalization: crate::eigen::Normalization::Unit,
        ..*opts
    };
    let fine = dirichlet_spectrum(base, &flat, n, count, &unit)?.require_converged()?;
    let finer = dirichlet_spectrum(base, &flat, 2 * n, count, &unit)?.require_converged()?;
    let gaps = |r: &SpectrumResult| -> Vec<f64> {
        r.eigenvalues[1..].iter().map(|l| l - r.eigenvalues[0]).collect::<Vec<f64>>()
    };
    let mut gap_values = vec![0.0];
    gap_values.extend(gaps(&fine));
    let mut gap_finer = vec![0.0];
    gap_finer.extend(gaps(&finer));
    let mut reference = richardson(&gap_values, &gap_finer);
    reference[0] = Reference {
        value: 0.0,
        change: 0.0,
    };
    guard(&reference, eps_list[eps_list.len() - 1])?;

    // Ground state with its boundary zeros restored.
    let nodes = base.uniform_points(n);
    let mut phi1 = vec![0.0; n + 1];
    phi1[1..n].copy_from_slice(&fine.eigenvectors[0]);
    let d = base.diameter();
    let amp = math::sqrt(2.0 / d);
    let ground_state_sup_error = nodes
        .iter()
        .zip(&phi1)
        .map(|(&x, &v)| (v - amp * math::sin(math::PI * (x - base.a()) / d)).abs())
        .fold(0.0, f64::max);
    let min_interior_ground_state = phi1[1..n].iter().copied().fold(f64::INFINITY, f64::min);
    let height = SampledSquare::new(nodes.clone(), phi1.clone())?;

    let coarse = drift_spectrum(base, &height, BoundaryCondition::Neumann, grid.nx, k_max + 1, opts)
        .and_then(converged_values)?;
    let mut thin = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        let spec = ThinDomainSpec::new(base, Height::Sampled(height.clone()), eps)?;
        thin.push(converged_values(thin_spectrum(spec, grid.nx, grid.nt, k_max + 1, opts)?)?);
    }
    let note = format!(
        "Dirichlet gaps of the flat interval, Richardson extrapolation from n = {} and n = {}",
        n,
        2 * n
    );
    let study = build_report(eps_list, &thin, &reference, &coarse, opts.tol, note);
    Ok(CorollaryReport {
        study,
        dirichlet: fine.eigenvalues,
        ground_state_nodes: nodes,
        ground_state: phi1,
        ground_state_sup_error,
        min_interior_ground_state,
    })
}
