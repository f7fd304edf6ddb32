//! Structure of thin-domain eigenfunctions at the bottom boundary.
//!
//! For the `k`-th eigenfunction `u` on the thin domain, with bottom trace
//! `psi(x) = u(x, 0)` and `eta = (log f)' psi'`, the transverse second
//! derivative at `y = 0` should approach `eta` as `eps -> 0`, and `u` should
//! approach the model `U = psi + y^2 eta / 2`.

use alloc::vec::Vec;

use crate::assembly::assemble_thin_2d;
use crate::eigen::{solve_smallest, Normalization, SolveOptions};
use crate::math;
use crate::mesh::{build_mapped_grid, IntervalDomain, ThinDomainSpec};
use crate::weight::{Profile, WeightSpec};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualRow {
    pub epsilon: f64,
    pub k: usize,
    pub eigenvalue: f64,
    /// Base nodes `x_i`.
    pub x: Vec<f64>,
    /// Bottom trace of the eigenfunction.
    pub psi: Vec<f64>,
    /// `(log f)' psi'` at the base nodes.
    pub eta: Vec<f64>,
    /// Transverse second derivative at `y = 0`.
    pub d2y: Vec<f64>,
    /// `max` over interior base nodes of `|d2y - eta|`.
    pub sup_residual: f64,
    /// `|u - alpha U|_M / |u|_M` with `alpha` the `M`-projection coefficient.
    pub l2_model_distance: f64,
    /// Model `U` at every grid node (grid ordering).
    pub model: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub rows: Vec<ResidualRow>,
}

impl ResidualReport {
    /// Both the residual and the model distance decrease strictly along the
    /// `eps` list.
    pub fn strictly_decreasing(&self) -> (bool, bool) {
        let dec = |f: fn(&ResidualRow) -> f64| self.rows.windows(2).all(|w| f(&w[1]) < f(&w[0]));
        (dec(|r| r.sup_residual), dec(|r| r.l2_model_distance))
    }
}

/// Residual of the bottom-boundary relation for eigenfunction `k` at each
/// `eps`. Eigenvectors are scaled to `u^T M u = eps` with their largest
/// entry positive.
pub fn eigenfunction_residual(
    base: IntervalDomain,
    w: &WeightSpec,
    eps_list: &[f64],
    nx: usize,
    nt: usize,
    k: usize,
    opts: &SolveOptions,
) -> Result<ResidualReport> {
    if nt < 3 {
        return Err(Error::InvalidCount {
            what: "transverse element count",
            value: nt,
            min: 3,
        });
    }
    let mut rows = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        let spec = ThinDomainSpec::new(base, w.clone(), eps)?;
        let grid = build_mapped_grid(spec, nx, nt)?;
        let pencil = assemble_thin_2d(&grid)?;
        let scaled = SolveOptions {
            normalization: Normalization::Mass(eps),
            ..*opts
        };
        let spectrum = solve_smallest(&pencil, k + 1, &scaled)?.require_converged()?;
        let u = &spectrum.eigenvectors[k];

        let xs = grid.x_nodes().to_vec();
        let ts = grid.t_nodes();
        let dt = ts[1] - ts[0];
        let psi: Vec<f64> = (0..=nx).map(|i| u[grid.index(i, 0)]).collect();
        let dpsi: Vec<f64> = (0..=nx)
            .map(|i| {
                let (l, r) = if i == 0 {
                    (0, 1)
                } else if i == nx {
                    (nx - 1, nx)
                } else {
                    (i - 1, i + 1)
                };
                (psi[r] - psi[l]) / (xs[r] - xs[l])
            })
            .collect();
        let mut eta = Vec::with_capacity(nx + 1);
        let mut d2y = Vec::with_capacity(nx + 1);
        let mut heights = Vec::with_capacity(nx + 1);
        for i in 0..=nx {
            let h = eps * grid.height_at(i);
            heights.push(h);
            // Ends may have zero height (degenerate profiles); the value is
            // only used at interior nodes.
            let g = if h > 0.0 { w.log_derivative(xs[i])? } else { 0.0 };
            eta.push(g * dpsi[i]);
            let second = u[grid.index(i, 0)] - 2.0 * u[grid.index(i, 1)] + u[grid.index(i, 2)];
            d2y.push(if h > 0.0 { second / (dt * dt * h * h) } else { 0.0 });
        }
        let sup_residual = (1..nx).map(|i| (d2y[i] - eta[i]).abs()).fold(0.0, f64::max);

        let mut model = alloc::vec![0.0; grid.node_count()];
        for i in 0..=nx {
            for (j, &t) in ts.iter().enumerate() {
                let y = heights[i] * t;
                model[grid.index(i, j)] = psi[i] + 0.5 * y * y * eta[i];
            }
        }
        let m = pencil.mass();
        let mm = m.bilinear(&model, &model);
        let alpha = if mm > 0.0 { m.bilinear(u, &model) / mm } else { 0.0 };
        let diff: Vec<f64> = u.iter().zip(&model).map(|(a, b)| a - alpha * b).collect();
        let l2_model_distance = math::sqrt(m.bilinear(&diff, &diff) / m.bilinear(u, u));

        rows.push(ResidualRow {
            epsilon: eps,
            k,
            eigenvalue: spectrum.eigenvalues[k],
            x: xs,
            psi,
            eta,
            d2y,
            sup_residual,
            l2_model_distance,
            model,
        });
    }
    Ok(ResidualReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_weight_has_no_residual() {
        let r = eigenfunction_residual(
            IntervalDomain::unit(),
            &WeightSpec::flat(),
            &[0.1],
            60,
            4,
            1,
            &SolveOptions::default(),
        )
        .unwrap();
        let row = &r.rows[0];
        assert!(row.eta.iter().all(|&e| e == 0.0));
        assert!(row.sup_residual < 1e-6, "{}", row.sup_residual);
        assert!(row.l2_model_distance < 1e-6);
    }

    #[test]
    fn needs_three_layers() {
        let err = eigenfunction_residual(
            IntervalDomain::unit(),
            &WeightSpec::flat(),
            &[0.1],
            20,
            2,
            1,
            &SolveOptions::default(),
        );
        assert!(matches!(err, Err(Error::InvalidCount { min: 3, .. })));
    }
}
