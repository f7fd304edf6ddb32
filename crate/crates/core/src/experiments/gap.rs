//! Pairwise modulus condition on `(log f)'` and the lower bound
//! `mu_1 >= 3 pi^2 / d^2` for the drift problem with measure `f^2 dx`.
//!
//! Two readings of the condition are supported. With `g = (log f)'`:
//!
//! * `Literal`: `(g(y) - g(x)) sign(y - x) >= (4 pi / d) tan(pi |y - x| / d)`.
//! * `ModelConsistent`: the same statement for `log f^2`, with the opposite
//!   inequality and half argument,
//!   `2 (g(y) - g(x)) sign(y - x) <= -(4 pi / d) tan(pi |y - x| / (2 d))`.
//!   For `f = sin(pi x)` on the unit interval this holds with equality on
//!   every pair with `x + y = 1`.
//!
//! Margins are oriented so that `margin >= 0` means the pair satisfies the
//! condition.

use alloc::vec::Vec;

use super::spectra::{drift_spectrum, squared_weight};
use crate::assembly::BoundaryCondition;
use crate::eigen::SolveOptions;
use crate::math::{self, PI};
use crate::mesh::IntervalDomain;
use crate::weight::{Profile, WeightSpec};
use crate::{Error, Result};

/// Pairs closer than this to a pole of the tangent are skipped.
const POLE_GUARD: f64 = 1e-6;
/// Relative slack for declaring a pair satisfied or an equality.
pub const MARGIN_TOL: f64 = 1e-9;
/// Absolute slack on the eigenvalue bound.
pub const BOUND_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GapConvention {
    Literal,
    ModelConsistent,
}

impl GapConvention {
    pub fn as_str(self) -> &'static str {
        match self {
            GapConvention::Literal => "literal",
            GapConvention::ModelConsistent => "model-consistent",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapPair {
    pub x: f64,
    pub y: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapReport {
    pub convention: GapConvention,
    pub diameter: f64,
    pub pairs: Vec<GapPair>,
    pub skipped_pairs: usize,
    pub min_margin: f64,
    /// Largest `|margin|` over pairs symmetric about the midpoint.
    pub symmetric_max_abs_margin: f64,
    pub condition_satisfied: bool,
    pub mu1: f64,
    /// `3 pi^2 / d^2`.
    pub bound: f64,
    pub bound_holds: bool,
}

impl GapReport {
    /// A check failure: the condition fails, or it holds but the bound
    /// it implies does not.
    pub fn verdict_ok(&self) -> bool {
        self.condition_satisfied && self.bound_holds
    }
}

fn evaluate(convention: GapConvention, d: f64, gx: f64, gy: f64, x: f64, y: f64) -> Option<(f64, f64, f64)> {
    let dist = (y - x).abs();
    let sign = if y > x { 1.0 } else { -1.0 };
    match convention {
        GapConvention::Literal => {
            let arg = PI * dist / d;
            if (arg - PI / 2.0).abs() < POLE_GUARD {
                return None;
            }
            let lhs = (gy - gx) * sign;
            let rhs = 4.0 * PI / d * math::tan(arg);
            Some((lhs, rhs, lhs - rhs))
        }
        GapConvention::ModelConsistent => {
            let arg = PI * dist / (2.0 * d);
            if (arg - PI / 2.0).abs() < POLE_GUARD {
                return None;
            }
            let lhs = 2.0 * (gy - gx) * sign;
            let rhs = -4.0 * PI / d * math::tan(arg);
            Some((lhs, rhs, rhs - lhs))
        }
    }
}

/// Evaluate the modulus condition on the cell-centred grid
/// `x_i = a + (i + 1/2) d / n_pairs` (all ordered pairs `i != j`), then
/// solve the drift problem with measure `f^2 dx` on `n` elements.
pub fn gap_check(
    domain: IntervalDomain,
    f: &WeightSpec,
    n_pairs: usize,
    n: usize,
    convention: GapConvention,
    opts: &SolveOptions,
) -> Result<GapReport> {
    if n_pairs < 2 {
        return Err(Error::InvalidCount {
            what: "pair grid size",
            value: n_pairs,
            min: 2,
        });
    }
    let d = domain.diameter();
    let xs: Vec<f64> = (0..n_pairs)
        .map(|i| domain.a() + (i as f64 + 0.5) * d / n_pairs as f64)
        .collect();
    let mut gs = Vec::with_capacity(n_pairs);
    for &x in &xs {
        f.positive_value(x)?;
        gs.push(f.log_derivative(x)?);
    }

    let mid2 = domain.a() + domain.b();
    let mut pairs = Vec::new();
    let mut skipped_pairs = 0;
    let mut min_margin = f64::INFINITY;
    let mut symmetric_max_abs_margin = 0.0f64;
    let mut condition_satisfied = true;
    for i in 0..n_pairs {
        for j in 0..n_pairs {
            if i == j {
                continue;
            }
            let (x, y) = (xs[i], xs[j]);
            let Some((lhs, rhs, margin)) = evaluate(convention, d, gs[i], gs[j], x, y) else {
                skipped_pairs += 1;
                continue;
            };
            let scale = 1.0 + lhs.abs().max(rhs.abs());
            if margin < -MARGIN_TOL * scale {
                condition_satisfied = false;
            }
            if i + j == n_pairs - 1 {
                symmetric_max_abs_margin = symmetric_max_abs_margin.max(margin.abs());
                debug_assert!((x + y - mid2).abs() <= 1e-12 * (1.0 + mid2.abs()));
            }
            min_margin = min_margin.min(margin);
            pairs.push(GapPair { x, y, lhs, rhs, margin });
        }
    }
    if pairs.is_empty() {
        return Err(Error::PoleSaturated);
    }

    let spectrum = drift_spectrum(domain, &squared_weight(f), BoundaryCondition::Neumann, n, 2, opts)?
        .require_converged()?;
    let mu1 = spectrum.eigenvalues[1];
    let bound = 3.0 * PI * PI / (d * d);
    Ok(GapReport {
        convention,
        diameter: d,
        pairs,
        skipped_pairs,
        min_margin,
        symmetric_max_abs_margin,
        condition_satisfied,
        mu1,
        bound,
        bound_holds: mu1 >= bound - BOUND_TOL,
    })
}
