//! Numerical experiments built on the assembly and eigensolver layers.
//!
//! * [`drift_spectrum`], [`thin_spectrum`]: single solves.
//! * [`convergence_study`]: thin-domain eigenvalues against an extrapolated
//!   1D reference, with fitted orders in `eps`.
//! * [`corollary1_harness`]: thin domains of height `eps * phi_1^2` against
//!   Dirichlet gaps `lambda_{k+1} - lambda_1`.
//! * [`prop2_check`], [`prop4_check`]: the Dirichlet-gap identity and the
//!   partial-sum inequality for trial sets.
//! * [`gap_check`]: the pairwise modulus condition and the resulting lower
//!   bound on the first nonzero drift eigenvalue.
//! * [`eigenfunction_residual`]: transverse structure of thin-domain
//!   eigenfunctions near the bottom boundary.

mod convergence;
mod gap;
mod identities;
mod residual;
mod spectra;

pub use convergence::{
    convergence_study, corollary1_harness, fit_order, ConvergenceReport, ConvergenceRow,
    CorollaryReport, OrderFit, StudyGrid,
};
pub use gap::{gap_check, GapConvention, GapPair, GapReport};
pub use identities::{prop2_check, prop4_check, Prop2Report, Prop2Row, Prop4Report};
pub use residual::{eigenfunction_residual, ResidualReport, ResidualRow};
pub use spectra::{dirichlet_spectrum, drift_spectrum, squared_weight, thin_spectrum};
