//! Job dispatch: run the experiment a config describes, write its outputs
//! and map the result to an exit code.

use std::io::Write as _;

use drift_spectra_core::experiments::{
    convergence_study, corollary1_harness, dirichlet_spectrum, drift_spectrum, eigenfunction_residual, gap_check,
    prop2_check, prop4_check, thin_spectrum, ConvergenceReport, StudyGrid,
};
use drift_spectra_core::{
    assemble_drift_1d, build_interval_mesh, BoundaryCondition, SpectrumResult, ThinDomainSpec, WeightSpec,
};
use serde_json::json;

use crate::config::{ConfigError, JobConfig, JobKind};
use crate::report::{Cell, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;
pub const EXIT_CHECK: i32 = 3;

/// Equality tolerance for the eigenvector case of the partial-sum check.
const PROP4_EQUALITY_TOL: f64 = 1e-10;

const SPECTRUM_COLUMNS: &[&str] = &["k", "eigenvalue", "residual"];
const CONVERGE_COLUMNS: &[&str] = &["epsilon", "k", "mu_eps", "mu_ref", "abs_err"];
const PROP2_COLUMNS: &[&str] = &["k", "lambda_gap", "drift_mu", "mismatch"];
const GAP_COLUMNS: &[&str] = &["x", "y", "lhs", "rhs", "margin"];
const RESIDUAL_COLUMNS: &[&str] = &["epsilon", "k", "sup_residual", "l2_model_distance"];
const PROP4_COLUMNS: &[&str] = &[
    "k",
    "trials",
    "eigen_sum",
    "min_relative_slack",
    "violations",
    "eigenvector_defect",
];

#[derive(Debug, thiserror::Error)]
pub enum JobError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Core(#[from] drift_spectra_core::Error),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl JobError {
    pub fn exit_code(&self) -> i32 {
        match self {
            JobError::Core(e) if e.is_numeric() => EXIT_NUMERIC,
            _ => EXIT_CONFIG,
        }
    }
}

/// A finished job: its report and, if an asserted check failed, why.
#[derive(Debug, Clone)]
pub struct JobOutput {
    pub report: Report,
    pub failure: Option<String>,
}

/// Run the job and write its outputs; diagnostics go to stderr, one line
/// each. Returns the process exit code.
pub fn run_job(cfg: &JobConfig) -> i32 {
    match execute(cfg).and_then(|out| write_outputs(cfg, &out).map(|()| out)) {
        Ok(JobOutput { failure: None, .. }) => EXIT_OK,
        Ok(JobOutput {
            failure: Some(reason), ..
        }) => {
            eprintln!("error: check failed: {reason}");
            EXIT_CHECK
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Write the CSV (to stdout when no path is configured) and the JSON.
pub fn write_outputs(cfg: &JobConfig, out: &JobOutput) -> Result<(), JobError> {
    let io_err = |path: &std::path::Path| {
        let path = path.display().to_string();
        move |source| JobError::Io { path, source }
    };
    match &cfg.csv {
        Some(path) => out.report.write_csv(path).map_err(io_err(path))?,
        None => std::io::stdout()
            .write_all(out.report.to_csv().as_bytes())
            .map_err(io_err("<stdout>".as_ref()))?,
    }
    if let Some(path) = &cfg.json {
        out.report.write_json(cfg, path).map_err(io_err(path))?;
    }
    Ok(())
}

/// Run the experiment without writing anything.
pub fn execute(cfg: &JobConfig) -> Result<JobOutput, JobError> {
    let domain = cfg.interval()?;
    let opts = cfg.solve_options();
    let weight = match &cfg.weight {
        Some(w) => w.to_spec()?,
        None => WeightSpec::flat(),
    };
    let n = || cfg.required(cfg.n);
    let num_eigs = || cfg.required(cfg.num_eigs);
    let grid = || StudyGrid {
        nx: cfg.required(cfg.nx),
        nt: cfg.required(cfg.nt),
    };

    let mut failure = None;
    let report = match cfg.kind {
        JobKind::Drift | JobKind::Dirichlet | JobKind::Thin => {
            let k = num_eigs();
            let spectrum = if k == 0 {
                None
            } else {
                Some(
                    match cfg.kind {
                        JobKind::Drift => drift_spectrum(domain, &weight, BoundaryCondition::Neumann, n(), k, &opts)?,
                        JobKind::Dirichlet => dirichlet_spectrum(domain, &weight, n(), k, &opts)?,
                        _ => {
                            let spec = ThinDomainSpec::new(domain, weight, cfg.epsilon[0])?;
                            let g = grid();
                            thin_spectrum(spec, g.nx, g.nt, k, &opts)?
                        }
                    }
                    .require_converged()?,
                )
            };
            let first = if cfg.kind == JobKind::Dirichlet { 1 } else { 0 };
            spectrum_report(spectrum.as_ref(), first)
        }
        JobKind::Converge => {
            let study = convergence_study(domain, &weight, &cfg.epsilon, grid(), num_eigs() - 1, n(), &opts)?;
            let mut report = convergence_report(&study);
            let holds = study.orders.iter().all(|o| o.upper_bound_holds);
            report.verdicts.insert("upper_bound_holds", holds);
            if !holds {
                failure = Some("eps^2 upper bound violated".to_string());
            }
            report
        }
        JobKind::Corollary1 => {
            let r = corollary1_harness(domain, n(), &cfg.epsilon, grid(), num_eigs() - 1, &opts)?;
            let mut report = convergence_report(&r.study);
            report.detail("dirichlet", &r.dirichlet);
            report.detail("ground_state_sup_error", r.ground_state_sup_error);
            report.detail("min_interior_ground_state", r.min_interior_ground_state);
            report
        }
        JobKind::Prop2 => {
            let r = prop2_check(domain, n(), num_eigs(), &opts)?;
            let mut report = Report::new(PROP2_COLUMNS);
            for row in &r.rows {
                report.push_row(vec![row.k.into(), row.lambda_gap.into(), row.drift_mu.into(), row.mismatch.into()]);
            }
            report.detail("dirichlet", &r.dirichlet);
            report.detail("tolerance", r.tolerance);
            report.verdicts.insert("holds", r.holds());
            if !r.holds() {
                failure = Some(format!("gap identity mismatch exceeds {:e}", r.tolerance));
            }
            report
        }
        JobKind::Gapcheck => {
            let r = gap_check(domain, &weight, cfg.pairs, n(), cfg.convention, &opts)?;
            let mut report = Report::new(GAP_COLUMNS);
            for p in &r.pairs {
                report.push_row(vec![p.x.into(), p.y.into(), p.lhs.into(), p.rhs.into(), p.margin.into()]);
            }
            report.detail("convention", r.convention.as_str());
            report.detail("diameter", r.diameter);
            report.detail("skipped_pairs", r.skipped_pairs);
            report.detail("min_margin", r.min_margin);
            report.detail("symmetric_max_abs_margin", r.symmetric_max_abs_margin);
            report.detail("mu1", r.mu1);
            report.detail("bound", r.bound);
            report.verdicts.insert("condition_satisfied", r.condition_satisfied);
            report.verdicts.insert("bound_holds", r.bound_holds);
            if !r.condition_satisfied {
                failure = Some(format!("condition not satisfied (min margin {:e})", r.min_margin));
            } else if !r.bound_holds {
                failure = Some(format!("bound violated: mu_1 = {} < {}", r.mu1, r.bound));
            }
            report
        }
        JobKind::Residual => {
            let k = num_eigs() - 1;
            let g = grid();
            let r = eigenfunction_residual(domain, &weight, &cfg.epsilon, g.nx, g.nt, k, &opts)?;
            let mut report = Report::new(RESIDUAL_COLUMNS);
            for row in &r.rows {
                report.push_row(vec![
                    row.epsilon.into(),
                    row.k.into(),
                    row.sup_residual.into(),
                    row.l2_model_distance.into(),
                ]);
            }
            let eigenvalues: Vec<f64> = r.rows.iter().map(|row| row.eigenvalue).collect();
            report.detail("eigenvalues", eigenvalues);
            let (residual, distance) = r.strictly_decreasing();
            report.verdicts.insert("residual_decreasing", residual);
            report.verdicts.insert("model_distance_decreasing", distance);
            if !(residual && distance) {
                failure = Some("residual or model distance not strictly decreasing".to_string());
            }
            report
        }
        JobKind::Prop4 => {
            let mesh = build_interval_mesh(domain, n())?;
            let pencil = assemble_drift_1d(&mesh, &weight, BoundaryCondition::Neumann)?;
            let r = prop4_check(&pencil, num_eigs() - 1, cfg.trials, cfg.seed, &opts)?;
            let mut report = Report::new(PROP4_COLUMNS);
            report.push_row(vec![
                r.k.into(),
                r.trials.into(),
                r.eigen_sum.into(),
                r.min_relative_slack.into(),
                r.violations.into(),
                r.eigenvector_defect.into(),
            ]);
            let holds = r.holds(PROP4_EQUALITY_TOL);
            report.verdicts.insert("holds", holds);
            if !holds {
                failure = Some(format!(
                    "partial-sum inequality: {} violations, eigenvector defect {:e}",
                    r.violations, r.eigenvector_defect
                ));
            }
            report
        }
    };
    Ok(JobOutput { report, failure })
}

fn spectrum_report(spectrum: Option<&SpectrumResult>, first_index: usize) -> Report {
    let mut report = Report::new(SPECTRUM_COLUMNS);
    if let Some(s) = spectrum {
        for (i, (mu, res)) in s.eigenvalues.iter().zip(&s.residuals).enumerate() {
            report.push_row(vec![(i + first_index).into(), (*mu).into(), (*res).into()]);
        }
        report.solver_path = Some(s.path.as_str());
        report.detail("iterations", s.iterations);
        report.detail("clusters", s.clusters());
    }
    report
}

fn convergence_report(study: &ConvergenceReport) -> Report {
    let mut report = Report::new(CONVERGE_COLUMNS);
    for row in &study.rows {
        report.push_row(vec![
            Cell::Real(row.epsilon),
            row.k.into(),
            row.mu_eps.into(),
            row.mu_ref.into(),
            row.abs_err.into(),
        ]);
    }
    report.orders = study
        .orders
        .iter()
        .map(|o| {
            json!({
                "k": o.k,
                "order": o.order,
                "reference_tol": o.reference_tol,
                "floor": o.floor,
                "at_floor": o.at_floor,
                "upper_bound_holds": o.upper_bound_holds,
            })
        })
        .collect();
    report.detail("reference", &study.reference_note);
    report
}
