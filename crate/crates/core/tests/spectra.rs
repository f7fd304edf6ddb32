//! End-to-end checks of assembly, the solvers and the experiment harnesses
//! on problems with known spectra.

mod common;

use std::f64::consts::PI;

use drift_spectra_core::experiments::{
    convergence_study, corollary1_harness, dirichlet_spectrum, drift_spectrum, eigenfunction_residual, gap_check,
    prop2_check, thin_spectrum, GapConvention, StudyGrid,
};
use drift_spectra_core::linalg::{CsrMatrix, DenseMatrix};
use drift_spectra_core::{
    assemble_drift_1d, build_interval_mesh, solve_dense, solve_iterative, solve_smallest, BoundaryCondition, Error,
    IntervalDomain, Normalization, OperatorPencil, SolveOptions, SolverKind, SolverPath, ThinDomainSpec, WeightSpec,
};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn unit() -> IntervalDomain {
    IntervalDomain::unit()
}

fn opts() -> SolveOptions {
    SolveOptions::default()
}

fn pencil_from(k: &[&[f64]], m: &[&[f64]]) -> OperatorPencil {
    OperatorPencil::new(
        CsrMatrix::from_dense(&DenseMatrix::from_rows(k)),
        CsrMatrix::from_dense(&DenseMatrix::from_rows(m)),
    )
    .unwrap()
}

#[test]
fn two_by_two_fixtures_on_both_paths() {
    let a = pencil_from(&[&[2.0, -1.0], &[-1.0, 2.0]], &[&[1.0, 0.0], &[0.0, 1.0]]);
    let b = pencil_from(&[&[1.0, 0.0], &[0.0, 2.0]], &[&[1.0, 0.0], &[0.0, 2.0]]);
    for (p, expected) in [(&a, [1.0, 3.0]), (&b, [1.0, 1.0])] {
        let dense = solve_dense(p, 2, &opts()).unwrap();
        let iter = solve_iterative(p, 2, &opts()).unwrap();
        for (i, e) in expected.iter().enumerate() {
            assert!((dense.eigenvalues[i] - e).abs() < 1e-10);
            assert!((iter.eigenvalues[i] - e).abs() < 1e-10);
        }
    }
}

#[test]
fn flat_neumann_dense_fixture() {
    let s = drift_spectrum(unit(), &WeightSpec::flat(), BoundaryCondition::Neumann, 50, 2, &opts()).unwrap();
    assert_eq!(s.path, SolverPath::Dense);
    assert!(s.eigenvalues[0].abs() <= 1e-10);
    assert!(rel(s.eigenvalues[1], PI * PI) <= 1e-3);
}

#[test]
fn spectrum_invariants_hold() {
    let mesh = build_interval_mesh(unit(), 300).unwrap();
    let p = assemble_drift_1d(&mesh, &WeightSpec::parse_phi("x^2").unwrap(), BoundaryCondition::Neumann).unwrap();
    for solver in [SolverKind::Dense, SolverKind::Iterative] {
        let s = solve_smallest(&p, 5, &SolveOptions { solver, ..opts() }).unwrap();
        assert!(s.converged);
        assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        assert!(s.eigenvalues[0] >= -1e-10 * p.stiffness().norm_inf());
        assert!(s.residuals.iter().all(|&r| r <= 1e-8));
        for (i, u) in s.eigenvectors.iter().enumerate() {
            for (j, v) in s.eigenvectors.iter().enumerate() {
                let g = p.mass().bilinear(u, v);
                let delta = if i == j { 1.0 } else { 0.0 };
                assert!((g - delta).abs() <= 1e-8, "gram ({i}, {j}) = {g}");
            }
            let big = u.iter().copied().fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
            assert!(big > 0.0);
        }
    }
}

#[test]
fn mass_normalization_scales_vectors() {
    let s = drift_spectrum(
        unit(),
        &WeightSpec::flat(),
        BoundaryCondition::Neumann,
        40,
        3,
        &SolveOptions {
            normalization: Normalization::Mass(0.25),
            ..opts()
        },
    )
    .unwrap();
    let mesh = build_interval_mesh(unit(), 40).unwrap();
    let p = assemble_drift_1d(&mesh, &WeightSpec::flat(), BoundaryCondition::Neumann).unwrap();
    for v in &s.eigenvectors {
        assert!((p.mass().bilinear(v, v) - 0.25).abs() < 1e-12);
    }
}

#[test]
fn dispatcher_routes_by_size() {
    let small = drift_spectrum(unit(), &WeightSpec::flat(), BoundaryCondition::Neumann, 100, 3, &opts()).unwrap();
    assert_eq!(small.path, SolverPath::Dense);
    let large = drift_spectrum(unit(), &WeightSpec::flat(), BoundaryCondition::Neumann, 1000, 3, &opts()).unwrap();
    assert_eq!(large.path, SolverPath::Iterative);
    let forced = SolveOptions {
        solver: SolverKind::Dense,
        ..opts()
    };
    assert!(matches!(
        drift_spectrum(unit(), &WeightSpec::flat(), BoundaryCondition::Neumann, 1000, 3, &forced),
        Err(Error::DenseCapExceeded { .. })
    ));
}

#[test]
fn dirichlet_examples() {
    let s = dirichlet_spectrum(unit(), &WeightSpec::flat(), 200, 3, &opts()).unwrap();
    for k in 1..=3 {
        assert!(rel(s.eigenvalues[k - 1], (k * k) as f64 * PI * PI) <= 1e-3);
    }
    let wide = dirichlet_spectrum(IntervalDomain::new(0.0, 2.0).unwrap(), &WeightSpec::flat(), 200, 1, &opts()).unwrap();
    assert!(rel(wide.eigenvalues[0], PI * PI / 4.0) <= 1e-3);
    // Ground state is a positive multiple of sin(pi x).
    let v = &s.eigenvectors[0];
    assert!(v.iter().all(|&x| x > 0.0));
    let mid = v[v.len() / 2];
    let nodes = build_interval_mesh(unit(), 200).unwrap().nodes().to_vec();
    for (i, &x) in v.iter().enumerate() {
        let shape = (PI * nodes[i + 1]).sin();
        assert!((x / mid - shape).abs() < 1e-3);
    }
}

#[test]
fn linear_phi_matches_independent_oracle() {
    let s = drift_spectrum(unit(), &WeightSpec::parse_phi("x").unwrap(), BoundaryCondition::Neumann, 1000, 4, &opts())
        .unwrap();
    let shot = common::shooting_neumann(|x: f64| (-x).exp(), 0.0, 1.0, 4, 100.0);
    for (k, &oracle) in shot.iter().enumerate().take(4).skip(1) {
        assert!(rel(s.eigenvalues[k], oracle) < 1e-4);
        assert!(rel(s.eigenvalues[k], common::linear_phi_characteristic(k)) < 1e-4);
    }
}

#[test]
fn flat_refinement_converges_at_second_order() {
    let mu = |n| drift_spectrum(unit(), &WeightSpec::flat(), BoundaryCondition::Neumann, n, 3, &opts()).unwrap();
    let (a, b, c) = (mu(50), mu(100), mu(200));
    for k in 1..3 {
        let d1 = (a.eigenvalues[k] - b.eigenvalues[k]).abs();
        let d2 = (b.eigenvalues[k] - c.eigenvalues[k]).abs();
        assert!(d2 < d1);
        let order = (d1 / d2).log2();
        assert!((1.8..=2.2).contains(&order), "k={k}: order {order}");
    }
}

#[test]
fn rectangle_spectrum_on_iterative_path() {
    let spec = ThinDomainSpec::new(unit(), WeightSpec::flat(), 0.1).unwrap();
    let s = thin_spectrum(
        spec,
        200,
        4,
        4,
        &SolveOptions {
            solver: SolverKind::Iterative,
            ..opts()
        },
    )
    .unwrap();
    assert!(s.converged);
    assert!(s.eigenvalues[0].abs() < 1e-8);
    for k in 1..4 {
        assert!(rel(s.eigenvalues[k], (k * k) as f64 * PI * PI) <= 1e-3);
    }
}

#[test]
fn thin_exponential_profile_is_close_to_drift_limit() {
    let spec = ThinDomainSpec::new(unit(), WeightSpec::parse_f("exp(-x)").unwrap(), 0.1).unwrap();
    let s = thin_spectrum(spec, 400, 8, 2, &opts()).unwrap();
    // O(eps^2) with a modest constant.
    assert!((s.eigenvalues[1] - (PI * PI + 0.25)).abs() < 0.1);
}

#[test]
fn flat_convergence_study_is_at_floor() {
    let r = convergence_study(
        unit(),
        &WeightSpec::flat(),
        &[0.2, 0.1, 0.05, 0.025],
        StudyGrid { nx: 60, nt: 3 },
        2,
        400,
        &opts(),
    )
    .unwrap();
    for k in 1..=2 {
        let fit = r.order(k).unwrap();
        assert!(fit.at_floor);
        assert!(fit.order.is_none());
    }
    for ei in 0..4 {
        assert!(r.row(ei, 0).abs_err <= 1e-8);
    }
}

#[test]
fn study_rejects_short_or_unordered_eps_lists() {
    let grid = StudyGrid { nx: 20, nt: 2 };
    let w = WeightSpec::flat();
    assert!(convergence_study(unit(), &w, &[0.2, 0.1, 0.05], grid, 1, 100, &opts()).is_err());
    assert!(convergence_study(unit(), &w, &[0.1, 0.2, 0.4, 0.8], grid, 1, 100, &opts()).is_err());
    assert!(convergence_study(unit(), &w, &[0.4, 0.2, 0.05, 0.025], grid, 1, 100, &opts()).is_err());
}

#[test]
fn corollary_ground_state_matches_sine() {
    let r = corollary1_harness(unit(), 2000, &[0.1], StudyGrid { nx: 100, nt: 4 }, 1, &opts()).unwrap();
    assert!(r.ground_state_sup_error <= 1e-4, "{}", r.ground_state_sup_error);
    assert!(r.min_interior_ground_state > 0.0);
    assert!(rel(r.dirichlet[1] - r.dirichlet[0], 3.0 * PI * PI) < 1e-4);
}

#[test]
fn dirichlet_gaps_match_drift_spectrum() {
    let r = prop2_check(unit(), 1000, 3, &opts()).unwrap();
    assert!(r.holds());
    assert_eq!(r.rows[0].lambda_gap, 0.0);
    assert!(rel(r.rows[1].drift_mu, 3.0 * PI * PI) < 5e-3);
    assert!(rel(r.rows[2].drift_mu, 8.0 * PI * PI) < 5e-3);
}

#[test]
fn gap_check_on_sine_profile() {
    let f = WeightSpec::parse_f("sin(pi*x)").unwrap();
    let r = gap_check(unit(), &f, 50, 400, GapConvention::ModelConsistent, &opts()).unwrap();
    assert!(r.verdict_ok());
    assert!(r.symmetric_max_abs_margin <= 1e-9);
    assert!(r.mu1 >= 3.0 * PI * PI - 1e-3);
    let shifted = gap_check(
        IntervalDomain::new(0.0, 2.0).unwrap(),
        &WeightSpec::parse_f("sin(pi*x/2)").unwrap(),
        20,
        400,
        GapConvention::ModelConsistent,
        &opts(),
    )
    .unwrap();
    assert!(shifted.condition_satisfied);
    assert!((shifted.bound - 3.0 * PI * PI / 4.0).abs() < 1e-12);
}

#[test]
fn residual_decreases_for_linear_phi() {
    let r = eigenfunction_residual(
        unit(),
        &WeightSpec::parse_phi("x").unwrap(),
        &[0.1, 0.05, 0.025],
        200,
        6,
        1,
        &opts(),
    )
    .unwrap();
    assert_eq!(r.rows.len(), 3);
    assert_eq!(r.strictly_decreasing(), (true, true));
    // Eigenvectors follow the eps-scaled normalization.
    assert!(r.rows.iter().all(|row| row.eigenvalue > 10.0 && row.eigenvalue < 10.3));
}
