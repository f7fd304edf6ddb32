//! Randomized invariants of the expression language, the assembled pencils
//! and the eigensolvers.

use drift_spectra_core::experiments::prop4_check;
use drift_spectra_core::expr::{BinOp, Func};
use drift_spectra_core::linalg::{CsrMatrix, DenseMatrix};
use drift_spectra_core::{
    assemble_drift_1d, build_interval_mesh, parse_expr, solve_dense, solve_iterative, BoundaryCondition, Expr,
    IntervalDomain, OperatorPencil, SolveOptions, WeightSpec,
};
use proptest::prelude::*;

/// Expressions that are smooth and finite on `[0, 1]`.
fn smooth_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0u32..2000).prop_map(|c| Expr::constant(f64::from(c) / 1000.0)),
        Just(Expr::X),
        Just(Expr::Pi),
    ];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Expr::negate),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::binary(BinOp::Add, a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::binary(BinOp::Sub, a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::binary(BinOp::Mul, a, b)),
            inner.clone().prop_map(|a| Expr::func(Func::Sin, a)),
            inner.clone().prop_map(|a| Expr::func(Func::Cos, a)),
            inner.clone().prop_map(|a| Expr::func(Func::Exp, Expr::func(Func::Sin, a))),
            (inner, 2u8..4).prop_map(|(a, p)| Expr::pow(a, f64::from(p))),
        ]
    })
}

/// Any expression the grammar can produce, including ones that fail to
/// evaluate somewhere.
fn any_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0u32..5000).prop_map(|c| Expr::constant(f64::from(c) / 100.0)),
        Just(Expr::X),
        Just(Expr::Pi),
    ];
    let funcs = [Func::Sin, Func::Cos, Func::Tan, Func::Exp, Func::Log, Func::Sqrt, Func::Abs];
    let ops = [BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div];
    leaf.prop_recursive(4, 24, 2, move |inner| {
        prop_oneof![
            inner.clone().prop_map(Expr::negate),
            (inner.clone(), inner.clone(), prop::sample::select(ops.to_vec()))
                .prop_map(|(a, b, op)| Expr::binary(op, a, b)),
            (inner.clone(), prop::sample::select(funcs.to_vec())).prop_map(|(a, f)| Expr::func(f, a)),
            (inner, prop::sample::select(vec![0.5, 2.0, 3.0, -1.0, 1.5])).prop_map(|(a, p)| Expr::pow(a, p)),
        ]
    })
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * (1.0 + a.abs().max(b.abs()))
}

fn random_spd(rng_values: &[f64], n: usize) -> DenseMatrix {
    let a = DenseMatrix::from_fn(n, n, |i, j| rng_values[i * n + j]);
    let mut g = a.transpose().matmul(&a);
    for i in 0..n {
        g[(i, i)] += n as f64;
    }
    DenseMatrix::from_fn(n, n, |i, j| if i <= j { g[(i, j)] } else { g[(j, i)] })
}

fn random_pencil() -> impl Strategy<Value = OperatorPencil> {
    (12usize..90).prop_flat_map(|n| {
        (
            prop::collection::vec(-1.0f64..1.0, n * n),
            prop::collection::vec(-1.0f64..1.0, n * n),
        )
            .prop_map(move |(a, b)| {
                let k = random_spd(&a, n);
                let m = random_spd(&b, n);
                OperatorPencil::new(CsrMatrix::from_dense(&k), CsrMatrix::from_dense(&m)).unwrap()
            })
    })
}

proptest! {
    #[test]
    fn printed_expressions_parse_back(e in any_expr(), x in 0.0f64..1.0) {
        let text = e.to_string();
        let back = parse_expr(&text).unwrap_or_else(|err| panic!("`{text}` did not parse: {err}"));
        match (e.eval(x), back.eval(x)) {
            (Ok(a), Ok(b)) => prop_assert!(close(a, b, 1e-12), "`{}`: {} vs {}", text, a, b),
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "`{}`: {:?} vs {:?}", text, a, b),
        }
    }

    #[test]
    fn evaluation_is_pure(e in any_expr(), x in 0.0f64..1.0) {
        let first = e.eval(x);
        let copy = e.clone();
        let second = copy.eval(x);
        prop_assert_eq!(first.map(f64::to_bits), second.map(f64::to_bits));
        prop_assert_eq!(&e, &copy);
    }

    #[test]
    fn derivative_matches_finite_differences(e in smooth_expr(), x in 0.1f64..0.9) {
        let h = 1e-3;
        let at = |t: f64| e.eval(t).unwrap();
        let fd = (at(x - 2.0 * h) - 8.0 * at(x - h) + 8.0 * at(x + h) - at(x + 2.0 * h)) / (12.0 * h);
        let d = e.diff().eval(x).unwrap();
        let scale = 1.0 + at(x).abs() + d.abs();
        prop_assert!((d - fd).abs() <= 1e-6 * scale, "d/dx {} at {}: {} vs {}", e, x, d, fd);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn weight_scale_leaves_spectrum_unchanged(
        a in -3.0f64..3.0,
        b in -3.0f64..3.0,
        c in 0.01f64..100.0,
        n in 20usize..160,
    ) {
        let mesh = build_interval_mesh(IntervalDomain::unit(), n).unwrap();
        let phi = format!("{a}*x + {b}*x^2");
        let w = WeightSpec::parse_phi(&phi).unwrap();
        let wc = WeightSpec::parse_f(&format!("{c}*exp(-({phi}))")).unwrap();
        let opts = SolveOptions::default();
        let p = assemble_drift_1d(&mesh, &w, BoundaryCondition::Neumann).unwrap();
        let pc = assemble_drift_1d(&mesh, &wc, BoundaryCondition::Neumann).unwrap();
        let s = solve_dense(&p, 5, &opts).unwrap();
        let sc = solve_dense(&pc, 5, &opts).unwrap();
        let top = s.eigenvalues[4];
        for (x, y) in s.eigenvalues.iter().zip(&sc.eigenvalues) {
            prop_assert!((x - y).abs() <= 1e-12 * top, "{} vs {}", x, y);
        }
    }

    #[test]
    fn iterative_agrees_with_dense(p in random_pencil(), k in 1usize..6, seed in 0u64..1000) {
        let opts = SolveOptions { seed, ..SolveOptions::default() };
        let k = k.min(p.dof_count());
        let dense = solve_dense(&p, k, &opts).unwrap();
        let iter = solve_iterative(&p, k, &opts).unwrap();
        prop_assert!(iter.converged);
        for (a, b) in iter.eigenvalues.iter().zip(&dense.eigenvalues) {
            prop_assert!((a - b).abs() <= 1e-8 * b.abs(), "{} vs {}", a, b);
        }
    }

    #[test]
    fn partial_sums_never_beat_the_spectrum(
        slope in -4.0f64..4.0,
        n in 30usize..120,
        k in 1usize..5,
        seed in 0u64..10_000,
    ) {
        let mesh = build_interval_mesh(IntervalDomain::unit(), n).unwrap();
        let w = WeightSpec::parse_phi(&format!("{slope}*x")).unwrap();
        let p = assemble_drift_1d(&mesh, &w, BoundaryCondition::Neumann).unwrap();
        let r = prop4_check(&p, k, 20, seed, &SolveOptions::default()).unwrap();
        prop_assert_eq!(r.violations, 0, "min slack {}", r.min_relative_slack);
        prop_assert!(r.eigenvector_defect <= 1e-10);
    }
}
