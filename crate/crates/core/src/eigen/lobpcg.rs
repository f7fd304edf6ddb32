//! Block preconditioned iteration (LOBPCG) with soft locking.
//!
//! The preconditioner is an exact banded Cholesky solve with `K + sigma M`
//! on each line of degrees of freedom reported by the pencil: the whole
//! interval for 1D problems, one vertical column for thin-domain grids, a
//! single entry (plain Jacobi) for custom pencils. When the lines are
//! genuine blocks, an additive coarse correction on vectors constant along
//! each line handles the coupling between lines, and the shift `sigma` is
//! taken from the diagonal ratios of that collapsed pencil: on profiles
//! that vanish at the ends the fine diagonal ratios are dominated by the
//! thinnest columns and give a useless shift.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::block::{dot, Block};
use super::{finish, SolveOptions, SolverPath, SpectrumResult};
use crate::assembly::OperatorPencil;
use crate::linalg::{
    generalized_eigen, jacobi_eigen, BandCholesky, CsrMatrix, DenseMatrix, TripletBuilder,
};
use crate::math;
use crate::{Error, Result};

/// Extra columns carried beyond the requested count.
const GUARD_COLUMNS: usize = 5;
/// Relative eigenvalue threshold below which SVQB drops directions.
const SVQB_DROP: f64 = 1e-10;

struct LinePreconditioner {
    lines: Vec<(usize, usize, BandCholesky)>,
    coarse: Option<Coarse>,
}

/// Additive correction on the space of vectors constant on each line.
struct Coarse {
    line_of: Vec<usize>,
    factor: BandCholesky,
}

/// `P^T A P` for the prolongation `P` that is constant on each line.
fn collapse(a: &CsrMatrix, line_of: &[usize], n_lines: usize) -> CsrMatrix {
    let mut t = TripletBuilder::with_capacity(n_lines, a.nnz());
    for (i, &li) in line_of.iter().enumerate() {
        for (j, v) in a.row(i) {
            t.push(li, line_of[j], v);
        }
    }
    t.build()
}

fn shift(k: &CsrMatrix, m: &CsrMatrix) -> f64 {
    let kd = k.diagonal();
    let md = m.diagonal();
    1e-3 * kd.iter().zip(&md).map(|(a, b)| a / b).sum::<f64>() / kd.len() as f64
}

impl LinePreconditioner {
    fn new(p: &OperatorPencil) -> Result<Self> {
        let k = p.stiffness();
        let m = p.mass();
        let lines = p.lines();
        let two_level = lines.len() >= 2 && lines.iter().all(|&(s, e)| e - s >= 2);

        let (sigma, coarse) = if two_level {
            let mut line_of = alloc::vec![0; p.dof_count()];
            for (l, &(s, e)) in lines.iter().enumerate() {
                line_of[s..e].iter_mut().for_each(|v| *v = l);
            }
            let kc = collapse(k, &line_of, lines.len());
            let mc = collapse(m, &line_of, lines.len());
            let sigma = shift(&kc, &mc);
            let ac = kc.linear_combination(1.0, &mc, sigma);
            let factor = BandCholesky::factor_block(&ac, 0, lines.len())?;
            (sigma, Some(Coarse { line_of, factor }))
        } else {
            (shift(k, m), None)
        };

        let a = k.linear_combination(1.0, m, sigma);
        let lines = lines
            .iter()
            .map(|&(s, e)| BandCholesky::factor_block(&a, s, e).map(|c| (s, e, c)))
            .collect::<Result<Vec<_>>>()?;
        Ok(LinePreconditioner { lines, coarse })
    }

    fn apply(&self, r: &Block) -> Block {
        let mut out = r.clone();
        for j in 0..out.cols() {
            let col = out.col_mut(j);
            for (s, e, chol) in &self.lines {
                chol.solve_in_place(&mut col[*s..*e]);
            }
            if let Some(c) = &self.coarse {
                let mut rc = alloc::vec![0.0; c.factor.dim()];
                for (v, &l) in r.col(j).iter().zip(&c.line_of) {
                    rc[l] += v;
                }
                c.factor.solve_in_place(&mut rc);
                for (v, &l) in col.iter_mut().zip(&c.line_of) {
                    *v += rc[l];
                }
            }
        }
        out
    }
}

/// Smallest `k` eigenpairs by LOBPCG, seeded from `opts.seed`.
///
/// A pair is settled once its backward error is at most `opts.tol` and its
/// Ritz value moved by at most `opts.tol * max(|mu|, 1)` in the last step;
/// settled pairs are soft-locked (no new search direction). Stops when the
/// first `k` pairs are settled or after `opts.max_iterations`; in the latter
/// case `converged` is false. The second test matters on badly scaled
/// pencils (heights vanishing at the ends), where a small normwise backward
/// error alone still allows eigenvalue errors far above `tol`. When the
/// trial space would span the whole space the Rayleigh-Ritz step is done
/// once on the full pencil, which is exact.
pub fn solve_iterative(p: &OperatorPencil, k: usize, opts: &SolveOptions) -> Result<SpectrumResult> {
    let n = p.dof_count();
    if k > n {
        return Err(Error::InvalidArgument("more eigenpairs requested than degrees of freedom"));
    }
    if k == 0 {
        return Ok(finish(p, Vec::new(), Vec::new(), SolverPath::Iterative, 0, opts));
    }
    let bs = (k + GUARD_COLUMNS).min(n);
    if 3 * bs >= n {
        let eig = generalized_eigen(&p.stiffness().to_dense(), &p.mass().to_dense())?;
        let values = eig.values[..k].to_vec();
        let vectors = (0..k).map(|j| eig.vectors.column(j)).collect();
        return Ok(finish(p, values, vectors, SolverPath::Iterative, 1, opts));
    }

    let precond = LinePreconditioner::new(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut restarted = false;
    loop {
        match run(p, k, bs, &precond, &mut rng, opts) {
            Ok((values, x, iterations, settled)) => {
                let vectors = (0..k).map(|j| x.col(j).to_vec()).collect();
                let mut result = finish(p, values[..k].to_vec(), vectors, SolverPath::Iterative, iterations, opts);
                result.converged &= settled;
                return Ok(result);
            }
            Err(Error::Breakdown) if !restarted => restarted = true,
            Err(e) => return Err(e),
        }
    }
}

fn random_block(n: usize, cols: usize, rng: &mut ChaCha8Rng) -> Block {
    let mut b = Block::zeros(n, cols);
    for j in 0..cols {
        for v in b.col_mut(j) {
            *v = rng.gen_range(-1.0..1.0);
        }
    }
    b
}

/// One attempt from a fresh random start. Returns Ritz values and vectors
/// of the whole block, the iteration count and whether the requested pairs
/// settled.
fn run(
    p: &OperatorPencil,
    k: usize,
    bs: usize,
    precond: &LinePreconditioner,
    rng: &mut ChaCha8Rng,
    opts: &SolveOptions,
) -> Result<(Vec<f64>, Block, usize, bool)> {
    let kmat = p.stiffness();
    let mmat = p.mass();
    let n = p.dof_count();
    let norms = (kmat.norm_inf(), mmat.norm_inf());

    let x0 = random_block(n, bs, rng);
    let x0 = svqb(&x0, mmat, 0.0)?;
    let (mut lambda, mut x) = rayleigh_ritz(&x0, kmat, mmat, bs)?;
    let mut p_dir = Block::empty(n);
    let mut iterations = 0;
    let mut previous: Option<Vec<f64>> = None;

    loop {
        let kx = x.apply(kmat);
        let mx = x.apply(mmat);
        let mut r = Block::zeros(n, bs);
        let mut active = Vec::new();
        let mut done_requested = 0;
        for j in 0..bs {
            let rj = r.col_mut(j);
            for ((ri, a), b) in rj.iter_mut().zip(kx.col(j)).zip(mx.col(j)) {
                *ri = a - lambda[j] * b;
            }
            let denom = (norms.0 + lambda[j].abs() * norms.1) * math::sqrt(dot(x.col(j), x.col(j)));
            let res = math::sqrt(dot(r.col(j), r.col(j))) / denom;
            let settled = previous
                .as_ref()
                .is_some_and(|prev| (lambda[j] - prev[j]).abs() <= opts.tol * lambda[j].abs().max(1.0));
            if res <= opts.tol && settled {
                if j < k {
                    done_requested += 1;
                }
            } else {
                active.push(j);
            }
        }
        if done_requested == k || iterations >= opts.max_iterations {
            return Ok((lambda, x, iterations, done_requested == k));
        }
        iterations += 1;

        let w = precond.apply(&r.select(&active));
        let mut y = w.hcat(&p_dir);
        for _ in 0..2 {
            let c = x.gram(&y.apply(mmat));
            y.sub_product(&x, &c);
            y = svqb(&y, mmat, SVQB_DROP)?;
            if y.cols() == 0 {
                return Err(Error::Breakdown);
            }
        }

        let s = x.hcat(&y);
        let (new_lambda, coeffs) = match ritz_coefficients(&s, kmat, mmat, bs) {
            Ok(v) => v,
            Err(Error::NotPositiveDefinite { .. }) | Err(Error::JacobiNotConverged { .. }) => {
                return Err(Error::Breakdown)
            }
            Err(e) => return Err(e),
        };
        let x_new = s.combine(&coeffs);
        let tail = DenseMatrix::from_fn(y.cols(), bs, |i, j| coeffs[(bs + i, j)]);
        p_dir = y.combine(&tail);
        x = x_new;
        previous = Some(core::mem::replace(&mut lambda, new_lambda));
    }
}

/// Ritz values and coefficient vectors of the `bs` smallest pairs on
/// `span(s)`.
fn ritz_coefficients(s: &Block, k: &CsrMatrix, m: &CsrMatrix, bs: usize) -> Result<(Vec<f64>, DenseMatrix)> {
    let ks = s.apply(k);
    let ms = s.apply(m);
    let mut gk = s.gram(&ks);
    let mut gm = s.gram(&ms);
    symmetrize(&mut gk);
    symmetrize(&mut gm);
    let eig = generalized_eigen(&gk, &gm)?;
    let coeffs = DenseMatrix::from_fn(s.cols(), bs, |i, j| eig.vectors[(i, j)]);
    Ok((eig.values[..bs].to_vec(), coeffs))
}

fn rayleigh_ritz(s: &Block, k: &CsrMatrix, m: &CsrMatrix, bs: usize) -> Result<(Vec<f64>, Block)> {
    let (values, coeffs) = ritz_coefficients(s, k, m, bs)?;
    Ok((values, s.combine(&coeffs)))
}

fn symmetrize(a: &mut DenseMatrix) {
    for i in 0..a.rows() {
        for j in i + 1..a.cols() {
            let v = 0.5 * (a[(i, j)] + a[(j, i)]);
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
}

/// `M`-orthonormalize the columns of `y` through an eigendecomposition of
/// the scaled Gram matrix, dropping directions whose eigenvalue falls below
/// `drop` times the largest.
fn svqb(y: &Block, m: &CsrMatrix, drop: f64) -> Result<Block> {
    let my = y.apply(m);
    let mut g = y.gram(&my);
    symmetrize(&mut g);
    let cols = y.cols();
    let keep_cols: Vec<usize> = (0..cols).filter(|&j| g[(j, j)] > 0.0).collect();
    if keep_cols.len() < cols {
        return svqb(&y.select(&keep_cols), m, drop);
    }
    if cols == 0 {
        return Ok(y.clone());
    }
    let d: Vec<f64> = (0..cols).map(|j| 1.0 / math::sqrt(g[(j, j)])).collect();
    let h = DenseMatrix::from_fn(cols, cols, |i, j| d[i] * g[(i, j)] * d[j]);
    let eig = jacobi_eigen(&h)?;
    let top = eig.values.last().copied().unwrap_or(0.0);
    let kept: Vec<usize> = (0..cols).filter(|&j| eig.values[j] > drop * top && eig.values[j] > 0.0).collect();
    let c = DenseMatrix::from_fn(cols, kept.len(), |i, jj| {
        let j = kept[jj];
        d[i] * eig.vectors[(i, j)] / math::sqrt(eig.values[j])
    });
    Ok(y.combine(&c))
}
