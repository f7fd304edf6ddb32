use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::math;
use crate::{Error, Result};

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut a = Self::zeros(n, n);
        for i in 0..n {
            a[(i, i)] = 1.0;
        }
        a
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut a = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                a[(i, j)] = f(i, j);
            }
        }
        a
    }

    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.len());
        Self::from_fn(n, m, |i, j| rows[i][j])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let src = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += a * s;
                }
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        math::sqrt(self.data.iter().map(|v| v * v).sum())
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Overwrite the lower triangle of `a` with its Cholesky factor `L`
/// (`a = L L^T`) and zero the strict upper triangle.
pub fn cholesky_in_place(a: &mut DenseMatrix) -> Result<()> {
    let n = a.rows();
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= a[(j, k)] * a[(j, k)];
        }
        if !(d > 0.0) || !d.is_finite() {
            return Err(Error::NotPositiveDefinite { index: j, pivot: d });
        }
        let ljj = math::sqrt(d);
        a[(j, j)] = ljj;
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= a[(i, k)] * a[(j, k)];
            }
            a[(i, j)] = s / ljj;
        }
        for i in 0..j {
            a[(i, j)] = 0.0;
        }
    }
    Ok(())
}

/// Ascending eigenvalues with the matching orthonormal eigenvectors stored
/// as the columns of `vectors`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: DenseMatrix,
    pub sweeps: usize,
}

pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi rotations on a symmetric matrix. Stops once the
/// off-diagonal Frobenius norm is at most `1e-12` times the norm of the
/// input.
///
/// Rotations update whole rows (and mirror them into the columns) so the
/// inner loops run over contiguous memory. In the first sweeps entries far
/// below the current off-diagonal level are left for later, and afterwards
/// entries negligible against both diagonal entries are set to zero.
pub fn jacobi_eigen(a: &DenseMatrix) -> Result<SymmetricEigen> {
    let n = a.rows();
    assert_eq!(n, a.cols());
    let threshold = 1e-12 * a.frobenius_norm();
    let mut a = a.data.clone();
    // Row j holds eigenvector j.
    let mut vt = DenseMatrix::identity(n).data;

    let off_norm = |a: &[f64]| {
        let mut s = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                s += a[i * n + j] * a[i * n + j];
            }
        }
        math::sqrt(2.0 * s)
    };

    let mut sweeps = 0;
    loop {
        let off = off_norm(&a);
        if off <= threshold || off == 0.0 {
            break;
        }
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::JacobiNotConverged {
                sweeps,
                off_norm: off,
            });
        }
        sweeps += 1;
        let defer_below = if sweeps <= 3 { 0.2 * off / n as f64 } else { 0.0 };
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                if sweeps > 4 && app.abs() + 100.0 * apq.abs() == app.abs() && aqq.abs() + 100.0 * apq.abs() == aqq.abs()
                {
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    continue;
                }
                if apq == 0.0 || apq.abs() < defer_below {
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    let t = 1.0 / (theta.abs() + math::sqrt(theta * theta + 1.0));
                    if theta < 0.0 {
                        -t
                    } else {
                        t
                    }
                };
                let c = 1.0 / math::sqrt(t * t + 1.0);
                let s = t * c;
                rotate_rows(&mut a, n, p, q, c, s);
                for k in 0..n {
                    if k != p && k != q {
                        a[k * n + p] = a[p * n + k];
                        a[k * n + q] = a[q * n + k];
                    }
                }
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                rotate_rows(&mut vt, n, p, q, c, s);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let vectors = DenseMatrix::from_fn(n, n, |k, j| vt[order[j] * n + k]);
    Ok(SymmetricEigen {
        values,
        vectors,
        sweeps,
    })
}

/// `(row_p, row_q) <- (c row_p - s row_q, s row_p + c row_q)` for `p < q`.
#[inline]
fn rotate_rows(data: &mut [f64], n: usize, p: usize, q: usize, c: f64, s: f64) {
    let (head, tail) = data.split_at_mut(q * n);
    let rp = &mut head[p * n..(p + 1) * n];
    let rq = &mut tail[..n];
    for (x, y) in rp.iter_mut().zip(rq.iter_mut()) {
        let (xp, yq) = (*x, *y);
        *x = c * xp - s * yq;
        *y = s * xp + c * yq;
    }
}

/// Generalized problem `A v = lambda B v` for symmetric `A` and symmetric
/// positive definite `B`: Cholesky `B = L L^T`, Jacobi on
/// `L^-1 A L^-T`, then back-substitution. Eigenvectors come back
/// `B`-orthonormal.
pub fn generalized_eigen(a: &DenseMatrix, b: &DenseMatrix) -> Result<SymmetricEigen> {
    let n = a.rows();
    let mut l = b.clone();
    cholesky_in_place(&mut l)?;

    // Y = L^-1 A, then C = L^-1 Y^T = L^-1 A L^-T.
    let mut y = a.clone();
    forward_substitute_columns(&l, &mut y);
    let mut c = y.transpose();
    forward_substitute_columns(&l, &mut c);
    for i in 0..n {
        for j in i + 1..n {
            let m = 0.5 * (c[(i, j)] + c[(j, i)]);
            c[(i, j)] = m;
            c[(j, i)] = m;
        }
    }

    let mut eig = jacobi_eigen(&c)?;
    backward_substitute_transposed_columns(&l, &mut eig.vectors);
    Ok(eig)
}

/// Solve `L X = B` for lower-triangular `L`, overwriting `B`.
fn forward_substitute_columns(l: &DenseMatrix, b: &mut DenseMatrix) {
    let n = l.rows();
    let w = b.cols();
    for i in 0..n {
        let (done, rest) = b.data.split_at_mut(i * w);
        let row = &mut rest[..w];
        for k in 0..i {
            let lik = l[(i, k)];
            if lik != 0.0 {
                for (x, y) in row.iter_mut().zip(&done[k * w..(k + 1) * w]) {
                    *x -= lik * y;
                }
            }
        }
        let d = l[(i, i)];
        for x in row.iter_mut() {
            *x /= d;
        }
    }
}

/// Solve `L^T X = B` for lower-triangular `L`, overwriting `B`.
fn backward_substitute_transposed_columns(l: &DenseMatrix, b: &mut DenseMatrix) {
    let n = l.rows();
    let w = b.cols();
    for i in (0..n).rev() {
        let (head, done) = b.data.split_at_mut((i + 1) * w);
        let row = &mut head[i * w..];
        for k in i + 1..n {
            let lki = l[(k, i)];
            if lki != 0.0 {
                let src = &done[(k - i - 1) * w..(k - i) * w];
                for (x, y) in row.iter_mut().zip(src) {
                    *x -= lki * y;
                }
            }
        }
        let d = l[(i, i)];
        for x in row.iter_mut() {
            *x /= d;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two() {
        let a = DenseMatrix::from_rows(&[&[2.0, -1.0], &[-1.0, 2.0]]);
        let e = jacobi_eigen(&a).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14);
        assert!((e.values[1] - 3.0).abs() < 1e-14);
        let v0 = e.vectors.column(0);
        assert!((v0[0] - v0[1]).abs() < 1e-14);
    }

    #[test]
    fn reconstructs_matrix() {
        let n = 7;
        let a = DenseMatrix::from_fn(n, n, |i, j| 1.0 / (1.0 + i as f64 + j as f64) + if i == j { 2.0 } else { 0.0 });
        let e = jacobi_eigen(&a).unwrap();
        let lam = DenseMatrix::from_fn(n, n, |i, j| if i == j { e.values[i] } else { 0.0 });
        let back = e.vectors.matmul(&lam).matmul(&e.vectors.transpose());
        for i in 0..n {
            for j in 0..n {
                assert!((back[(i, j)] - a[(i, j)]).abs() < 1e-12);
            }
        }
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn generalized_diagonal_pencil() {
        let a = DenseMatrix::from_rows(&[&[1.0, 0.0], &[0.0, 2.0]]);
        let e = generalized_eigen(&a, &a).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-15 && (e.values[1] - 1.0).abs() < 1e-15);

        let a = DenseMatrix::from_rows(&[&[2.0, 1.0], &[1.0, 3.0]]);
        let b = DenseMatrix::from_rows(&[&[2.0, 0.5], &[0.5, 1.0]]);
        let e = generalized_eigen(&a, &b).unwrap();
        let vtbv = e.vectors.transpose().matmul(&b).matmul(&e.vectors);
        for i in 0..2 {
            for j in 0..2 {
                let delta = if i == j { 1.0 } else { 0.0 };
                assert!((vtbv[(i, j)] - delta).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn cholesky_reports_bad_pivot() {
        let mut a = DenseMatrix::from_rows(&[&[1.0, 2.0], &[2.0, 1.0]]);
        match cholesky_in_place(&mut a) {
            Err(Error::NotPositiveDefinite { index, pivot }) => {
                assert_eq!(index, 1);
                assert_eq!(pivot, -3.0);
            }
            other => panic!("unexpected {other:?}"),
        }
        let mut b = DenseMatrix::from_rows(&[&[4.0, 2.0], &[2.0, 5.0]]);
        cholesky_in_place(&mut b).unwrap();
        assert_eq!(b, DenseMatrix::from_rows(&[&[2.0, 0.0], &[1.0, 2.0]]));
    }
}
