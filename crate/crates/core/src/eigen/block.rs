//! Column-major blocks of vectors for the iterative solver.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{CsrMatrix, DenseMatrix};

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Block {
    n: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Block {
    pub fn zeros(n: usize, cols: usize) -> Self {
        Block {
            n,
            cols,
            data: vec![0.0; n * cols],
        }
    }

    pub fn empty(n: usize) -> Self {
        Self::zeros(n, 0)
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn col(&self, j: usize) -> &[f64] {
        &self.data[j * self.n..(j + 1) * self.n]
    }

    pub fn col_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.data[j * self.n..(j + 1) * self.n]
    }

    pub fn push_col(&mut self, v: &[f64]) {
        debug_assert_eq!(v.len(), self.n);
        self.data.extend_from_slice(v);
        self.cols += 1;
    }

    pub fn select(&self, idx: &[usize]) -> Block {
        let mut out = Block::empty(self.n);
        for &j in idx {
            out.push_col(self.col(j));
        }
        out
    }

    pub fn hcat(&self, other: &Block) -> Block {
        let mut out = self.clone();
        out.data.extend_from_slice(&other.data);
        out.cols += other.cols;
        out
    }

    /// `A * self`.
    pub fn apply(&self, a: &CsrMatrix) -> Block {
        let mut out = Block::zeros(self.n, self.cols);
        for j in 0..self.cols {
            let (src, dst) = (j * self.n, (j + 1) * self.n);
            a.mul_vec_into(&self.data[src..dst], &mut out.data[src..dst]);
        }
        out
    }

    /// `self^T other`.
    pub fn gram(&self, other: &Block) -> DenseMatrix {
        DenseMatrix::from_fn(self.cols, other.cols, |i, j| dot(self.col(i), other.col(j)))
    }

    /// `self * c`, with `c` of shape `cols x m`.
    pub fn combine(&self, c: &DenseMatrix) -> Block {
        debug_assert_eq!(c.rows(), self.cols);
        let mut out = Block::zeros(self.n, c.cols());
        for j in 0..c.cols() {
            let dst = &mut out.data[j * self.n..(j + 1) * self.n];
            for i in 0..self.cols {
                let w = c[(i, j)];
                if w == 0.0 {
                    continue;
                }
                for (d, s) in dst.iter_mut().zip(self.col(i)) {
                    *d += w * s;
                }
            }
        }
        out
    }

    /// `self -= other * c`.
    pub fn sub_product(&mut self, other: &Block, c: &DenseMatrix) {
        let delta = other.combine(c);
        for (d, s) in self.data.iter_mut().zip(&delta.data) {
            *d -= s;
        }
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combine_and_gram() {
        let mut b = Block::empty(3);
        b.push_col(&[1.0, 0.0, 0.0]);
        b.push_col(&[0.0, 2.0, 0.0]);
        let c = DenseMatrix::from_rows(&[&[1.0, 1.0], &[1.0, -1.0]]);
        let x = b.combine(&c);
        assert_eq!(x.col(0), &[1.0, 2.0, 0.0]);
        assert_eq!(x.col(1), &[1.0, -2.0, 0.0]);
        let g = x.gram(&x);
        assert_eq!(g[(0, 1)], -3.0);
        assert_eq!(g[(1, 1)], 5.0);
        let mut y = x.clone();
        y.sub_product(&b, &c);
        assert!(y.data.iter().all(|&v| v == 0.0));
        assert_eq!(b.hcat(&x).select(&[3]).col(0), &[1.0, -2.0, 0.0]);
    }
}
