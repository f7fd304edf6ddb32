use alloc::vec;
use alloc::vec::Vec;

use super::DenseMatrix;

/// Coordinate-format accumulator. Duplicate entries are summed when the
/// matrix is compressed, in the order they were pushed.
#[derive(Debug, Clone)]
pub struct TripletBuilder {
    n: usize,
    entries: Vec<(usize, usize, f64)>,
}

impl TripletBuilder {
    pub fn new(n: usize) -> Self {
        TripletBuilder {
            n,
            entries: Vec::new(),
        }
    }

    pub fn with_capacity(n: usize, capacity: usize) -> Self {
        TripletBuilder {
            n,
            entries: Vec::with_capacity(capacity),
        }
    }

    #[inline]
    pub fn push(&mut self, row: usize, col: usize, value: f64) {
        debug_assert!(row < self.n && col < self.n);
        self.entries.push((row, col, value));
    }

    pub fn build(mut self) -> CsrMatrix {
        // Stable sort keeps the summation order of duplicates fixed.
        self.entries.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; self.n + 1];
        let mut cols = Vec::with_capacity(self.entries.len());
        let mut values: Vec<f64> = Vec::with_capacity(self.entries.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in self.entries {
            if last == Some((r, c)) {
                *values.last_mut().expect("entry exists") += v;
            } else {
                cols.push(c);
                values.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for i in 0..self.n {
            row_ptr[i + 1] += row_ptr[i];
        }
        CsrMatrix {
            n: self.n,
            row_ptr,
            cols,
            values,
        }
    }
}

/// Square matrix in compressed sparse row form with sorted column indices.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    pub fn from_dense(a: &DenseMatrix) -> Self {
        let n = a.rows();
        let mut b = TripletBuilder::new(n);
        for i in 0..n {
            for j in 0..n {
                let v = a[(i, j)];
                if v != 0.0 {
                    b.push(i, j, v);
                }
            }
        }
        b.build()
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// `(column, value)` pairs of row `i`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[range.clone()]
            .iter()
            .copied()
            .zip(self.values[range].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.cols[range.clone()].binary_search(&j) {
            Ok(p) => self.values[range.start + p],
            Err(_) => 0.0,
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// `y = A x`.
    pub fn mul_vec_into(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate().take(self.n) {
            let mut acc = 0.0;
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.values[p] * x[self.cols[p]];
            }
            *yi = acc;
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.mul_vec_into(x, &mut y);
        y
    }

    /// `x^T A y`.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (i, xi) in x.iter().enumerate().take(self.n) {
            let mut row = 0.0;
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                row += self.values[p] * y[self.cols[p]];
            }
            acc += xi * row;
        }
        acc
    }

    /// `x^T A y` in double-double arithmetic. Products are split exactly
    /// with a fused multiply-add, so cancellation inside a row (as in a
    /// stiffness matrix applied to a smooth vector) costs no accuracy.
    pub fn bilinear_compensated(&self, x: &[f64], y: &[f64]) -> f64 {
        let mut acc = (0.0, 0.0);
        for (i, &xi) in x.iter().enumerate().take(self.n) {
            let mut row = (0.0, 0.0);
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                row = dd_add_product(row, self.values[p], y[self.cols[p]]);
            }
            acc = dd_add_product(acc, xi, row.0);
            acc = dd_add_product(acc, xi, row.1);
        }
        acc.0 + acc.1
    }

    /// Bit-exact symmetry of the stored entries.
    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| self.row(i).all(|(j, v)| self.get(j, i) == v))
    }

    /// Infinity norm (max absolute row sum).
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row(i).map(|(_, v)| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Largest `|i - j|` over stored entries inside `range x range`.
    pub fn bandwidth_within(&self, start: usize, end: usize) -> usize {
        let mut w = 0;
        for i in start..end {
            for (j, _) in self.row(i) {
                if (start..end).contains(&j) {
                    w = w.max(i.abs_diff(j));
                }
            }
        }
        w
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut a = DenseMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                a[(i, j)] = v;
            }
        }
        a
    }

    /// `alpha * self + beta * other` on the union pattern.
    pub fn linear_combination(&self, alpha: f64, other: &CsrMatrix, beta: f64) -> CsrMatrix {
        let mut b = TripletBuilder::with_capacity(self.n, self.nnz() + other.nnz());
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                b.push(i, j, alpha * v);
            }
            for (j, v) in other.row(i) {
                b.push(i, j, beta * v);
            }
        }
        b.build()
    }
}

/// `acc + a * b` with `acc` a double-double `(hi, lo)`.
#[inline]
pub(crate) fn dd_add_product(acc: (f64, f64), a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = libm::fma(a, b, -p);
    let s = acc.0 + p;
    let bb = s - acc.0;
    let err = (acc.0 - (s - bb)) + (p - bb);
    let lo = acc.1 + err + e;
    let hi = s + lo;
    (hi, lo - (hi - s))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicates_are_summed() {
        let mut b = TripletBuilder::new(3);
        b.push(0, 0, 1.0);
        b.push(2, 1, 4.0);
        b.push(0, 0, 2.0);
        b.push(1, 2, 4.0);
        let a = b.build();
        assert_eq!(a.get(0, 0), 3.0);
        assert_eq!(a.get(1, 1), 0.0);
        assert_eq!(a.nnz(), 3);
        assert!(a.is_symmetric());
        assert_eq!(a.mul_vec(&[1.0, 1.0, 1.0]), vec![3.0, 4.0, 4.0]);
        assert_eq!(a.bilinear(&[1.0, 1.0, 1.0], &[1.0, 1.0, 1.0]), 11.0);
        assert_eq!(a.bandwidth_within(0, 3), 1);
        assert_eq!(a.norm_inf(), 4.0);
    }
}
