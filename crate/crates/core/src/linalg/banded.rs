use alloc::vec;
use alloc::vec::Vec;

use super::CsrMatrix;
use crate::math;
use crate::{Error, Result};

/// Cholesky factor of a symmetric positive definite band matrix, taken from
/// the diagonal block `start..end` of a sparse matrix.
#[derive(Debug, Clone)]
pub struct BandCholesky {
    n: usize,
    width: usize,
    // Row i holds L[i][i - width ..= i].
    band: Vec<f64>,
}

impl BandCholesky {
    pub fn factor_block(a: &CsrMatrix, start: usize, end: usize) -> Result<Self> {
        let n = end - start;
        let width = a.bandwidth_within(start, end);
        let stride = width + 1;
        let mut band = vec![0.0; n * stride];
        for i in 0..n {
            for (j, v) in a.row(start + i) {
                if j < start + i.saturating_sub(width) || j > start + i {
                    continue;
                }
                let lj = j - start;
                band[i * stride + (lj + width - i)] = v;
            }
        }
        let at = |band: &[f64], i: usize, j: usize| band[i * stride + (j + width - i)];
        for i in 0..n {
            let lo = i.saturating_sub(width);
            for j in lo..=i {
                let mut s = at(&band, i, j);
                let k0 = lo.max(j.saturating_sub(width));
                for k in k0..j {
                    s -= at(&band, i, k) * at(&band, j, k);
                }
                if i == j {
                    if !(s > 0.0) || !s.is_finite() {
                        return Err(Error::NotPositiveDefinite {
                            index: start + i,
                            pivot: s,
                        });
                    }
                    band[i * stride + width] = math::sqrt(s);
                } else {
                    band[i * stride + (j + width - i)] = s / at(&band, j, j);
                }
            }
        }
        Ok(BandCholesky { n, width, band })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Solve `A x = b` in place.
    #[allow(clippy::needless_range_loop)]
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let w = self.width;
        let stride = w + 1;
        let n = self.n;
        for i in 0..n {
            let mut s = b[i];
            for k in i.saturating_sub(w)..i {
                s -= self.band[i * stride + (k + w - i)] * b[k];
            }
            b[i] = s / self.band[i * stride + w];
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            for k in i + 1..n.min(i + w + 1) {
                s -= self.band[k * stride + (i + w - k)] * b[k];
            }
            b[i] = s / self.band[i * stride + w];
        }
    }
}
