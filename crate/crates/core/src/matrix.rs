//! Small dense matrices over the rationals.
//!
//! Connecting maps, induced maps and stability checks all live in homology
//! bases, which stay small; plain Gaussian elimination is plenty.

use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::scalar::Q;

/// Dense row-major rational matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMat {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl QMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        QMat {
            rows,
            cols,
            data: alloc::vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Q::one();
        }
        m
    }

    /// Builds a matrix column by column.
    pub fn from_columns(rows: usize, columns: &[Vec<Q>]) -> Self {
        let cols = columns.len();
        let mut m = Self::zero(rows, cols);
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, v) in col.iter().enumerate() {
                *m.at_mut(i, j) = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Q {
        &mut self.data[i * self.cols + j]
    }

    pub fn mul(&self, other: &QMat) -> QMat {
        assert_eq!(self.cols, other.rows);
        let mut out = QMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if !b.is_zero() {
                        *out.at_mut(i, j) += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Q {
        assert!(self.is_square());
        let mut t = Q::zero();
        for i in 0..self.rows {
            t += self.at(i, i);
        }
        t
    }

    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        let mut rank = 0;
        for col in 0..work.cols {
            let pivot = (rank..work.rows).find(|&r| !work.at(r, col).is_zero());
            let Some(p) = pivot else { continue };
            work.swap_rows(p, rank);
            let inv = work.at(rank, col).clone();
            for j in col..work.cols {
                *work.at_mut(rank, j) /= &inv;
            }
            for r in 0..work.rows {
                if r != rank && !work.at(r, col).is_zero() {
                    let f = work.at(r, col).clone();
                    for j in col..work.cols {
                        let delta = &f * work.at(rank, j);
                        *work.at_mut(r, j) -= delta;
                    }
                }
            }
            rank += 1;
            if rank == work.rows {
                break;
            }
        }
        rank
    }

    pub fn determinant(&self) -> Q {
        assert!(self.is_square());
        let n = self.rows;
        let mut work = self.clone();
        let mut det = Q::one();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !work.at(r, col).is_zero());
            let Some(p) = pivot else { return Q::zero() };
            if p != col {
                work.swap_rows(p, col);
                det = -det;
            }
            let pv = work.at(col, col).clone();
            det *= &pv;
            for r in (col + 1)..n {
                if work.at(r, col).is_zero() {
                    continue;
                }
                let f = work.at(r, col) / &pv;
                for j in col..n {
                    let delta = &f * work.at(col, j);
                    *work.at_mut(r, j) -= delta;
                }
            }
        }
        det
    }

    /// Exact inverse; `None` when singular.
    pub fn inverse(&self) -> Option<QMat> {
        assert!(self.is_square());
        let n = self.rows;
        let mut work = self.clone();
        let mut inv = QMat::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !work.at(r, col).is_zero())?;
            work.swap_rows(pivot, col);
            inv.swap_rows(pivot, col);
            let pv = work.at(col, col).clone();
            for j in 0..n {
                *work.at_mut(col, j) /= &pv;
                *inv.at_mut(col, j) /= &pv;
            }
            for r in 0..n {
                if r != col && !work.at(r, col).is_zero() {
                    let f = work.at(r, col).clone();
                    for j in 0..n {
                        let dw = &f * work.at(col, j);
                        *work.at_mut(r, j) -= dw;
                        let di = &f * inv.at(col, j);
                        *inv.at_mut(r, j) -= di;
                    }
                }
            }
        }
        Some(inv)
    }

    pub fn is_identity(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                let want_one = i == j;
                if want_one != self.at(i, j).is_one() || (!want_one && !self.at(i, j).is_zero()) {
                    return false;
                }
            }
        }
        true
    }

    /// Largest absolute row sum, an upper bound for the spectral radius.
    pub fn max_row_sum(&self) -> Q {
        let mut best = Q::zero();
        for i in 0..self.rows {
            let mut sum = Q::zero();
            for j in 0..self.cols {
                sum += self.at(i, j).abs();
            }
            if sum > best {
                best = sum;
            }
        }
        best
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}
