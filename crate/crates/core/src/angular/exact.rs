use num_traits::Zero;

use super::poly::{cq, cq_from_gauss, cq_zero, Cq};
use crate::clifford::GaussMatrix;

/// Dense matrix over `Q(i)`, row-major rows.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<Cq>>,
}

impl ExactMatrix {
    pub fn from_gauss(m: &GaussMatrix) -> Self {
        let d = m.dim();
        Self {
            rows: d,
            cols: d,
            data: (0..d)
                .map(|i| (0..d).map(|j| cq_from_gauss(m[(i, j)])).collect())
                .collect(),
        }
    }

    /// `self − k I`.
    pub fn shifted(&self, k: i64) -> Self {
        let mut out = self.clone();
        let s = cq(k, 0);
        for i in 0..self.rows.min(self.cols) {
            out.data[i][i] -= &s;
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Cq {
        &self.data[i][j]
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.data[r][col].is_zero()) else {
                continue;
            };
            self.data.swap(row, p);
            let inv = cq(1, 0) / self.data[row][col].clone();
            for v in self.data[row].iter_mut().skip(col) {
                if !v.is_zero() {
                    *v *= &inv;
                }
            }
            let pivot_row = self.data[row].clone();
            for (r, target) in self.data.iter_mut().enumerate() {
                if r == row || target[col].is_zero() {
                    continue;
                }
                let factor = target[col].clone();
                for (t, pv) in target.iter_mut().zip(&pivot_row).skip(col) {
                    if !pv.is_zero() {
                        *t -= &factor * pv;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }
}

/// Basis of `{v : A v = 0}`, one vector per free column, with a `1` in
/// that column.
pub fn nullspace(a: &ExactMatrix) -> Vec<Vec<Cq>> {
    let mut r = a.clone();
    let pivots = r.rref();
    let free: Vec<usize> = (0..a.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![cq_zero(); a.cols];
            v[f] = cq(1, 0);
            for (row, &pc) in pivots.iter().enumerate() {
                let e = &r.data[row][f];
                if !e.is_zero() {
                    v[pc] = -e.clone();
                }
            }
            v
        })
        .collect()
}
