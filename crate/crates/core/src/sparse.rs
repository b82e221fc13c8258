//! Compressed-row storage for symmetric matrices.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::Serialize;

/// Symmetric matrix in CSR form, both triangles stored.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetricSparse {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    values: Vec<f64>,
}

impl SymmetricSparse {
    /// Builds from accumulated `(row, col) -> value` entries, replacing each
    /// off-diagonal pair by its average so the result is exactly symmetric.
    pub fn from_entries(n: usize, entries: &BTreeMap<(usize, usize), f64>) -> Self {
        let mut sym: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for (&(r, c), &v) in entries {
            assert!(r < n && c < n, "entry ({r}, {c}) outside {n}x{n}");
            if r == c {
                sym.insert((r, c), v);
            } else {
                let mirror = entries.get(&(c, r)).copied().unwrap_or(0.0);
                let avg = 0.5 * (v + mirror);
                sym.insert((r, c), avg);
                sym.insert((c, r), avg);
            }
        }
        let mut row_ptr = vec![0; n + 1];
        let mut cols = Vec::with_capacity(sym.len());
        let mut values = Vec::with_capacity(sym.len());
        for (&(r, c), &v) in &sym {
            row_ptr[r + 1] += 1;
            cols.push(c);
            values.push(v);
        }
        for r in 0..n {
            row_ptr[r + 1] += row_ptr[r];
        }
        SymmetricSparse { n, row_ptr, cols, values }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        let range = self.row_ptr[row]..self.row_ptr[row + 1];
        match self.cols[range.clone()].binary_search(&col) {
            Ok(pos) => self.values[range.start + pos],
            Err(_) => 0.0,
        }
    }

    /// Nonzero entries as `(row, col, value)` in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |r| {
            (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (r, self.cols[k], self.values[k]))
        })
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|r| {
                (self.row_ptr[r]..self.row_ptr[r + 1])
                    .map(|k| self.values[k] * x[self.cols[k]])
                    .sum()
            })
            .collect()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for (r, c, v) in self.iter() {
            m[(r, c)] = v;
        }
        m
    }

    /// Bitwise symmetry of the stored values.
    pub fn is_symmetric(&self) -> bool {
        self.iter().all(|(r, c, v)| self.get(c, r).to_bits() == v.to_bits())
    }

    /// Smallest `-A[a][a] - Σ_{b≠a} |A[a][b]|` over rows.
    pub fn min_row_dominance(&self) -> f64 {
        (0..self.n)
            .map(|r| {
                let mut diag = 0.0;
                let mut off = 0.0;
                for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                    if self.cols[k] == r {
                        diag = self.values[k];
                    } else {
                        off += self.values[k].abs();
                    }
                }
                -diag - off
            })
            .fold(f64::INFINITY, f64::min)
    }
}
