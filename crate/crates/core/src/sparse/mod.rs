//! Symmetric sparse operators in compressed-row form and the smallest-eigenpair
//! solver built on them.

mod eigen;
mod evec;

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use eigen::{ground_state, smallest_eigenpairs, SolverInfo, SolverOptions, Spectrum, SpectrumSummary};
pub use evec::{
    decode_eigenvectors, encode_eigenvectors, read_eigenvectors, write_eigenvectors,
    EigenvectorBlock, EVEC_MAGIC,
};

/// Rows above this size are multiplied in parallel. Each row is reduced in a
/// fixed order, so results do not depend on the thread count.
const PAR_MATVEC_MIN_ROWS: usize = 16_384;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
}

impl std::fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoundaryCondition::Dirichlet => write!(f, "dirichlet"),
            BoundaryCondition::Neumann => write!(f, "neumann"),
        }
    }
}

/// Symmetric matrix storing the full pattern (both triangles) in CSR layout.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSymOperator {
    n: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
    values: Vec<f64>,
    diag: Vec<f64>,
    h: f64,
    bc: Option<BoundaryCondition>,
}

impl SparseSymOperator {
    /// Builds from per-row `(column, value)` lists. Duplicate entries are
    /// summed. Fails unless the result is symmetric to 1e-14 relative.
    pub fn from_rows(rows: Vec<Vec<(usize, f64)>>, h: f64) -> Result<Self> {
        let n = rows.len();
        let mut row_offsets = Vec::with_capacity(n + 1);
        let mut col_indices = Vec::new();
        let mut values = Vec::new();
        let mut diag = vec![0.0; n];
        row_offsets.push(0);
        for (i, mut row) in rows.into_iter().enumerate() {
            row.sort_by_key(|&(j, _)| j);
            let start = col_indices.len();
            for (j, v) in row {
                if j >= n {
                    return Err(Error::DimensionMismatch { expected: n, got: j + 1 });
                }
                if col_indices.len() > start && *col_indices.last().unwrap() == j {
                    *values.last_mut().unwrap() += v;
                } else {
                    col_indices.push(j);
                    values.push(v);
                }
            }
            for p in start..col_indices.len() {
                if col_indices[p] == i {
                    diag[i] = values[p];
                }
            }
            row_offsets.push(col_indices.len());
        }
        let op = SparseSymOperator {
            n,
            row_offsets,
            col_indices,
            values,
            diag,
            h,
            bc: None,
        };
        op.check_symmetric(1e-14)?;
        Ok(op)
    }

    pub fn identity(n: usize) -> Self {
        SparseSymOperator {
            n,
            row_offsets: (0..=n).collect(),
            col_indices: (0..n).collect(),
            values: vec![1.0; n],
            diag: vec![1.0; n],
            h: 1.0,
            bc: None,
        }
    }

    pub fn with_bc(mut self, bc: BoundaryCondition) -> Self {
        self.bc = Some(bc);
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Grid spacing of the discretization this operator came from.
    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn bc(&self) -> Option<BoundaryCondition> {
        self.bc
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn col_indices(&self) -> &[usize] {
        &self.col_indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_offsets[i]..self.row_offsets[i + 1];
        self.col_indices[r.clone()]
            .iter()
            .copied()
            .zip(self.values[r].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let r = self.row_offsets[i]..self.row_offsets[i + 1];
        match self.col_indices[r.clone()].binary_search(&j) {
            Ok(p) => self.values[r.start + p],
            Err(_) => 0.0,
        }
    }

    fn check_symmetric(&self, rel_tol: f64) -> Result<()> {
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                let w = self.get(j, i);
                let has = self.col_indices[self.row_offsets[j]..self.row_offsets[j + 1]]
                    .binary_search(&i)
                    .is_ok();
                if !has || (v - w).abs() > rel_tol * v.abs().max(w.abs()) {
                    return Err(Error::InvalidParameter(format!(
                        "operator not symmetric at ({i},{j}): {v} vs {w}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_symmetric(&self, rel_tol: f64) -> bool {
        self.check_symmetric(rel_tol).is_ok()
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        let mut y = vec![0.0; self.n];
        self.matvec_into(x, &mut y);
        Ok(y)
    }

    pub(crate) fn matvec_into(&self, x: &[f64], y: &mut [f64]) {
        let row = |i: usize| -> f64 {
            let mut s = 0.0;
            for p in self.row_offsets[i]..self.row_offsets[i + 1] {
                s += self.values[p] * x[self.col_indices[p]];
            }
            s
        };
        if self.n >= PAR_MATVEC_MIN_ROWS {
            y.par_iter_mut().enumerate().for_each(|(i, yi)| *yi = row(i));
        } else {
            for (i, yi) in y.iter_mut().enumerate() {
                *yi = row(i);
            }
        }
    }

    /// `⟨Au,u⟩/⟨u,u⟩`. Grid-measure factors cancel.
    pub fn rayleigh_quotient(&self, u: &[f64]) -> Result<f64> {
        let au = self.matvec(u)?;
        let uu: f64 = u.iter().map(|v| v * v).sum();
        if uu == 0.0 {
            return Err(Error::ZeroVector);
        }
        let uau: f64 = au.iter().zip(u).map(|(a, b)| a * b).sum();
        Ok(uau / uu)
    }

    /// Principal submatrix on `indices` (kept in the given order).
    pub fn principal_submatrix(&self, indices: &[usize]) -> Self {
        let mut local = vec![usize::MAX; self.n];
        for (k, &i) in indices.iter().enumerate() {
            local[i] = k;
        }
        let mut row_offsets = Vec::with_capacity(indices.len() + 1);
        let mut col_indices = Vec::new();
        let mut values = Vec::new();
        let mut diag = Vec::with_capacity(indices.len());
        row_offsets.push(0);
        for &i in indices {
            let mut row: Vec<(usize, f64)> = self
                .row(i)
                .filter(|&(j, _)| local[j] != usize::MAX)
                .map(|(j, v)| (local[j], v))
                .collect();
            row.sort_by_key(|&(j, _)| j);
            for (j, v) in row {
                col_indices.push(j);
                values.push(v);
            }
            diag.push(self.diag[i]);
            row_offsets.push(col_indices.len());
        }
        SparseSymOperator {
            n: indices.len(),
            row_offsets,
            col_indices,
            values,
            diag,
            h: self.h,
            bc: self.bc,
        }
    }

    /// Row-major dense copy; intended for small matrices.
    pub fn to_dense(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.n * self.n];
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                d[i * self.n + j] = v;
            }
        }
        d
    }

    /// Matrix Market coordinate text (symmetric, lower triangle, 1-based).
    pub fn to_matrix_market(&self) -> String {
        let lower: Vec<(usize, usize, f64)> = (0..self.n)
            .flat_map(|i| self.row(i).filter(move |&(j, _)| j <= i).map(move |(j, v)| (i, j, v)))
            .collect();
        let mut s = String::from("%%MatrixMarket matrix coordinate real symmetric\n");
        let _ = writeln!(s, "{} {} {}", self.n, self.n, lower.len());
        for (i, j, v) in lower {
            let _ = writeln!(s, "{} {} {:.17e}", i + 1, j + 1, v);
        }
        s
    }
}
