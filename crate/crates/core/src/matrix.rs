//! Matrix dimensions and dense row-major storage.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Dimensions of a tall experiment matrix: `in_d` rows by `out_d` columns
/// with aspect ratio `gamma = out_d / in_d` in `(0, 1]`.
///
/// Wide matrices are handled by transposing at the boundary; singular values
/// are transpose-invariant, so nothing is lost.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Shape {
    in_d: usize,
    out_d: usize,
}

impl Shape {
    /// Builds a tall shape. Errors unless `1 <= out_d <= in_d`.
    pub fn new(in_d: usize, out_d: usize) -> Result<Self> {
        if in_d == 0 || out_d == 0 {
            return Err(Error::Config(format!(
                "shape dimensions must be positive, got {in_d}x{out_d}"
            )));
        }
        if out_d > in_d {
            return Err(Error::Config(format!(
                "shape must be tall (out_d <= in_d), got {in_d}x{out_d}; pass the transpose"
            )));
        }
        Ok(Self { in_d, out_d })
    }

    /// Square `n x n` shape.
    pub fn square(n: usize) -> Result<Self> {
        Self::new(n, n)
    }

    pub fn in_d(&self) -> usize {
        self.in_d
    }

    pub fn out_d(&self) -> usize {
        self.out_d
    }

    /// Aspect ratio `out_d / in_d`, in `(0, 1]` by construction.
    pub fn gamma(&self) -> f64 {
        self.out_d as f64 / self.in_d as f64
    }
}

/// Dense row-major matrix of 64-bit reals. All entries are finite.
///
/// Unlike [`Shape`], a `DenseMatrix` may be wide; tallness is only required
/// by the operations whose contracts say so.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
}

impl DenseMatrix {
    /// Wraps a row-major buffer. Errors on length mismatch or non-finite
    /// entries.
    pub fn from_vec(rows: usize, cols: usize, entries: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Config(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if entries.len() != rows * cols {
            return Err(Error::Config(format!(
                "entry buffer has length {}, expected {}",
                entries.len(),
                rows * cols
            )));
        }
        if !entries.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = 1.0;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// `(rows, cols)`.
    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        debug_assert!(row < self.rows && col < self.cols);
        self.entries[row * self.cols + col]
    }

    pub(crate) fn set(&mut self, row: usize, col: usize, value: f64) {
        debug_assert!(row < self.rows && col < self.cols);
        self.entries[row * self.cols + col] = value;
    }

    pub(crate) fn row(&self, row: usize) -> &[f64] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.entries[j * self.rows + i] = self.entries[i * self.cols + j];
            }
        }
        out
    }

    /// Entrywise scaling by a finite constant.
    pub fn scale(&self, factor: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|v| v * factor).collect(),
        }
    }

    /// Entrywise negation. Exact: each entry flips its sign bit.
    pub fn neg(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|v| -v).collect(),
        }
    }

    pub(crate) fn from_raw(rows: usize, cols: usize, entries: Vec<f64>) -> Self {
        debug_assert_eq!(entries.len(), rows * cols);
        Self { rows, cols, entries }
    }
}
