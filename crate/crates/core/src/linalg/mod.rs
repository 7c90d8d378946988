//! Dense kernels: multiplication, Frobenius norms, singular values.
//!
//! Two routes to a spectrum are provided on purpose. [`singular_values`] is
//! the fast values-only path (eigenvalues of the Gram matrix via Householder
//! tridiagonalization and implicit-shift QL); [`svd`] is a one-sided Jacobi
//! decomposition that also returns the singular vectors and carries the
//! accuracy contract:
//!
//! - `||U^T U - I||_max <= 1e-10` and `||V^T V - I||_max <= 1e-10`,
//! - `||A - U diag(s) V^T||_F <= 1e-8 * ||A||_F`.
//!
//! The two routes agree to `1e-10 * s_max` on the sizes we test, which is
//! what licenses using the fast path everywhere spectra are consumed in bulk.

mod jacobi_svd;
mod sym_eigen;

use alloc::format;
use alloc::vec::Vec;

use crate::matrix::DenseMatrix;
use crate::{Error, Result};

pub use jacobi_svd::{svd, SvdResult};

/// Sorted singular values of one matrix, largest first.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    /// Sorts descending and validates: finite, non-negative.
    pub fn from_unsorted(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Config("spectrum must be non-empty".into()));
        }
        if !values.iter().all(|v| v.is_finite() && *v >= 0.0) {
            return Err(Error::NonFinite);
        }
        values.sort_unstable_by(|a, b| b.partial_cmp(a).unwrap());
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.values[0]
    }

    pub fn min(&self) -> f64 {
        *self.values.last().unwrap()
    }

    /// Median with the usual midpoint convention for even lengths.
    pub fn median(&self) -> f64 {
        let n = self.values.len();
        if n % 2 == 1 {
            self.values[n / 2]
        } else {
            0.5 * (self.values[n / 2 - 1] + self.values[n / 2])
        }
    }

    /// Fraction of values strictly below `threshold`.
    pub fn tail_fraction(&self, threshold: f64) -> f64 {
        let below = self.values.iter().filter(|v| **v < threshold).count();
        below as f64 / self.values.len() as f64
    }

    /// Fraction of values inside the closed interval `[lo, hi]`.
    pub fn band_fraction(&self, lo: f64, hi: f64) -> f64 {
        let inside = self.values.iter().filter(|v| **v >= lo && **v <= hi).count();
        inside as f64 / self.values.len() as f64
    }
}

/// Sum of squares with a fixed 4-accumulator order: deterministic, and the
/// error grows like the tree depth rather than the element count.
pub(crate) fn sum_of_squares(values: &[f64]) -> f64 {
    let mut acc = [0.0f64; 4];
    let mut chunks = values.chunks_exact(4);
    for c in &mut chunks {
        acc[0] += c[0] * c[0];
        acc[1] += c[1] * c[1];
        acc[2] += c[2] * c[2];
        acc[3] += c[3] * c[3];
    }
    let mut tail = 0.0;
    for v in chunks.remainder() {
        tail += v * v;
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

pub(crate) fn dot(x: &[f64], y: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    let mut acc = [0.0f64; 4];
    let mut xc = x.chunks_exact(4);
    let mut yc = y.chunks_exact(4);
    for (a, b) in (&mut xc).zip(&mut yc) {
        acc[0] += a[0] * b[0];
        acc[1] += a[1] * b[1];
        acc[2] += a[2] * b[2];
        acc[3] += a[3] * b[3];
    }
    let mut tail = 0.0;
    for (a, b) in xc.remainder().iter().zip(yc.remainder()) {
        tail += a * b;
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

/// Square root of the sum of squared entries.
pub fn frobenius_norm(m: &DenseMatrix) -> f64 {
    libm::sqrt(sum_of_squares(m.entries()))
}

/// Divides a matrix by its Frobenius norm, which pins all its singular
/// values into `[0, 1]`. The zero matrix has no direction to keep, so it is
/// rejected rather than silently returned.
pub fn normalize_frobenius(m: &DenseMatrix) -> Result<DenseMatrix> {
    let norm = frobenius_norm(m);
    if norm == 0.0 {
        return Err(Error::DegenerateInput("cannot normalize the zero matrix"));
    }
    Ok(m.scale(1.0 / norm))
}

/// Standard dense product `A * B`.
pub fn matmul(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    if a.cols() != b.rows() {
        return Err(Error::DimensionMismatch {
            expected: (a.cols(), b.cols()),
            found: (b.rows(), b.cols()),
        });
    }
    let (m, n) = (a.rows(), b.cols());
    let mut out = alloc::vec![0.0f64; m * n];
    for i in 0..m {
        let a_row = a.row(i);
        let c_row = &mut out[i * n..(i + 1) * n];
        for (l, &a_il) in a_row.iter().enumerate() {
            let b_row = &b.entries()[l * n..(l + 1) * n];
            for (c, &bv) in c_row.iter_mut().zip(b_row) {
                *c += a_il * bv;
            }
        }
    }
    Ok(DenseMatrix::from_raw(m, n, out))
}

/// `M * M^T`, exploiting symmetry; `rows x rows`.
pub(crate) fn gram_right(m: &DenseMatrix) -> DenseMatrix {
    let r = m.rows();
    let mut out = alloc::vec![0.0f64; r * r];
    for i in 0..r {
        let ri = m.row(i);
        for j in i..r {
            let v = dot(ri, m.row(j));
            out[i * r + j] = v;
            out[j * r + i] = v;
        }
    }
    DenseMatrix::from_raw(r, r, out)
}

/// `M^T * M`, exploiting symmetry; `cols x cols`.
pub(crate) fn gram_left(m: &DenseMatrix) -> DenseMatrix {
    // Work on the transpose so the dot kernel sees contiguous rows.
    gram_right(&m.transpose())
}

/// `||M^T M - I||_F / sqrt(cols)`: zero exactly when the columns are
/// orthonormal, and 1 for the zero matrix.
pub fn orthogonality_residual(m: &DenseMatrix) -> Result<f64> {
    if m.rows() < m.cols() {
        return Err(Error::Config(format!(
            "orthogonality residual needs a tall matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let gram = gram_left(m);
    Ok(residual_from_gram(&gram))
}

/// Residual computed from an already-formed Gram matrix `M^T M`.
pub(crate) fn residual_from_gram(gram: &DenseMatrix) -> f64 {
    let n = gram.rows();
    let mut sum = 0.0;
    for i in 0..n {
        let row = gram.row(i);
        for (j, &v) in row.iter().enumerate() {
            let d = if i == j { v - 1.0 } else { v };
            sum += d * d;
        }
    }
    libm::sqrt(sum / n as f64)
}

/// Singular values via eigenvalues of the Gram matrix (the values-only fast
/// path). Wide inputs are transposed first; the spectrum has
/// `min(rows, cols)` entries either way.
pub fn singular_values(m: &DenseMatrix) -> Result<Spectrum> {
    let gram = if m.rows() >= m.cols() {
        gram_left(m)
    } else {
        gram_right(m)
    };
    spectrum_from_gram(&gram)
}

/// Eigenvalues of a Gram matrix, clamped at zero and square-rooted.
pub(crate) fn spectrum_from_gram(gram: &DenseMatrix) -> Result<Spectrum> {
    let eigen = sym_eigen::symmetric_eigenvalues(gram)?;
    let values = eigen
        .into_iter()
        .map(|l| libm::sqrt(l.max(0.0)))
        .collect();
    Spectrum::from_unsorted(values)
}
