//! Eigenvalues of a real symmetric matrix, values only.
//!
//! Householder reduction to tridiagonal form followed by implicit-shift QL
//! on the (diagonal, subdiagonal) pair. Neither stage accumulates the
//! transforms, which keeps the Gram-matrix spectrum path at roughly a third
//! of the cost of a full decomposition.

use alloc::vec;
use alloc::vec::Vec;

use crate::matrix::DenseMatrix;
use crate::{Error, Result};

/// Eigenvalues of a symmetric matrix, unsorted. Only the lower triangle of
/// the input is read.
pub(crate) fn symmetric_eigenvalues(a: &DenseMatrix) -> Result<Vec<f64>> {
    debug_assert_eq!(a.rows(), a.cols());
    let n = a.rows();
    let mut work = a.entries().to_vec();
    let mut d = vec![0.0f64; n];
    let mut e = vec![0.0f64; n];
    tridiagonalize(&mut work, n, &mut e);
    for (i, di) in d.iter_mut().enumerate() {
        *di = work[i * n + i];
    }
    // Shift the subdiagonal so e[i] couples d[i] and d[i+1].
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    tridiagonal_eigenvalues(&mut d, &mut e)?;
    Ok(d)
}

/// In-place Householder reduction of the lower triangle of `a` (n x n,
/// row-major). On return the diagonal of `a` holds the tridiagonal diagonal
/// and `e[1..]` the subdiagonal (`e[i]` couples indices `i-1` and `i`).
fn tridiagonalize(a: &mut [f64], n: usize, e: &mut [f64]) {
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let scale: f64 = a[i * n..i * n + i].iter().map(|v| v.abs()).sum();
            if scale == 0.0 {
                e[i] = a[i * n + l];
            } else {
                for k in 0..i {
                    a[i * n + k] /= scale;
                    h += a[i * n + k] * a[i * n + k];
                }
                let mut f = a[i * n + l];
                let g = if f >= 0.0 { -libm::sqrt(h) } else { libm::sqrt(h) };
                e[i] = scale * g;
                h -= f * g;
                a[i * n + l] = f - g;
                f = 0.0;
                for j in 0..i {
                    // p = A u / h, using only the lower triangle.
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += a[j * n + k] * a[i * n + k];
                    }
                    for k in (j + 1)..i {
                        g += a[k * n + j] * a[i * n + k];
                    }
                    e[j] = g / h;
                    f += e[j] * a[i * n + j];
                }
                // q = p - (u^T p / 2h) u, then A <- A - u q^T - q u^T.
                let hh = f / (h + h);
                for j in 0..i {
                    let fj = a[i * n + j];
                    let gj = e[j] - hh * fj;
                    e[j] = gj;
                    for k in 0..=j {
                        a[j * n + k] -= fj * e[k] + gj * a[i * n + k];
                    }
                }
            }
        } else {
            e[i] = a[i * n + l];
        }
    }
}

/// Implicit-shift QL iteration on a symmetric tridiagonal matrix. `d` holds
/// the diagonal, `e[i]` couples `d[i]` and `d[i+1]`, `e[n-1]` is scratch.
/// Eigenvalues land in `d`, unsorted.
fn tridiagonal_eigenvalues(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n == 1 {
        return Ok(());
    }
    for l in 0..n {
        let mut iter = 0;
        loop {
            // First index m >= l whose coupling is negligible.
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 50 {
                return Err(Error::Numeric("tridiagonal QL did not converge"));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = libm::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + libm::copysign(r, g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = libm::hypot(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                f = (d[i] - g) * s + 2.0 * c * b;
                p = s * f;
                d[i + 1] = g + p;
                g = c * f - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{generate, GaussianSpec};
    use crate::linalg::{frobenius_norm, gram_left};
    use crate::matrix::Shape;

    fn sorted(mut v: Vec<f64>) -> Vec<f64> {
        v.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    #[test]
    fn diagonal_matrix() {
        let m = DenseMatrix::from_vec(3, 3, vec![5.0, 0.0, 0.0, 0.0, -2.0, 0.0, 0.0, 0.0, 1.0])
            .unwrap();
        let eig = sorted(symmetric_eigenvalues(&m).unwrap());
        let want = [-2.0, 1.0, 5.0];
        for (a, b) in eig.iter().zip(&want) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn two_by_two_known() {
        // [[2,1],[1,2]] has eigenvalues 1 and 3.
        let m = DenseMatrix::from_vec(2, 2, vec![2.0, 1.0, 1.0, 2.0]).unwrap();
        let eig = sorted(symmetric_eigenvalues(&m).unwrap());
        assert!((eig[0] - 1.0).abs() < 1e-14);
        assert!((eig[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn one_by_one() {
        let m = DenseMatrix::from_vec(1, 1, vec![7.0]).unwrap();
        assert_eq!(symmetric_eigenvalues(&m).unwrap(), vec![7.0]);
    }

    #[test]
    fn trace_and_frobenius_identities() {
        for seed in 0..5u64 {
            let g = generate(&GaussianSpec::standard(Shape::square(48).unwrap(), seed));
            let gram = gram_left(&g);
            let eig = symmetric_eigenvalues(&gram).unwrap();
            let trace: f64 = (0..48).map(|i| gram.get(i, i)).sum();
            let eig_sum: f64 = eig.iter().sum();
            assert!(
                (trace - eig_sum).abs() <= 1e-10 * trace.abs().max(1.0),
                "trace {trace} vs eigenvalue sum {eig_sum}"
            );
            let fro2 = frobenius_norm(&gram).powi(2);
            let eig_sq: f64 = eig.iter().map(|l| l * l).sum();
            assert!((fro2 - eig_sq).abs() <= 1e-9 * fro2.max(1.0));
        }
    }
}
