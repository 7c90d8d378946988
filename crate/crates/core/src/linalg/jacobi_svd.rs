//! One-sided Jacobi singular value decomposition.
//!
//! Columns of the working matrix are orthogonalized pairwise with plane
//! rotations until every pair is numerically orthogonal; the rotations are
//! accumulated into `V`, the final column norms are the singular values, and
//! the normalized columns are `U`. Chosen over bidiagonalization for its
//! simplicity and excellent accuracy on small and medium dense matrices.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{dot, Spectrum};
use crate::matrix::DenseMatrix;
use crate::{Error, Result};

/// Thin decomposition `A = U diag(s) V^T` with `U: rows x k`,
/// `V: cols x k`, `k = min(rows, cols)`, and `s` sorted descending.
#[derive(Debug, Clone)]
pub struct SvdResult {
    pub u: DenseMatrix,
    pub s: Spectrum,
    pub v: DenseMatrix,
}

/// Relative threshold below which a column pair counts as orthogonal.
const ORTHO_TOL: f64 = 1e-14;
const MAX_SWEEPS: usize = 60;

/// Full singular value decomposition. Wide inputs are transposed internally
/// and the factors swapped back, so any dimensions are accepted.
pub fn svd(m: &DenseMatrix) -> Result<SvdResult> {
    if m.rows() >= m.cols() {
        svd_tall(m)
    } else {
        let r = svd_tall(&m.transpose())?;
        Ok(SvdResult {
            u: r.v,
            s: r.s,
            v: r.u,
        })
    }
}

fn svd_tall(a0: &DenseMatrix) -> Result<SvdResult> {
    let (m, n) = a0.dims();

    // Column-major working copies: rotations touch contiguous columns.
    let mut a = vec![0.0f64; m * n];
    for i in 0..m {
        for j in 0..n {
            a[j * m + i] = a0.get(i, j);
        }
    }
    let mut v = vec![0.0f64; n * n];
    for j in 0..n {
        v[j * n + j] = 1.0;
    }

    let mut col_sq = vec![0.0f64; n];
    let mut converged = false;
    for _sweep in 0..MAX_SWEEPS {
        // Fresh norms each sweep so incremental updates cannot drift.
        for j in 0..n {
            col_sq[j] = dot(&a[j * m..(j + 1) * m], &a[j * m..(j + 1) * m]);
        }
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let alpha = col_sq[p];
                let beta = col_sq[q];
                let denom = libm::sqrt(alpha * beta);
                if denom == 0.0 {
                    continue; // a zero column is orthogonal to everything
                }
                let gamma = {
                    let (head, tail) = a.split_at(q * m);
                    dot(&head[p * m..(p + 1) * m], &tail[..m])
                };
                if gamma.abs() <= ORTHO_TOL * denom {
                    continue;
                }
                // Jacobi rotation diagonalizing [[alpha, gamma], [gamma, beta]].
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + libm::sqrt(1.0 + zeta * zeta))
                } else {
                    -1.0 / (-zeta + libm::sqrt(1.0 + zeta * zeta))
                };
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = c * t;
                rotate_pair(&mut a, m, p, q, c, s);
                rotate_pair(&mut v, n, p, q, c, s);
                col_sq[p] = c * c * alpha - 2.0 * c * s * gamma + s * s * beta;
                col_sq[q] = s * s * alpha + 2.0 * c * s * gamma + c * c * beta;
                rotated = true;
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numeric("one-sided Jacobi SVD did not converge"));
    }

    // Singular values are the final column norms.
    let mut order: Vec<usize> = (0..n).collect();
    let sigma: Vec<f64> = (0..n)
        .map(|j| libm::sqrt(dot(&a[j * m..(j + 1) * m], &a[j * m..(j + 1) * m])))
        .collect();
    order.sort_by(|&i, &j| sigma[j].partial_cmp(&sigma[i]).unwrap());

    let sigma_max = sigma[order[0]];
    let cutoff = sigma_max * (m as f64) * f64::EPSILON;

    let mut u = DenseMatrix::zeros(m, n);
    let mut v_out = DenseMatrix::zeros(n, n);
    let mut s_sorted = Vec::with_capacity(n);
    let mut u_cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    for (rank, &j) in order.iter().enumerate() {
        s_sorted.push(sigma[j]);
        let col = if sigma[j] > cutoff && sigma[j] > 0.0 {
            a[j * m..(j + 1) * m].iter().map(|x| x / sigma[j]).collect()
        } else {
            complete_orthonormal(&u_cols, m)
        };
        for i in 0..m {
            u.set(i, rank, col[i]);
        }
        for i in 0..n {
            v_out.set(i, rank, v[j * n + i]);
        }
        u_cols.push(col);
    }

    Ok(SvdResult {
        u,
        s: Spectrum::from_unsorted(s_sorted)?,
        v: v_out,
    })
}

fn rotate_pair(data: &mut [f64], len: usize, p: usize, q: usize, c: f64, s: f64) {
    debug_assert!(p < q);
    let (head, tail) = data.split_at_mut(q * len);
    let cp = &mut head[p * len..(p + 1) * len];
    let cq = &mut tail[..len];
    for (ap, aq) in cp.iter_mut().zip(cq.iter_mut()) {
        let x = *ap;
        let y = *aq;
        *ap = c * x - s * y;
        *aq = s * x + c * y;
    }
}

/// Unit vector orthogonal to all of `existing`, built by Gram-Schmidt from
/// canonical basis vectors (reorthogonalized once). Used to fill the left
/// factor where a singular value is numerically zero.
fn complete_orthonormal(existing: &[Vec<f64>], m: usize) -> Vec<f64> {
    for k in 0..m {
        let mut cand = vec![0.0f64; m];
        cand[k] = 1.0;
        for _ in 0..2 {
            for col in existing {
                let proj = dot(&cand, col);
                for (c, e) in cand.iter_mut().zip(col) {
                    *c -= proj * e;
                }
            }
        }
        let norm = libm::sqrt(dot(&cand, &cand));
        if norm > 0.5 {
            for c in cand.iter_mut() {
                *c /= norm;
            }
            return cand;
        }
    }
    // Unreachable: m canonical vectors cannot all be in the span of fewer
    // than m orthonormal columns.
    vec![0.0; m]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{generate, GaussianSpec};
    use crate::linalg::{frobenius_norm, matmul, singular_values};
    use crate::matrix::Shape;

    fn max_abs_diff(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
        a.entries()
            .iter()
            .zip(b.entries())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    fn gram_identity_residual(m: &DenseMatrix) -> f64 {
        let g = matmul(&m.transpose(), m).unwrap();
        let mut worst = 0.0f64;
        for i in 0..g.rows() {
            for j in 0..g.cols() {
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g.get(i, j) - want).abs());
            }
        }
        worst
    }

    fn reconstruct(r: &SvdResult) -> DenseMatrix {
        let k = r.s.len();
        let mut us = r.u.clone();
        for i in 0..us.rows() {
            for j in 0..k {
                us.set(i, j, r.u.get(i, j) * r.s.values()[j]);
            }
        }
        matmul(&us, &r.v.transpose()).unwrap()
    }

    #[test]
    fn diagonal_recovery() {
        let m = DenseMatrix::from_vec(3, 3, vec![3.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 1.0])
            .unwrap();
        let r = svd(&m).unwrap();
        let want = [3.0, 2.0, 1.0];
        for (a, b) in r.s.values().iter().zip(&want) {
            assert!((a - b).abs() < 1e-14);
        }
        assert!(max_abs_diff(&reconstruct(&r), &m) < 1e-14);
    }

    #[test]
    fn orthogonal_matrix_has_unit_spectrum() {
        // Random orthogonal factor from the SVD of a Gaussian matrix.
        let g = generate(&GaussianSpec::standard(Shape::square(8).unwrap(), 31));
        let q = svd(&g).unwrap().u;
        let s = svd(&q).unwrap().s;
        for v in s.values() {
            assert!((v - 1.0).abs() <= 1e-10, "singular value {v}");
        }
    }

    #[test]
    fn construct_then_recover() {
        // Build U diag(0.9, 0.5, 0.1) V^T from seeded orthogonal factors and
        // recover the planted spectrum.
        let gu = generate(&GaussianSpec::standard(Shape::new(6, 3).unwrap(), 71));
        let gv = generate(&GaussianSpec::standard(Shape::square(3).unwrap(), 72));
        let u = svd(&gu).unwrap().u;
        let v = svd(&gv).unwrap().u;
        let mut ud = u.clone();
        let planted = [0.9, 0.5, 0.1];
        for i in 0..ud.rows() {
            for j in 0..3 {
                ud.set(i, j, u.get(i, j) * planted[j]);
            }
        }
        let m = matmul(&ud, &v.transpose()).unwrap();
        let s = svd(&m).unwrap().s;
        for (got, want) in s.values().iter().zip(&planted) {
            assert!((got - want).abs() <= 1e-9, "{got} vs {want}");
        }
        // The values-only fast path agrees on the same construction.
        let fast = singular_values(&m).unwrap();
        for (got, want) in fast.values().iter().zip(&planted) {
            assert!((got - want).abs() <= 1e-9, "fast path {got} vs {want}");
        }
    }

    #[test]
    fn contract_on_seeded_matrices() {
        for (rows, cols, seed) in [(24usize, 24usize, 1u64), (40, 17, 2), (9, 30, 3)] {
            let shape = Shape::new(rows.max(cols), rows.min(cols)).unwrap();
            let mut m = generate(&GaussianSpec::standard(shape, seed));
            if cols > rows {
                m = m.transpose();
            }
            let r = svd(&m).unwrap();
            assert!(gram_identity_residual(&r.u) <= 1e-10);
            assert!(gram_identity_residual(&r.v) <= 1e-10);
            let recon_err = frobenius_norm(
                &DenseMatrix::from_vec(
                    m.rows(),
                    m.cols(),
                    m.entries()
                        .iter()
                        .zip(reconstruct(&r).entries())
                        .map(|(x, y)| x - y)
                        .collect(),
                )
                .unwrap(),
            );
            assert!(recon_err <= 1e-8 * frobenius_norm(&m));
        }
    }

    #[test]
    fn rank_deficient_still_orthonormal() {
        // Rank-1: all columns proportional.
        let m = DenseMatrix::from_vec(4, 3, vec![
            1.0, 2.0, -1.0,
            2.0, 4.0, -2.0,
            -1.0, -2.0, 1.0,
            3.0, 6.0, -3.0,
        ])
        .unwrap();
        let r = svd(&m).unwrap();
        assert!(gram_identity_residual(&r.u) <= 1e-10);
        assert!(r.s.values()[1].abs() <= 1e-12);
        assert!(max_abs_diff(&reconstruct(&r), &m) <= 1e-12);
    }

    #[test]
    fn zero_matrix() {
        let r = svd(&DenseMatrix::zeros(3, 2)).unwrap();
        assert_eq!(r.s.values(), &[0.0, 0.0]);
        assert!(gram_identity_residual(&r.u) <= 1e-15);
    }

    #[test]
    fn fast_path_matches_full_svd() {
        // Values-only route vs Jacobi, normwise agreement at 1e-10 * s_max.
        for (n, seed) in [(32usize, 4u64), (96, 5), (160, 6)] {
            let m = generate(&GaussianSpec::standard(Shape::square(n).unwrap(), seed));
            let full = svd(&m).unwrap().s;
            let fast = singular_values(&m).unwrap();
            let smax = full.max();
            for (a, b) in full.values().iter().zip(fast.values()) {
                assert!(
                    (a - b).abs() <= 1e-10 * smax,
                    "n {n}: {a} vs {b} (smax {smax})"
                );
            }
        }
    }
}
