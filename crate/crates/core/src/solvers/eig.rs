//! Symmetric eigendecomposition by cyclic Jacobi rotations.

use super::{Matrix, SolverError};
use crate::scalar::{tol, Real};

pub(crate) const MAX_SWEEPS: usize = 100;

/// `M = U Λ Uᵀ` with eigenvalues ascending and `U`'s column `k` paired with
/// eigenvalue `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenDecomposition<T: Real> {
    pub eigenvalues: Vec<T>,
    pub eigenvectors: Matrix<T>,
}

impl<T: Real> EigenDecomposition<T> {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, k: usize) -> Vec<T> {
        self.eigenvectors.column(k)
    }

    /// `Uᵀ v`.
    pub fn project(&self, v: &[T]) -> Vec<T> {
        self.eigenvectors.tr_mul_vec(v)
    }

    /// `U c`.
    pub fn expand(&self, coeffs: &[T]) -> Vec<T> {
        self.eigenvectors.mul_vec(coeffs)
    }

    pub fn reconstruct(&self) -> Matrix<T> {
        let u = &self.eigenvectors;
        let n = self.dim();
        Matrix::from_fn(n, n, |r, c| {
            (0..n)
                .map(|k| u[(r, k)] * self.eigenvalues[k] * u[(c, k)])
                .sum()
        })
    }
}

/// Decomposes a real symmetric matrix.
///
/// The input must be symmetric to `1e-10·max(1, max|m_ij|)`; it is then
/// symmetrized exactly. Sweeps run in fixed row order until every
/// off-diagonal element is below `1e-12` (or a few ulps of the matrix scale
/// for narrow scalar types), so identical input always yields identical
/// output.
pub fn symmetric_eig<T: Real>(m: &Matrix<T>) -> Result<EigenDecomposition<T>, SolverError> {
    if !m.is_square() {
        return Err(SolverError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if !m.all_finite() {
        return Err(SolverError::NonFinite);
    }
    let n = m.rows();
    let scale = m.max_abs();
    let asym = m.asymmetry().unwrap_or_else(T::zero);
    if asym > tol(1e-10, scale) {
        return Err(SolverError::NotSymmetric {
            asymmetry: asym.to_f64_lossy(),
        });
    }

    let a: Vec<T> = (0..n * n)
        .map(|i| (m[(i / n, i % n)] + m[(i % n, i / n)]) * T::lit(0.5))
        .collect();
    // eigenvectors are accumulated as rows
    let vt = Matrix::<T>::identity(n).as_slice().to_vec();
    diagonalize(a, vt, n, scale)
}

/// Decomposes `m` starting from the eigenvectors of a nearby matrix.
///
/// `m` is first rotated into the basis of `guess` (`UᵀMU`), which leaves only
/// small off-diagonal elements for the Jacobi sweeps. The result satisfies
/// the same tolerance as [`symmetric_eig`] but is not bitwise equal to it.
/// `guess` must come from a decomposition of the same dimension.
pub fn symmetric_eig_warm<T: Real>(
    m: &Matrix<T>,
    guess: &EigenDecomposition<T>,
) -> Result<EigenDecomposition<T>, SolverError> {
    if !m.is_square() {
        return Err(SolverError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if guess.dim() != m.rows() {
        return Err(SolverError::DimensionMismatch {
            matrix: m.rows(),
            vector: guess.dim(),
        });
    }
    if !m.all_finite() {
        return Err(SolverError::NonFinite);
    }
    let n = m.rows();
    let scale = m.max_abs();
    let asym = m.asymmetry().unwrap_or_else(T::zero);
    if asym > tol(1e-10, scale) {
        return Err(SolverError::NotSymmetric {
            asymmetry: asym.to_f64_lossy(),
        });
    }
    // rows of vt are the guessed eigenvectors
    let vt = guess.eigenvectors.transpose().as_slice().to_vec();
    // b = vt · m (row k is u_kᵀ M)
    let mut b = vec![T::zero(); n * n];
    for k in 0..n {
        let u = &vt[k * n..(k + 1) * n];
        let row = &mut b[k * n..(k + 1) * n];
        for (r, &ur) in u.iter().enumerate() {
            if ur == T::zero() {
                continue;
            }
            for (x, &mrc) in row.iter_mut().zip(m.row(r)) {
                *x += ur * mrc;
            }
        }
    }
    let mut a = vec![T::zero(); n * n];
    for k in 0..n {
        for l in k..n {
            let bk = &b[k * n..(k + 1) * n];
            let ul = &vt[l * n..(l + 1) * n];
            let x: T = bk.iter().zip(ul).map(|(&p, &q)| p * q).sum();
            a[k * n + l] = x;
            a[l * n + k] = x;
        }
    }
    diagonalize(a, vt, n, scale)
}

/// Runs Jacobi on `a`, rotating the rows of `vt` along, and sorts.
fn diagonalize<T: Real>(
    mut a: Vec<T>,
    mut vt: Vec<T>,
    n: usize,
    scale: T,
) -> Result<EigenDecomposition<T>, SolverError> {
    jacobi_in_place(&mut a, n, tol(1e-12, scale), |p, q, c, s| {
        let (lo, hi) = vt.split_at_mut(q * n);
        let (rp, rq) = (&mut lo[p * n..(p + 1) * n], &mut hi[..n]);
        for (vp, vq) in rp.iter_mut().zip(rq.iter_mut()) {
            let (x, y) = (*vp, *vq);
            *vp = c * x - s * y;
            *vq = s * x + c * y;
        }
    })
    .map_err(|residual| SolverError::NoConvergence {
        sweeps: MAX_SWEEPS,
        residual: residual.to_f64_lossy(),
    })?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[i * n + i]
            .partial_cmp(&a[j * n + j])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(i.cmp(&j))
    });
    let eigenvalues = order.iter().map(|&k| a[k * n + k]).collect();
    let eigenvectors = Matrix::from_fn(n, n, |r, c| vt[order[c] * n + r]);
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

fn max_off_diagonal<T: Real>(a: &[T], n: usize) -> T {
    let mut off = T::zero();
    for p in 0..n {
        for &x in &a[p * n + p + 1..(p + 1) * n] {
            off = off.max(x.abs());
        }
    }
    off
}

/// Cyclic Jacobi on the symmetric row-major `n × n` matrix `a`, leaving the
/// eigenvalues on its diagonal. Sweeps visit `(p, q)`, `p < q`, in row order
/// and skip elements already below `off_tol`. `on_rotation(p, q, c, s)` is
/// told about every rotation so callers can accumulate it. On failure the
/// largest remaining off-diagonal element is returned.
pub(crate) fn jacobi_in_place<T: Real>(
    a: &mut [T],
    n: usize,
    off_tol: T,
    mut on_rotation: impl FnMut(usize, usize, T, T),
) -> Result<(), T> {
    for _ in 0..MAX_SWEEPS {
        if n < 2 || max_off_diagonal(a, n) < off_tol {
            return Ok(());
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p * n + q].abs() < off_tol {
                    continue;
                }
                let (c, s) = rotate(a, n, p, q);
                on_rotation(p, q, c, s);
            }
        }
    }
    let off = max_off_diagonal(a, n);
    if off < off_tol {
        Ok(())
    } else {
        Err(off)
    }
}

/// `a ← Jᵀ a J` for the rotation in the `(p, q)` plane that zeroes `a[p][q]`.
fn rotate<T: Real>(a: &mut [T], n: usize, p: usize, q: usize) -> (T, T) {
    let apq = a[p * n + q];
    let (app, aqq) = (a[p * n + p], a[q * n + q]);
    let theta = (aqq - app) / (T::lit(2.0) * apq);
    let t = {
        let mag = T::one() / (theta.abs() + (theta * theta + T::one()).sqrt());
        if theta < T::zero() {
            -mag
        } else {
            mag
        }
    };
    let c = T::one() / (t * t + T::one()).sqrt();
    let s = t * c;

    {
        let (lo, hi) = a.split_at_mut(q * n);
        let (rp, rq) = (&mut lo[p * n..(p + 1) * n], &mut hi[..n]);
        for (x, y) in rp.iter_mut().zip(rq.iter_mut()) {
            let (akp, akq) = (*x, *y);
            *x = c * akp - s * akq;
            *y = s * akp + c * akq;
        }
        rp[p] = app - t * apq;
        rq[q] = aqq + t * apq;
        rp[q] = T::zero();
        rq[p] = T::zero();
    }
    for k in 0..n {
        if k != p && k != q {
            a[k * n + p] = a[p * n + k];
            a[k * n + q] = a[q * n + k];
        }
    }
    (c, s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_input_sorted() {
        let m = Matrix::diagonal(&[3.0, 1.0, 2.0]);
        let e = symmetric_eig(&m).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 2.0, 3.0]);
        assert_eq!(e.eigenvector(0), vec![0.0, 1.0, 0.0]);
        assert_eq!(e.eigenvector(1), vec![0.0, 0.0, 1.0]);
        assert_eq!(e.eigenvector(2), vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn pauli_x_matrix() {
        let m = Matrix::<f64>::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        let e = symmetric_eig(&m).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-15);
        let r = e.reconstruct();
        for i in 0..2 {
            for j in 0..2 {
                assert!((r[(i, j)] - m[(i, j)]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        let m = Matrix::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]);
        assert!(matches!(symmetric_eig(&m), Err(SolverError::NotSymmetric { .. })));
        assert!(matches!(
            symmetric_eig(&Matrix::<f64>::zeros(2, 3)),
            Err(SolverError::NotSquare { .. })
        ));
        let mut nan = Matrix::<f64>::identity(2);
        nan[(0, 0)] = f64::NAN;
        assert!(matches!(symmetric_eig(&nan), Err(SolverError::NonFinite)));
    }

    #[test]
    fn empty_and_scalar() {
        let e = symmetric_eig(&Matrix::<f64>::zeros(0, 0)).unwrap();
        assert_eq!(e.dim(), 0);
        let e = symmetric_eig(&Matrix::from_rows(&[vec![-2.5f64]])).unwrap();
        assert_eq!(e.eigenvalues, vec![-2.5]);
    }

    #[test]
    fn works_in_single_precision() {
        let m = Matrix::from_rows(&[vec![2.0f32, 1.0], vec![1.0, 2.0]]);
        let e = symmetric_eig(&m).unwrap();
        assert!((e.eigenvalues[0] - 1.0).abs() < 1e-6);
        assert!((e.eigenvalues[1] - 3.0).abs() < 1e-6);
    }
}
