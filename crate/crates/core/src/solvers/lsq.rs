//! Least-squares routes for `M θ̇ = V`.

use super::{symmetric_eig, Matrix, SolverError};
use crate::scalar::{tol, Real};

fn norm<T: Real>(v: &[T]) -> T {
    v.iter().map(|&x| x * x).sum::<T>().sqrt()
}

/// CGLS on `min ‖Ax − b‖²` from `x = 0`, capped at `10·n` iterations with
/// stopping rule `‖Aᵀr‖ ≤ 1e-12·‖Aᵀb‖`.
///
/// Deliberately unregularized: on ill-conditioned `A` it chases tiny
/// eigen-directions and returns large-magnitude solutions.
pub(crate) fn cgls<T: Real>(a: &Matrix<T>, b: &[T]) -> (Vec<T>, usize) {
    let n = a.cols();
    let mut x = vec![T::zero(); n];
    let mut r = b.to_vec();
    let mut s = a.tr_mul_vec(&r);
    let s0 = norm(&s);
    if n == 0 || s0 == T::zero() {
        return (x, 0);
    }
    let stop = T::lit(1e-12) * s0;
    let mut p = s.clone();
    let mut gamma: T = s.iter().map(|&v| v * v).sum();
    let mut iters = 0;
    for _ in 0..10 * n {
        iters += 1;
        let q = a.mul_vec(&p);
        let qq: T = q.iter().map(|&v| v * v).sum();
        if qq == T::zero() || !qq.is_finite() {
            break;
        }
        let alpha = gamma / qq;
        for (xi, &pi) in x.iter_mut().zip(&p) {
            *xi += alpha * pi;
        }
        for (ri, &qi) in r.iter_mut().zip(&q) {
            *ri -= alpha * qi;
        }
        s = a.tr_mul_vec(&r);
        let gamma_new: T = s.iter().map(|&v| v * v).sum();
        if gamma_new.sqrt() <= stop {
            break;
        }
        let beta = gamma_new / gamma;
        for (pi, &si) in p.iter_mut().zip(&s) {
            *pi = si + beta * *pi;
        }
        gamma = gamma_new;
    }
    (x, iters)
}

/// Minimum-norm solution of `min ‖A y − r‖` through the normal equations,
/// dropping eigen-directions of `AᵀA` below `1e-14·λ_max`.
fn min_norm_lsq<T: Real>(a: &Matrix<T>, r: &[T]) -> Result<Vec<T>, SolverError> {
    let k = a.cols();
    if k == 0 {
        return Ok(Vec::new());
    }
    let gram = Matrix::from_fn(k, k, |i, j| {
        (0..a.rows()).map(|row| a[(row, i)] * a[(row, j)]).sum()
    });
    let rhs = a.tr_mul_vec(r);
    let eig = symmetric_eig(&gram)?;
    let lmax = eig.eigenvalues.last().copied().unwrap_or_else(T::zero);
    let cut = T::lit(1e-14) * lmax.max(T::min_positive_value());
    let proj = eig.project(&rhs);
    let coeffs: Vec<T> = proj
        .iter()
        .zip(&eig.eigenvalues)
        .map(|(&p, &l)| if l <= cut { T::zero() } else { p / l })
        .collect();
    Ok(eig.expand(&coeffs))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Bound {
    Free,
    Lower,
    Upper,
}

/// Active-set solution of `min ‖Mx − V‖²` subject to `|x_μ| ≤ b`, starting
/// from `x = 0` with every variable free.
///
/// Each iteration solves the free-variable subproblem exactly (minimum norm),
/// steps toward it until the first bound blocks, and releases the bound with
/// the most violated multiplier once the free subproblem is feasible.
pub(crate) fn bounded_lsq<T: Real>(
    m: &Matrix<T>,
    v: &[T],
    bound: T,
) -> Result<(Vec<T>, usize), SolverError> {
    let n = m.cols();
    let mut x = vec![T::zero(); n];
    let mut state = vec![Bound::Free; n];
    if n == 0 {
        return Ok((x, 0));
    }
    let g_tol = tol(1e-10, norm(&m.tr_mul_vec(v)));
    let max_iter = 20 * n + 100;
    let mut iters = 0;
    while iters < max_iter {
        iters += 1;
        let free: Vec<usize> = (0..n).filter(|&j| state[j] == Bound::Free).collect();
        let mut r = v.to_vec();
        for j in (0..n).filter(|&j| state[j] != Bound::Free) {
            for (row, ri) in r.iter_mut().enumerate() {
                *ri -= m[(row, j)] * x[j];
            }
        }
        let sub = Matrix::from_fn(m.rows(), free.len(), |row, c| m[(row, free[c])]);
        let y = min_norm_lsq(&sub, &r)?;

        let feasible = y.iter().all(|&yj| yj.abs() <= bound);
        if feasible {
            for (&j, &yj) in free.iter().zip(&y) {
                x[j] = yj;
            }
            let resid: Vec<T> = m
                .mul_vec(&x)
                .iter()
                .zip(v)
                .map(|(&mx, &vi)| mx - vi)
                .collect();
            let g = m.tr_mul_vec(&resid);
            let mut worst: Option<(usize, T)> = None;
            for j in 0..n {
                let violation = match state[j] {
                    Bound::Upper => g[j],
                    Bound::Lower => -g[j],
                    Bound::Free => continue,
                };
                if violation > g_tol && worst.is_none_or(|(_, w)| violation > w) {
                    worst = Some((j, violation));
                }
            }
            match worst {
                Some((j, _)) => state[j] = Bound::Free,
                None => return Ok((x, iters)),
            }
        } else {
            let mut alpha = T::one();
            let mut blocking = None;
            for (&j, &yj) in free.iter().zip(&y) {
                let d = yj - x[j];
                let limit = if yj > bound {
                    (bound - x[j]) / d
                } else if yj < -bound {
                    (-bound - x[j]) / d
                } else {
                    continue;
                };
                let limit = limit.max(T::zero());
                if limit < alpha || blocking.is_none() {
                    alpha = limit.min(alpha);
                    blocking = Some(j);
                }
            }
            for (&j, &yj) in free.iter().zip(&y) {
                let xj = x[j];
                x[j] = xj + alpha * (yj - xj);
            }
            if let Some(j) = blocking {
                if y[free.iter().position(|&f| f == j).unwrap()] > T::zero() {
                    x[j] = bound;
                    state[j] = Bound::Upper;
                } else {
                    x[j] = -bound;
                    state[j] = Bound::Lower;
                }
            }
            for xj in x.iter_mut() {
                *xj = xj.max(-bound).min(bound);
            }
        }
    }
    for xj in x.iter_mut() {
        *xj = xj.max(-bound).min(bound);
    }
    Ok((x, iters))
}
