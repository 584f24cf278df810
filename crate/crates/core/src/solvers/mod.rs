//! Solvers for the equations of motion `M θ̇ = V` under singular or
//! ill-conditioned `M`, plus the symmetric eigendecomposition they share.

mod eig;
mod lsq;
mod matrix;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use eig::{symmetric_eig, symmetric_eig_warm, EigenDecomposition};
pub use matrix::Matrix;

use crate::scalar::{tol, Real};
use crate::variational::{Augmentation, McLachlanSystem};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },
    #[error("dimension mismatch: matrix {matrix}, vector {vector}")]
    DimensionMismatch { matrix: usize, vector: usize },
    #[error("non-finite input")]
    NonFinite,
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolverMethod {
    LsqUnbounded,
    LsqBounded,
    Tikhonov,
    Truncation,
}

impl SolverMethod {
    pub const ALL: [SolverMethod; 4] = [
        SolverMethod::LsqUnbounded,
        SolverMethod::LsqBounded,
        SolverMethod::Tikhonov,
        SolverMethod::Truncation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SolverMethod::LsqUnbounded => "lsq_unbounded",
            SolverMethod::LsqBounded => "lsq_bounded",
            SolverMethod::Tikhonov => "tikhonov",
            SolverMethod::Truncation => "truncation",
        }
    }
}

impl fmt::Display for SolverMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolverMethod {
    type Err = SolverError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| SolverError::InvalidConfig(format!("unknown solver method '{s}'")))
    }
}

/// Which strategy to use and its parameters.
///
/// `epsilon` is the Tikhonov shift or the truncation threshold; `bound` is the
/// half-width `b` of the box for bounded least squares.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig<T: Real> {
    pub method: SolverMethod,
    pub epsilon: T,
    pub bound: T,
}

impl<T: Real> SolverConfig<T> {
    pub fn truncation(epsilon: T) -> Self {
        Self {
            method: SolverMethod::Truncation,
            epsilon,
            bound: T::lit(5.0),
        }
    }

    pub fn tikhonov(epsilon: T) -> Self {
        Self {
            method: SolverMethod::Tikhonov,
            epsilon,
            bound: T::lit(5.0),
        }
    }

    pub fn lsq_unbounded() -> Self {
        Self {
            method: SolverMethod::LsqUnbounded,
            epsilon: T::lit(1e-6),
            bound: T::lit(5.0),
        }
    }

    pub fn lsq_bounded(bound: T) -> Self {
        Self {
            method: SolverMethod::LsqBounded,
            epsilon: T::lit(1e-6),
            bound,
        }
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        if !(self.epsilon > T::zero()) || !self.epsilon.is_finite() {
            return Err(SolverError::InvalidConfig(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if !(self.bound > T::zero()) || !self.bound.is_finite() {
            return Err(SolverError::InvalidConfig(format!(
                "bound must be positive, got {}",
                self.bound
            )));
        }
        Ok(())
    }
}

impl<T: Real> Default for SolverConfig<T> {
    fn default() -> Self {
        Self::truncation(T::lit(1e-6))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveDiagnostics<T: Real> {
    /// Eigenvalues of `M` at or below `epsilon`.
    pub n_null: usize,
    pub min_eigenvalue: T,
    pub max_eigenvalue: T,
    /// `‖M θ̇ − V‖`.
    pub residual: T,
    /// Inner iterations (least-squares methods only).
    pub iterations: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution<T: Real> {
    pub theta_dot: Vec<T>,
    pub diagnostics: SolveDiagnostics<T>,
}

/// Solves `M θ̇ = V` for a McLachlan system.
pub fn solve<T: Real>(s: &McLachlanSystem<T>, cfg: &SolverConfig<T>) -> Result<Solution<T>, SolverError> {
    solve_linear(&s.m, &s.v, cfg)
}

/// Solves `M x = V` for symmetric `M` with the configured strategy.
///
/// - `lsq_unbounded`: CGLS, any minimizer of `‖Mx − V‖²`.
/// - `lsq_bounded`: a minimizer with every `|x_μ| ≤ bound`.
/// - `tikhonov`: `U (Λ + εI)⁻¹ Uᵀ V`.
/// - `truncation`: `U Λ⁺ Uᵀ V` with eigenvalues `λ ≤ ε` dropped.
pub fn solve_linear<T: Real>(
    m: &Matrix<T>,
    v: &[T],
    cfg: &SolverConfig<T>,
) -> Result<Solution<T>, SolverError> {
    cfg.validate()?;
    if !m.is_square() {
        return Err(SolverError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if m.rows() != v.len() {
        return Err(SolverError::DimensionMismatch {
            matrix: m.rows(),
            vector: v.len(),
        });
    }
    if !m.all_finite() || v.iter().any(|x| !x.is_finite()) {
        return Err(SolverError::NonFinite);
    }
    let eig = symmetric_eig(m)?;
    solve_prepared(m, v, cfg, &eig)
}

/// [`solve`] with a decomposition of `s.m` already at hand (for example
/// from [`symmetric_eig_warm`]).
pub fn solve_with_eig<T: Real>(
    s: &McLachlanSystem<T>,
    cfg: &SolverConfig<T>,
    eig: &EigenDecomposition<T>,
) -> Result<Solution<T>, SolverError> {
    cfg.validate()?;
    let (m, v) = (&s.m, &s.v);
    if !m.is_square() {
        return Err(SolverError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if m.rows() != v.len() || eig.dim() != v.len() {
        return Err(SolverError::DimensionMismatch {
            matrix: m.rows(),
            vector: v.len(),
        });
    }
    if !m.all_finite() || v.iter().any(|x| !x.is_finite()) {
        return Err(SolverError::NonFinite);
    }
    solve_prepared(m, v, cfg, eig)
}

fn solve_prepared<T: Real>(
    m: &Matrix<T>,
    v: &[T],
    cfg: &SolverConfig<T>,
    eig: &EigenDecomposition<T>,
) -> Result<Solution<T>, SolverError> {
    let n_null = count_null(&eig.eigenvalues, cfg.epsilon);
    let mut iterations = 0;
    let theta_dot = match cfg.method {
        SolverMethod::Tikhonov => {
            let proj = eig.project(v);
            let c: Vec<T> = proj
                .iter()
                .zip(&eig.eigenvalues)
                .map(|(&p, &l)| p / (l + cfg.epsilon))
                .collect();
            eig.expand(&c)
        }
        SolverMethod::Truncation => truncated_solve(&eig, v, cfg.epsilon),
        SolverMethod::LsqUnbounded => {
            let (x, it) = lsq::cgls(m, v);
            iterations = it;
            x
        }
        SolverMethod::LsqBounded => {
            let (x, it) = lsq::bounded_lsq(m, v, cfg.bound)?;
            iterations = it;
            x
        }
    };
    if theta_dot.iter().any(|x| !x.is_finite()) {
        return Err(SolverError::NonFinite);
    }
    let mx = m.mul_vec(&theta_dot);
    let residual = mx
        .iter()
        .zip(v)
        .map(|(&a, &b)| (a - b) * (a - b))
        .sum::<T>()
        .sqrt();
    Ok(Solution {
        theta_dot,
        diagnostics: SolveDiagnostics {
            n_null,
            min_eigenvalue: eig.eigenvalues.first().copied().unwrap_or_else(T::zero),
            max_eigenvalue: eig.eigenvalues.last().copied().unwrap_or_else(T::zero),
            residual,
            iterations,
        },
    })
}

/// Number of eigenvalues `≤ epsilon` (ascending input).
fn count_null<T: Real>(eigenvalues: &[T], epsilon: T) -> usize {
    eigenvalues.iter().take_while(|&&l| l <= epsilon).count()
}

fn truncated_solve<T: Real>(eig: &EigenDecomposition<T>, v: &[T], epsilon: T) -> Vec<T> {
    let n_null = count_null(&eig.eigenvalues, epsilon);
    let proj = eig.project(v);
    let c: Vec<T> = proj
        .iter()
        .zip(&eig.eigenvalues)
        .enumerate()
        .map(|(k, (&p, &l))| if k < n_null { T::zero() } else { p / l })
        .collect();
    eig.expand(&c)
}

/// `L²` after solving one-parameter extensions of a fixed system.
///
/// For the spectral solvers the extended matrix is expressed in the
/// eigenbasis of the base matrix, where it is diagonal plus one border row,
/// and re-diagonalized by Jacobi rotations that only carry `V` along. The
/// least-squares solvers re-solve the full extended system.
pub struct ExtensionScorer<'a, T: Real> {
    base: &'a McLachlanSystem<T>,
    cfg: SolverConfig<T>,
    spectral: Option<(EigenDecomposition<T>, Vec<T>)>,
}

impl<'a, T: Real> ExtensionScorer<'a, T> {
    pub fn new(base: &'a McLachlanSystem<T>, cfg: &SolverConfig<T>) -> Result<Self, SolverError> {
        Self::with_eig(base, cfg, None)
    }

    /// Like [`new`](Self::new), reusing a decomposition of `base.m`.
    pub fn with_eig(
        base: &'a McLachlanSystem<T>,
        cfg: &SolverConfig<T>,
        eig: Option<&EigenDecomposition<T>>,
    ) -> Result<Self, SolverError> {
        cfg.validate()?;
        if let Some(e) = eig {
            if e.dim() != base.dim() {
                return Err(SolverError::DimensionMismatch {
                    matrix: base.dim(),
                    vector: e.dim(),
                });
            }
        }
        let spectral = match cfg.method {
            SolverMethod::Tikhonov | SolverMethod::Truncation => {
                let eig = match eig {
                    Some(e) => e.clone(),
                    None => symmetric_eig(&base.m)?,
                };
                let uv = eig.project(&base.v);
                Some((eig, uv))
            }
            _ => None,
        };
        Ok(Self {
            base,
            cfg: *cfg,
            spectral,
        })
    }

    pub fn distance(&self, aug: &Augmentation<T>) -> Result<T, SolverError> {
        let n = self.base.dim();
        if aug.column.len() != n + 1 {
            return Err(SolverError::DimensionMismatch {
                matrix: n + 1,
                vector: aug.column.len(),
            });
        }
        if aug.column.iter().any(|x| !x.is_finite()) || !aug.v_new.is_finite() {
            return Err(SolverError::NonFinite);
        }
        let Some((eig, uv)) = &self.spectral else {
            let ext = self.base.extended(aug);
            let sol = solve(&ext, &self.cfg)?;
            return ext.mclachlan_distance(&sol.theta_dot).map_err(|_| SolverError::NonFinite);
        };
        let d = n + 1;
        let z = eig.project(&aug.column[..n]);
        let mut a = vec![T::zero(); d * d];
        for k in 0..n {
            a[k * d + k] = eig.eigenvalues[k];
            a[k * d + n] = z[k];
            a[n * d + k] = z[k];
        }
        a[n * d + n] = aug.column[n];
        let mut w = uv.clone();
        w.push(aug.v_new);
        let scale = aug.column.iter().fold(self.base.m.max_abs(), |m, x| m.max(x.abs()));
        eig::jacobi_in_place(&mut a, d, tol(1e-12, scale), |p, q, c, s| {
            let (x, y) = (w[p], w[q]);
            w[p] = c * x - s * y;
            w[q] = s * x + c * y;
        })
        .map_err(|r| SolverError::NoConvergence {
            sweeps: eig::MAX_SWEEPS,
            residual: r.to_f64_lossy(),
        })?;
        let two = T::lit(2.0);
        let mut quad = T::zero();
        let mut lin = T::zero();
        for k in 0..d {
            let l = a[k * d + k];
            let coeff = match self.cfg.method {
                SolverMethod::Tikhonov => w[k] / (l + self.cfg.epsilon),
                _ if l <= self.cfg.epsilon => T::zero(),
                _ => w[k] / l,
            };
            quad += l * coeff * coeff;
            lin += w[k] * coeff;
        }
        Ok((two * quad - two * two * lin + two * self.base.var_h).max(T::zero()))
    }
}

/// Size of the numerical null space and how far `V` leaks into it.
#[derive(Clone, Debug, PartialEq)]
pub struct NullSpaceReport<T: Real> {
    pub n_null: usize,
    /// `max |u_μᵀ V|` over eigenvectors with `λ_μ ≤ ε`; zero when none.
    pub max_overlap: T,
}

/// Reports, without enforcing, the orthogonality of `V` to `Null(M)`.
pub fn null_space_diagnostics<T: Real>(
    s: &McLachlanSystem<T>,
    epsilon: T,
) -> Result<NullSpaceReport<T>, SolverError> {
    let eig = symmetric_eig(&s.m)?;
    if s.v.len() != eig.dim() {
        return Err(SolverError::DimensionMismatch {
            matrix: eig.dim(),
            vector: s.v.len(),
        });
    }
    let n_null = count_null(&eig.eigenvalues, epsilon);
    let proj = eig.project(&s.v);
    let max_overlap = proj[..n_null].iter().fold(T::zero(), |m, &p| m.max(p.abs()));
    Ok(NullSpaceReport { n_null, max_overlap })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn system(m: Matrix<f64>, v: Vec<f64>) -> McLachlanSystem<f64> {
        McLachlanSystem { m, v, var_h: 0.0 }
    }

    #[test]
    fn tikhonov_on_identity() {
        let m = Matrix::<f64>::identity(3);
        let v = vec![1.0, -2.0, 0.5];
        let eps = 0.1;
        let s = solve_linear(&m, &v, &SolverConfig::tikhonov(eps)).unwrap();
        for (x, vi) in s.theta_dot.iter().zip(&v) {
            assert!((x - vi / (1.0 + eps)).abs() < 1e-15);
        }
        assert_eq!(s.diagnostics.n_null, 0);
    }

    #[test]
    fn singular_diagonal_case() {
        let m = Matrix::<f64>::diagonal(&[1.0, 0.0]);
        let v = vec![1.0, 0.0];

        let t = solve_linear(&m, &v, &SolverConfig::truncation(1e-6)).unwrap();
        assert_eq!(t.theta_dot, vec![1.0, 0.0]);
        assert_eq!(t.diagnostics.n_null, 1);

        let u = solve_linear(&m, &v, &SolverConfig::lsq_unbounded()).unwrap();
        assert!((u.theta_dot[0] - 1.0).abs() < 1e-12);
        assert!(u.diagnostics.residual < 1e-12);

        let b = solve_linear(&m, &v, &SolverConfig::lsq_bounded(5.0)).unwrap();
        assert!((b.theta_dot[0] - 1.0).abs() < 1e-12);
        assert!(b.theta_dot[1].abs() <= 5.0);
    }

    #[test]
    fn bounded_lsq_clips_to_box() {
        let m = Matrix::<f64>::diagonal(&[1.0, 2.0]);
        let v = vec![10.0, 1.0];
        let b = solve_linear(&m, &v, &SolverConfig::lsq_bounded(2.0)).unwrap();
        assert_eq!(b.theta_dot[0], 2.0);
        assert!((b.theta_dot[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn bounded_lsq_coupled_box_optimum() {
        // min ‖Mx − V‖² over |x| ≤ 1 for a coupled M; brute-force grid check
        let m = Matrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]);
        let v = vec![6.0, -1.0];
        let b = solve_linear(&m, &v, &SolverConfig::lsq_bounded(1.0)).unwrap();
        let f = |x: &[f64]| {
            let r = m.mul_vec(x);
            (r[0] - v[0]).powi(2) + (r[1] - v[1]).powi(2)
        };
        let best = f(&b.theta_dot);
        let mut grid_best = f64::INFINITY;
        for i in 0..=400 {
            for j in 0..=400 {
                let x = [-1.0 + i as f64 / 200.0, -1.0 + j as f64 / 200.0];
                grid_best = grid_best.min(f(&x));
            }
        }
        assert!(best <= grid_best + 1e-12, "{best} vs {grid_best}");
    }

    #[test]
    fn threshold_tie_is_truncated() {
        let m = Matrix::diagonal(&[1e-3, 1.0]);
        let v = vec![1e-3, 1.0];
        let t = solve_linear(&m, &v, &SolverConfig::truncation(1e-3)).unwrap();
        assert_eq!(t.diagnostics.n_null, 1);
        assert_eq!(t.theta_dot[0], 0.0);
    }

    #[test]
    fn null_space_report() {
        let s = system(Matrix::diagonal(&[1.0, 0.0]), vec![1.0, 0.0]);
        let r = null_space_diagnostics(&s, 1e-6).unwrap();
        assert_eq!(r.n_null, 1);
        assert_eq!(r.max_overlap, 0.0);
        let s = system(Matrix::identity(2), vec![1.0, 1.0]);
        assert_eq!(null_space_diagnostics(&s, 1e-6).unwrap().n_null, 0);
    }

    #[test]
    fn errors() {
        let m = Matrix::identity(2);
        assert!(matches!(
            solve_linear(&m, &[1.0], &SolverConfig::truncation(1e-6)),
            Err(SolverError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            solve_linear(&m, &[1.0, f64::INFINITY], &SolverConfig::truncation(1e-6)),
            Err(SolverError::NonFinite)
        ));
        assert!(solve_linear(&m, &[1.0, 1.0], &SolverConfig::truncation(0.0)).is_err());
        assert!("bogus".parse::<SolverMethod>().is_err());
        assert_eq!("tikhonov".parse::<SolverMethod>().unwrap(), SolverMethod::Tikhonov);
    }

    #[test]
    fn empty_system() {
        let s = solve_linear(&Matrix::<f64>::zeros(0, 0), &[], &SolverConfig::default()).unwrap();
        assert!(s.theta_dot.is_empty());
    }
}
