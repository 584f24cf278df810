//! Exact propagation `e^{-iHt}|ψ⟩` by short-iterate Lanczos stepping.

use num_complex::Complex;

use super::{KernelError, StateVector, WeightedPauliSum};
use crate::scalar::{tol, Cplx, Real};
use crate::solvers::{symmetric_eig, Matrix};

/// Controls for [`exact_evolve_with`].
#[derive(Clone, Debug)]
pub struct KrylovConfig<T: Real> {
    /// Maximum Lanczos subspace dimension per sub-step.
    pub krylov_dim: usize,
    /// Accepted local error estimate per sub-step (absolute, in state norm).
    pub local_tol: T,
    /// Hard cap on sub-steps before reporting non-convergence.
    pub max_substeps: usize,
}

impl<T: Real> Default for KrylovConfig<T> {
    fn default() -> Self {
        Self {
            krylov_dim: 30,
            local_tol: T::lit(1e-10),
            max_substeps: 1_000_000,
        }
    }
}

/// `e^{-iHt}|ψ₀⟩` with the default [`KrylovConfig`].
pub fn exact_evolve<T: Real>(
    h: &WeightedPauliSum<T>,
    t: T,
    psi0: &StateVector<T>,
) -> Result<StateVector<T>, KernelError> {
    exact_evolve_with(h, t, psi0, &KrylovConfig::default())
}

/// `e^{-iHt}|ψ₀⟩`.
///
/// Each sub-step builds an orthonormal Lanczos basis (full
/// re-orthogonalization) and grows it until the a-posteriori estimate
/// `β₀·β_j·|[e^{-iτT_j}e₁]_j|` drops below `local_tol` for the remaining
/// time. If the basis reaches `krylov_dim` first, the sub-step length is
/// halved until the estimate is met.
pub fn exact_evolve_with<T: Real>(
    h: &WeightedPauliSum<T>,
    t: T,
    psi0: &StateVector<T>,
    cfg: &KrylovConfig<T>,
) -> Result<StateVector<T>, KernelError> {
    if h.n_qubits() != psi0.n_qubits() {
        return Err(KernelError::DimensionMismatch {
            expected: h.n_qubits(),
            found: psi0.n_qubits(),
        });
    }
    if !(t >= T::zero()) || !t.is_finite() {
        return Err(KernelError::InvalidArgument(format!(
            "evolution time must be finite and >= 0, got {t}"
        )));
    }
    if cfg.krylov_dim == 0 {
        return Err(KernelError::InvalidArgument("krylov_dim must be positive".into()));
    }
    let local_tol = tol(cfg.local_tol.to_f64_lossy(), T::one());
    let breakdown = tol(1e-13, h.one_norm());

    let mut psi = psi0.clone();
    let mut remaining = t;
    let mut substeps = 0usize;
    while remaining > T::zero() {
        substeps += 1;
        if substeps > cfg.max_substeps {
            return Err(KernelError::NonConvergence(format!(
                "exceeded {} sub-steps with {} time remaining",
                cfg.max_substeps, remaining
            )));
        }
        let beta0 = psi.norm();
        if beta0 == T::zero() {
            return Ok(psi);
        }
        let mut basis = vec![{
            let mut v = psi.clone();
            v.scale(Complex::new(T::one() / beta0, T::zero()));
            v
        }];
        let mut alphas: Vec<T> = Vec::new();
        let mut betas: Vec<T> = Vec::new();
        let mut step: Option<(T, Vec<Cplx<T>>)> = None;

        for j in 0..cfg.krylov_dim {
            let mut w = h.apply(&basis[j])?;
            let alpha = basis[j].inner(&w)?.re;
            w.axpy(Complex::new(-alpha, T::zero()), &basis[j]);
            if j > 0 {
                w.axpy(Complex::new(-betas[j - 1], T::zero()), &basis[j - 1]);
            }
            for v in &basis {
                let proj = v.inner(&w)?;
                w.axpy(-proj, v);
            }
            let beta = w.norm();
            alphas.push(alpha);

            if beta <= breakdown {
                // invariant subspace: the projection is exact
                step = Some((remaining, tridiag_exp(&alphas, &betas, remaining)?));
                break;
            }
            let y = tridiag_exp(&alphas, &betas, remaining)?;
            let err = beta0 * beta * y[j].norm();
            if err <= local_tol {
                step = Some((remaining, y));
                break;
            }
            if j + 1 == cfg.krylov_dim {
                let mut tau = remaining;
                for _ in 0..200 {
                    tau = tau * T::lit(0.5);
                    let y = tridiag_exp(&alphas, &betas, tau)?;
                    if beta0 * beta * y[j].norm() <= local_tol {
                        step = Some((tau, y));
                        break;
                    }
                }
                if step.is_none() {
                    return Err(KernelError::NonConvergence(format!(
                        "no admissible sub-step found at {} time remaining",
                        remaining
                    )));
                }
                break;
            }
            betas.push(beta);
            w.scale(Complex::new(T::one() / beta, T::zero()));
            basis.push(w);
        }

        let (tau, y) = step.expect("krylov loop always yields a step or an error");
        let mut next = psi.zeros_like();
        for (v, &c) in basis.iter().zip(&y) {
            next.axpy(c.scale(beta0), v);
        }
        psi = next;
        remaining = if tau >= remaining { T::zero() } else { remaining - tau };
    }
    Ok(psi)
}

/// `e^{-iτT}e₁` for the symmetric tridiagonal `T` with the given diagonal and
/// off-diagonal (`betas.len() + 1 == alphas.len()` or fewer off-diagonals).
fn tridiag_exp<T: Real>(alphas: &[T], betas: &[T], tau: T) -> Result<Vec<Cplx<T>>, KernelError> {
    let m = alphas.len();
    let mut t = Matrix::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alphas[i];
        if i + 1 < m {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    let eig = symmetric_eig(&t).map_err(|e| KernelError::NonConvergence(e.to_string()))?;
    let q = &eig.eigenvectors;
    let phases: Vec<Cplx<T>> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(l, &lam)| {
            let (s, c) = (tau * lam).sin_cos();
            Complex::new(c, -s).scale(q[(0, l)])
        })
        .collect();
    Ok((0..m)
        .map(|k| {
            phases
                .iter()
                .enumerate()
                .fold(Complex::new(T::zero(), T::zero()), |acc, (l, &p)| {
                    acc + p.scale(q[(k, l)])
                })
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{Pauli, PauliString};

    #[test]
    fn zero_time_is_identity() {
        let h = WeightedPauliSum::new(1, [(1.0, PauliString::single(1, 0, Pauli::X))]).unwrap();
        let psi = StateVector::<f64>::zero_state(1).unwrap();
        assert_eq!(exact_evolve(&h, 0.0, &psi).unwrap(), psi);
    }

    #[test]
    fn z_on_plus_at_quarter_period() {
        let h = WeightedPauliSum::new(1, [(1.0, PauliString::single(1, 0, Pauli::Z))]).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let plus = StateVector::from_amplitudes(vec![Complex::new(r, 0.0); 2]).unwrap();
        let t = std::f64::consts::FRAC_PI_4;
        let out = exact_evolve(&h, t, &plus).unwrap();
        let e0 = Complex::new(0.0, -t).exp().scale(r);
        let e1 = Complex::new(0.0, t).exp().scale(r);
        assert!((out.amplitudes()[0] - e0).norm() < 1e-12);
        assert!((out.amplitudes()[1] - e1).norm() < 1e-12);
        let x = PauliString::single(1, 0, Pauli::X);
        assert!(x.expectation(&out).unwrap().abs() < 1e-12);
    }

    #[test]
    fn single_qubit_rabi_matches_closed_form() {
        // e^{-iXt}|0⟩ = cos t|0⟩ − i sin t|1⟩, long enough to force sub-stepping
        let h = WeightedPauliSum::new(1, [(1.0, PauliString::single(1, 0, Pauli::X))]).unwrap();
        let psi = StateVector::<f64>::zero_state(1).unwrap();
        let out = exact_evolve(&h, 25.0, &psi).unwrap();
        assert!((out.amplitudes()[1] - Complex::new(0.0, -(25.0f64).sin())).norm() < 1e-10);
    }

    #[test]
    fn rejects_negative_time() {
        let h = WeightedPauliSum::new(1, [(1.0, PauliString::single(1, 0, Pauli::X))]).unwrap();
        let psi = StateVector::<f64>::zero_state(1).unwrap();
        assert!(exact_evolve(&h, -1.0, &psi).is_err());
        assert!(exact_evolve(&h, f64::NAN, &psi).is_err());
    }

    #[test]
    fn reports_non_convergence() {
        let n = 3;
        let mut h = WeightedPauliSum::empty(n);
        for i in 0..n {
            h.push(1.0, PauliString::single(n, i, Pauli::X)).unwrap();
            h.push(0.7, PauliString::two(n, (i, Pauli::Z), ((i + 1) % n, Pauli::Z)))
                .unwrap();
        }
        let psi = StateVector::<f64>::zero_state(n).unwrap();
        let cfg = KrylovConfig {
            krylov_dim: 2,
            local_tol: 1e-10,
            max_substeps: 3,
        };
        assert!(matches!(
            exact_evolve_with(&h, 50.0, &psi, &cfg),
            Err(KernelError::NonConvergence(_))
        ));
    }
}
