//! Shot-noise injection on `M` with the exact/noisy partition by circuit
//! fragment depth.
//!
//! An element `M_{μν}` only involves the circuit fragment up to unitary
//! `max(μ, ν)`. Elements whose fragment is no deeper than `d_c` are taken as
//! exactly computed (classically); the rest are replaced by Gaussian draws
//! mimicking a finite number of ancilla measurements, where
//! `M = (2p − 1)/4` and `σ² = p(1 − p)/(4 N_s)`.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::variational::{CircuitLayout, McLachlanSystem};

#[derive(Clone, Debug, PartialEq)]
pub struct NoiseConfig {
    /// Shots per element; `None` is the infinite-shot (noiseless) limit.
    pub n_shots: Option<u64>,
    /// Elements with fragment depth `≤ d_c` stay exact.
    pub d_c: usize,
    /// Also jitter `V` (off by default: `V` is taken exact).
    pub noisy_v: bool,
    pub seed: u64,
    pub runs: usize,
    /// Draws beyond this many standard deviations are redrawn; `None` keeps
    /// the plain Gaussian.
    pub truncate_sigma: Option<f64>,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self {
            n_shots: None,
            d_c: 0,
            noisy_v: false,
            seed: 0,
            runs: 1,
            truncate_sigma: Some(5.0),
        }
    }
}

impl NoiseConfig {
    pub fn noiseless() -> Self {
        Self::default()
    }

    pub fn shots(n_shots: u64, d_c: usize) -> Self {
        Self {
            n_shots: Some(n_shots),
            d_c,
            ..Self::default()
        }
    }

    pub fn is_noiseless(&self) -> bool {
        self.n_shots.is_none()
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_shots == Some(0) {
            return Err(Error::Invalid("noise.n_shots must be >= 1".into()));
        }
        if self.runs == 0 {
            return Err(Error::Invalid("noise.runs must be >= 1".into()));
        }
        if let Some(k) = self.truncate_sigma {
            if !(k > 0.0) {
                return Err(Error::Invalid("noise truncation must be positive".into()));
            }
        }
        Ok(())
    }
}

/// Standard deviation of a shot-sampled element with exact value `m`.
///
/// `p = (4m + 1)/2` is clamped into `[0, 1]`, so elements outside
/// `[−3/4, 1/4]` get `σ = 0`.
pub fn shot_sigma<T: Real>(m: T, n_shots: Option<u64>) -> T {
    let Some(ns) = n_shots else {
        return T::zero();
    };
    let p = ((T::lit(4.0) * m + T::one()) * T::lit(0.5))
        .max(T::zero())
        .min(T::one());
    (p * (T::one() - p) / (T::lit(4.0) * T::lit(ns as f64))).sqrt()
}

/// Depth of the fragment needed by element `(mu, nu)` (0-based indices).
pub fn fragment_depth(layout: &CircuitLayout, mu: usize, nu: usize) -> Result<usize> {
    layout.fragment_depth(mu, nu).ok_or_else(|| {
        Error::Invalid(format!(
            "element ({mu}, {nu}) out of range for {} unitaries",
            layout.n_unitaries()
        ))
    })
}

/// Upper-triangle elements of an `n × n` system that would be jittered.
pub fn noisy_element_count(layout: &CircuitLayout, d_c: usize) -> usize {
    let n = layout.n_unitaries();
    (0..n)
        .map(|nu| {
            // elements (mu, nu) with mu <= nu share fragment depth of nu
            if layout.fragment_depth(nu, nu).unwrap_or(0) > d_c {
                nu + 1
            } else {
                0
            }
        })
        .sum()
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R, truncate: Option<f64>) -> f64 {
    loop {
        let z: f64 = rng.sample(StandardNormal);
        match truncate {
            Some(k) if z.abs() > k => continue,
            _ => return z,
        }
    }
}

/// Copy of `s` with shot noise on every element whose fragment depth exceeds
/// `d_c`. Draws happen in row-major upper-triangle order and are mirrored;
/// no random numbers are consumed when nothing is noisy.
pub fn noisy_system<T: Real, R: Rng + ?Sized>(
    s: &McLachlanSystem<T>,
    layout: &CircuitLayout,
    cfg: &NoiseConfig,
    rng: &mut R,
) -> Result<McLachlanSystem<T>> {
    let n = s.dim();
    if layout.n_unitaries() != n {
        return Err(Error::Invalid(format!(
            "layout has {} unitaries, system has {n} parameters",
            layout.n_unitaries()
        )));
    }
    let mut out = s.clone();
    if cfg.n_shots.is_none() {
        return Ok(out);
    }
    for mu in 0..n {
        for nu in mu..n {
            if fragment_depth(layout, mu, nu)? <= cfg.d_c {
                continue;
            }
            let m = s.m[(mu, nu)];
            let sigma = shot_sigma(m, cfg.n_shots);
            if sigma == T::zero() {
                continue;
            }
            let draw = m + sigma * T::lit(gaussian(rng, cfg.truncate_sigma));
            out.m[(mu, nu)] = draw;
            out.m[(nu, mu)] = draw;
        }
    }
    if cfg.noisy_v {
        for mu in 0..n {
            if fragment_depth(layout, mu, mu)? <= cfg.d_c {
                continue;
            }
            let sigma = shot_sigma(s.v[mu], cfg.n_shots);
            if sigma > T::zero() {
                out.v[mu] = s.v[mu] + sigma * T::lit(gaussian(rng, cfg.truncate_sigma));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::PauliString;
    use crate::solvers::Matrix;
    use crate::variational::layout;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sample_system(n: usize) -> McLachlanSystem<f64> {
        McLachlanSystem {
            m: Matrix::from_fn(n, n, |r, c| if r == c { 0.2 } else { 0.05 * (r + c) as f64 / n as f64 }),
            v: vec![0.1; n],
            var_h: 1.0,
        }
    }

    fn chain_layout(n_q: usize, n: usize) -> CircuitLayout {
        // alternating single-qubit gates on qubit 0 -> depth grows by one each
        let g: Vec<PauliString> = (0..n).map(|_| PauliString::single(n_q, 0, crate::kernel::Pauli::X)).collect();
        layout(n_q, &g)
    }

    #[test]
    fn sigma_values() {
        assert!((shot_sigma(0.0, Some(100)) - (1.0f64 / 1600.0).sqrt()).abs() < 1e-15);
        assert_eq!(shot_sigma(0.25, Some(100)), 0.0);
        assert_eq!(shot_sigma(1.0, Some(100)), 0.0);
        assert_eq!(shot_sigma(0.1, None), 0.0);
    }

    #[test]
    fn fully_exact_partitions_return_input() {
        let s = sample_system(4);
        let l = chain_layout(2, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let out = noisy_system(&s, &l, &NoiseConfig::shots(1000, 4), &mut rng).unwrap();
        assert_eq!(out, s);
        let out = noisy_system(&s, &l, &NoiseConfig::noiseless(), &mut rng).unwrap();
        assert_eq!(out, s);
        // nothing consumed from the stream
        let mut fresh = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(rng.random::<u64>(), fresh.random::<u64>());
    }

    #[test]
    fn noise_is_symmetric_and_seeded() {
        let s = sample_system(5);
        let l = chain_layout(2, 5);
        let cfg = NoiseConfig::shots(1000, 2);
        let a = noisy_system(&s, &l, &cfg, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        let b = noisy_system(&s, &l, &cfg, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.m.asymmetry(), Some(0.0));
        // first two unitaries have fragment depth <= 2
        assert_eq!(a.m[(0, 1)], s.m[(0, 1)]);
        assert_ne!(a.m[(0, 4)], s.m[(0, 4)]);
        assert_eq!(a.v, s.v);
    }

    #[test]
    fn noisy_count_monotone_in_threshold() {
        let l = chain_layout(2, 6);
        let counts: Vec<usize> = (0..8).map(|d| noisy_element_count(&l, d)).collect();
        assert!(counts.windows(2).all(|w| w[0] >= w[1]));
        assert_eq!(counts[0], 21);
        assert_eq!(counts[6], 0);
    }

    #[test]
    fn layout_mismatch_rejected() {
        let s = sample_system(3);
        let l = chain_layout(2, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(noisy_system(&s, &l, &NoiseConfig::shots(10, 0), &mut rng).is_err());
        assert!(fragment_depth(&l, 0, 5).is_err());
    }
}
