//! Independent dense reference implementations used as test oracles.
#![allow(dead_code)]

use avqds::kernel::{Pauli, PauliString, StateVector, WeightedPauliSum};
use num_complex::Complex64 as C;
use rand::Rng;

pub type Dense = Vec<Vec<C>>;

fn single(p: Pauli) -> [[C; 2]; 2] {
    let o = C::new(0.0, 0.0);
    let l = C::new(1.0, 0.0);
    let i = C::new(0.0, 1.0);
    match p {
        Pauli::I => [[l, o], [o, l]],
        Pauli::X => [[o, l], [l, o]],
        Pauli::Y => [[o, -i], [i, o]],
        Pauli::Z => [[l, o], [o, -l]],
    }
}

/// Kronecker product `σ_{n-1} ⊗ … ⊗ σ_0` (qubit 0 is the least significant bit).
pub fn dense_pauli(p: &PauliString) -> Dense {
    let n = p.n_qubits();
    let d = 1usize << n;
    let mut out = vec![vec![C::new(0.0, 0.0); d]; d];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, e) in row.iter_mut().enumerate() {
            let mut v = C::new(1.0, 0.0);
            for q in 0..n {
                v *= single(p.site(q))[(r >> q) & 1][(c >> q) & 1];
            }
            *e = v;
        }
    }
    out
}

pub fn dense_sum(h: &WeightedPauliSum<f64>) -> Dense {
    let d = 1usize << h.n_qubits();
    let mut out = vec![vec![C::new(0.0, 0.0); d]; d];
    for (w, p) in h.terms() {
        let m = dense_pauli(p);
        for r in 0..d {
            for c in 0..d {
                out[r][c] += m[r][c] * *w;
            }
        }
    }
    out
}

pub fn matvec(m: &Dense, v: &[C]) -> Vec<C> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

pub fn inner(a: &[C], b: &[C]) -> C {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn infidelity(a: &[C], b: &[C]) -> f64 {
    1.0 - inner(a, b).norm_sqr()
}

pub fn max_diff(a: &[C], b: &[C]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `e^{-iHt}|ψ⟩` by a Taylor series on sub-steps of length ≤ 0.05.
pub fn taylor_evolve(h: &Dense, psi: &[C], t: f64) -> Vec<C> {
    let n_sub = (t / 0.05).ceil().max(1.0) as usize;
    let dt = t / n_sub as f64;
    let mut cur = psi.to_vec();
    for _ in 0..n_sub {
        let mut term = cur.clone();
        let mut acc = cur.clone();
        for k in 1..40 {
            term = matvec(h, &term)
                .into_iter()
                .map(|x| x * C::new(0.0, -dt / k as f64))
                .collect();
            for (a, b) in acc.iter_mut().zip(&term) {
                *a += b;
            }
            if term.iter().map(|x| x.norm()).fold(0.0, f64::max) < 1e-18 {
                break;
            }
        }
        cur = acc;
    }
    cur
}

/// `(cos θ − i sin θ P)|ψ⟩` with a dense `P`.
pub fn dense_rotate(p: &PauliString, theta: f64, psi: &[C]) -> Vec<C> {
    let pm = matvec(&dense_pauli(p), psi);
    psi.iter()
        .zip(&pm)
        .map(|(a, b)| a * theta.cos() + b * C::new(0.0, -theta.sin()))
        .collect()
}

/// Ansatz state `∏_{μ=N..1} e^{-iθ_μ P_μ}|ψ_ref⟩` applied gate by gate.
pub fn dense_ansatz(reference: &[C], gens: &[PauliString], angles: &[f64]) -> Vec<C> {
    let mut s = reference.to_vec();
    for (g, &th) in gens.iter().zip(angles) {
        s = dense_rotate(g, th, &s);
    }
    s
}

/// `M`, `V`, `var[H]` from dense tangent vectors `|∂_μΨ⟩`.
pub fn dense_system(
    reference: &[C],
    gens: &[PauliString],
    angles: &[f64],
    h: &Dense,
) -> (Vec<Vec<f64>>, Vec<f64>, f64) {
    let psi = dense_ansatz(reference, gens, angles);
    let n = gens.len();
    let tangents: Vec<Vec<C>> = (0..n)
        .map(|mu| {
            let mut s = dense_ansatz(reference, &gens[..mu], &angles[..mu]);
            s = dense_rotate(&gens[mu], angles[mu], &s);
            s = matvec(&dense_pauli(&gens[mu]), &s)
                .into_iter()
                .map(|x| x * C::new(0.0, -1.0))
                .collect();
            for k in mu + 1..n {
                s = dense_rotate(&gens[k], angles[k], &s);
            }
            s
        })
        .collect();
    let hpsi = matvec(h, &psi);
    let e = inner(&psi, &hpsi).re;
    let var = inner(&hpsi, &hpsi).re - e * e;
    let ovl: Vec<C> = tangents.iter().map(|t| inner(t, &psi)).collect();
    let m = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| (inner(&tangents[a], &tangents[b]) - ovl[a] * ovl[b].conj()).re)
                .collect()
        })
        .collect();
    let v = (0..n)
        .map(|a| (inner(&tangents[a], &hpsi) - ovl[a] * e).im)
        .collect();
    (m, v, var)
}

/// `‖ |dΨ/dt⟩ − (−i(H − E))|Ψ⟩ ‖²` built directly from vectors, with the
/// global phase of the variational derivative removed by projecting out `|Ψ⟩`.
pub fn dense_distance(
    reference: &[C],
    gens: &[PauliString],
    angles: &[f64],
    h: &Dense,
    rates: &[f64],
) -> f64 {
    let psi = dense_ansatz(reference, gens, angles);
    let n = gens.len();
    let mut deriv = vec![C::new(0.0, 0.0); psi.len()];
    for mu in 0..n {
        let mut s = dense_ansatz(reference, &gens[..mu], &angles[..mu]);
        s = dense_rotate(&gens[mu], angles[mu], &s);
        s = matvec(&dense_pauli(&gens[mu]), &s);
        for k in mu + 1..n {
            s = dense_rotate(&gens[k], angles[k], &s);
        }
        for (d, x) in deriv.iter_mut().zip(&s) {
            *d += x * C::new(0.0, -rates[mu]);
        }
    }
    let hpsi = matvec(h, &psi);
    let e = inner(&psi, &hpsi).re;
    let ov = inner(&psi, &deriv);
    let diff: Vec<C> = deriv
        .iter()
        .zip(&psi)
        .zip(&hpsi)
        .map(|((d, p), hp)| (d - p * ov) + C::new(0.0, 1.0) * (hp - p * e))
        .collect();
    2.0 * inner(&diff, &diff).re
}

pub fn to_dense_state(s: &StateVector<f64>) -> Vec<C> {
    s.amplitudes().to_vec()
}

pub fn random_pauli<R: Rng>(rng: &mut R, n: usize, max_weight: usize) -> PauliString {
    loop {
        let mut p = PauliString::identity(n);
        for q in 0..n {
            if rng.random_bool(max_weight as f64 / n as f64) {
                let s = [Pauli::X, Pauli::Y, Pauli::Z][rng.random_range(0..3)];
                p = p.with_site(q, s);
            }
        }
        if !p.is_identity() && p.weight() <= max_weight {
            return p;
        }
    }
}

pub fn random_state<R: Rng>(rng: &mut R, n: usize) -> StateVector<f64> {
    let amps: Vec<C> = (0..1usize << n)
        .map(|_| C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let mut s = StateVector::from_amplitudes(amps).unwrap();
    s.normalize().unwrap();
    s
}

/// Nearest-neighbour two-body plus single-site terms with random couplings.
pub fn random_local_hamiltonian<R: Rng>(rng: &mut R, n: usize) -> WeightedPauliSum<f64> {
    let mut h = WeightedPauliSum::empty(n);
    let ps = [Pauli::X, Pauli::Y, Pauli::Z];
    for q in 0..n {
        h.push(rng.random_range(-1.0..1.0), PauliString::single(n, q, ps[rng.random_range(0..3)]))
            .unwrap();
        if q + 1 < n {
            let a = ps[rng.random_range(0..3)];
            let b = ps[rng.random_range(0..3)];
            h.push(rng.random_range(-1.0..1.0), PauliString::two(n, (q, a), (q + 1, b)))
                .unwrap();
        }
    }
    h
}

/// Orthogonal matrix by modified Gram-Schmidt on random columns.
pub fn random_orthogonal<R: Rng>(rng: &mut R, n: usize) -> Vec<Vec<f64>> {
    let mut q: Vec<Vec<f64>> = Vec::with_capacity(n);
    while q.len() < n {
        let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        for u in &q {
            let d: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= d * y;
            }
        }
        let nrm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nrm > 1e-3 {
            q.push(v.into_iter().map(|x| x / nrm).collect());
        }
    }
    q
}

/// `Σ_k λ_k q_k q_kᵀ` for rows `q_k`.
pub fn from_spectrum(q: &[Vec<f64>], lambda: &[f64]) -> Vec<Vec<f64>> {
    let n = q.len();
    let mut m = vec![vec![0.0; n]; n];
    for (qk, &l) in q.iter().zip(lambda) {
        for r in 0..n {
            for c in 0..n {
                m[r][c] += l * qk[r] * qk[c];
            }
        }
    }
    m
}
