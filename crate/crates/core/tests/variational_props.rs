mod common;

use avqds::kernel::{PauliString, StateVector};
use avqds::solvers::{solve, SolverConfig};
use avqds::variational::{layout, Ansatz, TangentSpace};
use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_ansatz(rng: &mut ChaCha8Rng, n: usize, n_params: usize) -> Ansatz<f64> {
    let reference = random_state(rng, n);
    let gens: Vec<PauliString> = (0..n_params).map(|_| random_pauli(rng, n, 3.min(n))).collect();
    let angles = (0..n_params).map(|_| rng.random_range(-3.2..3.2)).collect();
    Ansatz::from_parts(reference, gens, angles).unwrap()
}

/// Layer of each gate by brute force: one past the latest earlier gate it
/// shares a qubit with.
fn asap_layers(gens: &[PauliString]) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        let l = (0..i)
            .filter(|&j| gens[j].overlaps(g))
            .map(|j| out[j] + 1)
            .max()
            .unwrap_or(0);
        out.push(l);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn prepared_state_matches_dense_product(seed in any::<u64>(), n in 1usize..6, np in 0usize..10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_ansatz(&mut rng, n, np);
        let want = dense_ansatz(a.reference().amplitudes(), a.generators(), a.angles());
        prop_assert!(max_diff(a.prepare_state().amplitudes(), &want) < 1e-12);
    }

    #[test]
    fn system_matches_dense_oracle(seed in any::<u64>(), n in 2usize..6, np in 1usize..10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_ansatz(&mut rng, n, np);
        let h = random_local_hamiltonian(&mut rng, n);
        let s = TangentSpace::new(&a, &h).unwrap().system();
        let (m, v, var) = dense_system(a.reference().amplitudes(), a.generators(), a.angles(), &dense_sum(&h));
        for r in 0..np {
            prop_assert!((s.v[r] - v[r]).abs() < 1e-11);
            for c in 0..np {
                prop_assert!((s.m[(r, c)] - m[r][c]).abs() < 1e-11);
                prop_assert_eq!(s.m[(r, c)], s.m[(c, r)]);
            }
        }
        prop_assert!((s.var_h - var).abs() < 1e-11);
    }

    #[test]
    fn distance_matches_direct_norm(seed in any::<u64>(), n in 2usize..5, np in 1usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_ansatz(&mut rng, n, np);
        let h = random_local_hamiltonian(&mut rng, n);
        let s = TangentSpace::new(&a, &h).unwrap().system();
        let rates: Vec<f64> = (0..np).map(|_| rng.random_range(-2.0..2.0)).collect();
        let want = dense_distance(a.reference().amplitudes(), a.generators(), a.angles(), &dense_sum(&h), &rates);
        prop_assert!((s.mclachlan_distance(&rates).unwrap() - want).abs() < 1e-10);
    }

    #[test]
    fn solved_rates_never_increase_distance(seed in any::<u64>(), n in 2usize..5, np in 1usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_ansatz(&mut rng, n, np);
        let h = random_local_hamiltonian(&mut rng, n);
        let s = TangentSpace::new(&a, &h).unwrap().system();
        let sol = solve(&s, &SolverConfig::truncation(1e-10)).unwrap();
        let l2 = s.mclachlan_distance(&sol.theta_dot).unwrap();
        prop_assert!(l2 <= 2.0 * s.var_h + 1e-10);
        let perturbed: Vec<f64> = sol.theta_dot.iter().map(|x| x + rng.random_range(-0.1..0.1)).collect();
        prop_assert!(l2 <= s.mclachlan_distance(&perturbed).unwrap() + 1e-9);
    }

    #[test]
    fn augmentation_equals_reassembly(seed in any::<u64>(), n in 2usize..6, np in 0usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_ansatz(&mut rng, n, np);
        let h = random_local_hamiltonian(&mut rng, n);
        let g = random_pauli(&mut rng, n, 2.min(n));
        let space = TangentSpace::new(&a, &h).unwrap();
        let ext = space.system().extended(&space.augment(&g).unwrap());
        let full = TangentSpace::new(&a.extended(&[g]).unwrap(), &h).unwrap().system();
        for r in 0..=np {
            prop_assert!((ext.v[r] - full.v[r]).abs() < 1e-12);
            for c in 0..=np {
                prop_assert!((ext.m[(r, c)] - full.m[(r, c)]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn layout_agrees_with_brute_force_schedule(seed in any::<u64>(), n in 1usize..8, np in 0usize..30) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens: Vec<PauliString> = (0..np).map(|_| random_pauli(&mut rng, n, 3.min(n))).collect();
        let lay = layout(n, &gens);
        let want = asap_layers(&gens);
        let depth = want.iter().map(|l| l + 1).max().unwrap_or(0);
        prop_assert_eq!(lay.depth(), depth);
        for (i, &l) in want.iter().enumerate() {
            prop_assert_eq!(lay.layer_of(i), Some(l));
            let prefix = want[..=i].iter().map(|l| l + 1).max().unwrap();
            prop_assert_eq!(lay.fragment_depth(i, 0), Some(prefix));
        }
        let cnots: usize = gens.iter().map(|g| if g.weight() < 2 { 0 } else { 2 * (g.weight() - 1) }).sum();
        prop_assert_eq!(lay.cnot_count(), cnots);
        for layer in lay.layers() {
            for (x, &i) in layer.iter().enumerate() {
                for &j in &layer[x + 1..] {
                    prop_assert!(!gens[i].overlaps(&gens[j]));
                }
            }
        }
    }
}

#[test]
fn empty_ansatz_has_empty_system() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let h = random_local_hamiltonian(&mut rng, 3);
    let a = Ansatz::new(StateVector::zero_state(3).unwrap());
    let s = TangentSpace::new(&a, &h).unwrap().system();
    assert_eq!(s.dim(), 0);
    let var = h.variance(&a.prepare_state()).unwrap();
    assert!((s.mclachlan_distance(&[]).unwrap() - 2.0 * var).abs() < 1e-12);
}
