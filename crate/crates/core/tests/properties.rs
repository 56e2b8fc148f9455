use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statesep::boolean::parity;
use statesep::filters::{canonical_system, permute_columns, transform_system, verify_properties};
use statesep::oracle::{parity_classical, parity_pairwise_quantum, phase_pattern, PhasePattern};
use statesep::states::random_local_unitary;
use statesep::{BooleanFunction, Matrix, Permutation, Sign, DEFAULT_TOLERANCE};

fn function(max_k: usize) -> impl Strategy<Value = BooleanFunction> {
    (1..=max_k).prop_flat_map(|k| {
        proptest::collection::vec(any::<bool>(), 1 << k).prop_map(move |t| BooleanFunction::new(k, t).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pairwise_parity_matches_classical(f in function(8)) {
        let classical = parity_classical(&f);
        let quantum = parity_pairwise_quantum::<f64>(&f).unwrap();
        prop_assert_eq!(classical.sign, quantum.sign);
        prop_assert_eq!(classical.queries, 2 * quantum.queries);
        let odd = f.table().iter().filter(|&&b| b).count() % 2 == 1;
        prop_assert_eq!(parity(&f), Sign::from_odd(odd));
    }

    #[test]
    fn phase_routes_agree(f in function(5)) {
        prop_assert_eq!(phase_pattern::<f64>(&f).unwrap(), PhasePattern::direct(&f));
    }

    #[test]
    fn permutations_preserve_axioms(k in 1usize..=4, seed in any::<u64>()) {
        let s = canonical_system::<f64>(k, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = Permutation::random(s.d(), &mut rng);
        let moved = permute_columns(&s, &p).unwrap();
        prop_assert!(verify_properties(&moved).all_pass());
        let back = permute_columns(&moved, &p.inverse()).unwrap();
        prop_assert_eq!(back.rows(), s.rows());
    }

    #[test]
    fn transport_preserves_axioms(k in 1usize..=2, n in 2usize..=3, seed in any::<u64>()) {
        let s = canonical_system::<f64>(k, n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u: Matrix = random_local_unitary(n, k, 4, &mut rng);
        let moved = transform_system(&s, &u, DEFAULT_TOLERANCE).unwrap();
        prop_assert!(verify_properties(&moved).all_pass());
        for (a, b) in s.operators().iter().zip(moved.operators()) {
            prop_assert!((a.trace() - b.trace()).norm() < 1e-9);
        }
    }
}
