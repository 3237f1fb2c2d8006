use proptest::prelude::*;

use qcbound::divergences::{d_max, divergence, Alpha};
use qcbound::linalg::{herm_eigvals, partial_trace, partial_transpose, permute_systems, trace_norm, CMatrix};
use qcbound::sdp::{embed_hermitian, trace_norm_sdp, SolverOptions};
use qcbound::states::{random_separable, random_state, seeded_rng};

fn dims() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(2usize..=3, 2..=3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn partial_trace_preserves_trace_and_positivity(dims in dims(), seed in any::<u64>()) {
        let rho = random_state::<f64>(&dims, seed);
        let reduced = partial_trace(rho.matrix(), &dims, &[0]).unwrap();
        prop_assert!((reduced.trace().re - 1.0).abs() < 1e-12);
        prop_assert!(herm_eigvals(&reduced).unwrap()[0] > -1e-12);
    }

    #[test]
    fn partial_transpose_is_an_involution(dims in dims(), seed in any::<u64>(), sys in 0usize..2) {
        let rho = random_state::<f64>(&dims, seed);
        let once = partial_transpose(rho.matrix(), &dims, &[sys]).unwrap();
        let twice = partial_transpose(&once, &dims, &[sys]).unwrap();
        prop_assert!(twice.max_abs_diff(rho.matrix()) < 1e-15);
        prop_assert!((once.trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn full_transpose_preserves_spectrum(seed in any::<u64>()) {
        let dims = [2usize, 3];
        let rho = random_state::<f64>(&dims, seed);
        let pt = partial_transpose(rho.matrix(), &dims, &[0, 1]).unwrap();
        let a = herm_eigvals(rho.matrix()).unwrap();
        let b = herm_eigvals(&pt).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn permutation_round_trip(seed in any::<u64>()) {
        let dims = [2usize, 3, 2];
        let rho = random_state::<f64>(&dims, seed);
        let p = permute_systems(rho.matrix(), &dims, &[2, 0, 1]).unwrap();
        let back = permute_systems(&p, &[2, 2, 3], &[1, 2, 0]).unwrap();
        prop_assert!(back.max_abs_diff(rho.matrix()) < 1e-15);
    }

    #[test]
    fn real_embedding_doubles_the_spectrum(n in 2usize..=4, seed in any::<u64>()) {
        let rho = random_state::<f64>(&[n], seed);
        let h = rho.matrix();
        let e = embed_hermitian(h).unwrap();
        let mut doubled: Vec<f64> = herm_eigvals(h).unwrap().into_iter().flat_map(|v| [v, v]).collect();
        doubled.sort_by(f64::total_cmp);
        let rows: Vec<Vec<f64>> = (0..2 * n).map(|i| (0..2 * n).map(|j| e.get(i, j)).collect()).collect();
        let mut got = herm_eigvals(&CMatrix::from_real_rows(&rows)).unwrap();
        got.sort_by(f64::total_cmp);
        for (x, y) in doubled.iter().zip(&got) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn divergence_is_monotone_in_alpha(seed in any::<u64>()) {
        let rho = random_state::<f64>(&[2, 2], seed);
        let sigma = random_state::<f64>(&[2, 2], seed ^ 0x9e37_79b9);
        let mut prev = f64::NEG_INFINITY;
        for alpha in [Alpha::One, Alpha::Finite(1.5), Alpha::Finite(2.0), Alpha::Finite(4.0), Alpha::Infinity] {
            let v = divergence(&rho, &sigma, alpha).unwrap().finite().unwrap();
            prop_assert!(v >= prev - 1e-7, "alpha {alpha}: {v} < {prev}");
            prev = v;
        }
        let dmax = d_max(&rho, &sigma).unwrap().finite().unwrap();
        prop_assert!((dmax - prev).abs() < 1e-9);
    }

    #[test]
    fn divergence_vanishes_on_equal_states(seed in any::<u64>()) {
        let rho = random_state::<f64>(&[3], seed);
        for alpha in [Alpha::One, Alpha::Finite(2.0), Alpha::Infinity] {
            let v = divergence(&rho, &rho, alpha).unwrap().finite().unwrap();
            prop_assert!(v.abs() < 1e-8);
        }
    }

    #[test]
    fn separable_states_are_ppt(seed in any::<u64>()) {
        let (sigma, cert) = random_separable::<f64, _>(&[2, 3], 5, &mut seeded_rng(seed));
        let pt = partial_transpose(sigma.matrix(), &[2, 3], &[1]).unwrap();
        prop_assert!(herm_eigvals(&pt).unwrap()[0] > -1e-12);
        prop_assert!(cert.reconstruct().unwrap().max_abs_diff(sigma.matrix()) < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn trace_norm_sdp_matches_eigendecomposition(n in 2usize..=3, seed in any::<u64>()) {
        let a = random_state::<f64>(&[n], seed);
        let b = random_state::<f64>(&[n], seed.wrapping_add(1));
        let h = a.matrix() - b.matrix();
        let (v, sol) = trace_norm_sdp(&h, &SolverOptions::default()).unwrap();
        prop_assert!((v - trace_norm(&h).unwrap()).abs() < 1e-6);
        prop_assert!(sol.dual_value <= sol.primal_value + 1e-8);
    }
}
