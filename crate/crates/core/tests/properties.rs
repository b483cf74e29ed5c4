use gibbsfit::linalg::{
    eigh, embed_operator, frobenius_norm, hilbert_schmidt_inner, log_trace_exp, matrix_exp, partial_trace, psd_modulus, psd_power,
    von_neumann_entropy, HermitianMatrix, PSD_TOL, TRACE_TOL,
};
use gibbsfit::observable::{Observable, ObservableSet};
use gibbsfit::partition::{gradient, log_partition};
use gibbsfit::pauli::{expand, reconstruct, PauliString};
use gibbsfit::random::{random_density, random_hermitian, seeded};
use proptest::prelude::*;

fn dims() -> impl Strategy<Value = usize> {
    prop::sample::select(vec![2usize, 4, 8, 16, 64])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn eigh_reconstructs_and_is_unitary(dim in dims(), seed in any::<u64>(), radius in 0.1f64..50.0) {
        let h = random_hermitian(dim, radius, &mut seeded(seed));
        let eig = eigh(&h).unwrap();
        let back = eig.with_weights(&eig.eigenvalues);
        prop_assert!(frobenius_norm(&(&*back - &*h)) <= 1e-12 * radius.max(1.0) * dim as f64);
        let v = &eig.eigenvectors;
        let gram = &v.adjoint() * v;
        let id = HermitianMatrix::identity(dim);
        prop_assert!(frobenius_norm(&(&gram - &*id)) <= 1e-12 * dim as f64);
        prop_assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn golden_thompson(dim in prop::sample::select(vec![2usize, 4, 8]), seed in any::<u64>(), radius in 0.1f64..5.0) {
        let mut rng = seeded(seed);
        let a = random_hermitian(dim, radius, &mut rng);
        let b = random_hermitian(dim, radius, &mut rng);
        let lhs = log_trace_exp(&(&a + &b)).unwrap();
        let ea = matrix_exp(&a).unwrap();
        let eb = matrix_exp(&b).unwrap();
        let rhs = ea.trace_product(&eb).ln();
        prop_assert!(lhs <= rhs + 1e-12 * rhs.abs().max(1.0));
    }

    #[test]
    fn holder_bound(dim in prop::sample::select(vec![2usize, 4, 8]), seed in any::<u64>(), p in 1.1f64..6.0) {
        let mut rng = seeded(seed);
        let a = random_hermitian(dim, 3.0, &mut rng);
        let b = random_hermitian(dim, 3.0, &mut rng);
        let q = p / (p - 1.0);
        let schatten = |m: &HermitianMatrix, r: f64| {
            psd_power(&psd_modulus(m).unwrap(), r).unwrap().trace_re().powf(1.0 / r)
        };
        let lhs = hilbert_schmidt_inner(&a, &b).unwrap().norm();
        prop_assert!(lhs <= schatten(&a, p) * schatten(&b, q) * (1.0 + 1e-12) + 1e-14);
    }

    #[test]
    fn partial_trace_stays_a_state(n in 1usize..=5, seed in any::<u64>(), mask in 1u32..32) {
        let rho = random_density(1 << n, &mut seeded(seed));
        let keep: Vec<usize> = (0..n).filter(|q| mask & (1 << q) != 0).collect();
        prop_assume!(!keep.is_empty());
        let sub = partial_trace(&rho, n, &keep).unwrap();
        prop_assert!((sub.trace_re() - 1.0).abs() <= TRACE_TOL);
        prop_assert!(eigh(&sub).unwrap().min_eigenvalue() >= -PSD_TOL);
    }

    #[test]
    fn entropy_is_additive_on_products(a in 1usize..=3, b in 1usize..=3, seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let r = random_density(1 << a, &mut rng);
        let s = random_density(1 << b, &mut rng);
        let joint = von_neumann_entropy(&r.tensor(&s)).unwrap();
        let sum = von_neumann_entropy(&r).unwrap() + von_neumann_entropy(&s).unwrap();
        prop_assert!((joint - sum).abs() <= 1e-10);
        prop_assert!(joint <= (a + b) as f64 + 1e-12);
    }

    #[test]
    fn pauli_expansion_round_trips(k in 1usize..=4, seed in any::<u64>()) {
        let h = random_hermitian(1 << k, 2.0, &mut seeded(seed));
        let back = reconstruct(&expand(&h).unwrap()).unwrap();
        prop_assert!(frobenius_norm(&(&*back - &*h)) <= 1e-12);
    }

    #[test]
    fn translation_shifts_psi_only(theta in prop::collection::vec(-4.0f64..4.0, 2), shift in -3.0f64..3.0) {
        let n = 2;
        let z0 = Observable::pauli(PauliString::parse("Z0", n).unwrap());
        let xx = Observable::pauli(PauliString::parse("X0 X1", n).unwrap());
        let plain = ObservableSet::new(4, vec![z0.clone(), xx.clone()]).unwrap();
        let moved = ObservableSet::new(4, vec![z0.shifted(shift), xx]).unwrap();
        let dpsi = log_partition(&theta, &moved).unwrap() - log_partition(&theta, &plain).unwrap();
        prop_assert!((dpsi - theta[0] * shift).abs() <= 1e-12 * (1.0 + dpsi.abs()));
        let g0 = gradient(&theta, &plain).unwrap();
        let g1 = gradient(&theta, &moved).unwrap();
        prop_assert!((g1[0] - g0[0] - shift).abs() <= 1e-12);
        prop_assert!((g1[1] - g0[1]).abs() <= 1e-12);
    }

    #[test]
    fn embedding_commutes_with_partial_trace(seed in any::<u64>(), q in 0usize..3) {
        let n = 3;
        let local = random_hermitian(2, 1.0, &mut seeded(seed));
        let big = embed_operator(&local, &[q], n).unwrap();
        let rho = random_density(1 << n, &mut seeded(seed ^ 1));
        let sub = partial_trace(&rho, n, &[q]).unwrap();
        let global = hilbert_schmidt_inner(&big, &rho).unwrap().re;
        let reduced = hilbert_schmidt_inner(&local, &sub).unwrap().re;
        prop_assert!((global - reduced).abs() <= 1e-12);
    }
}
