use approx::{assert_abs_diff_eq, assert_relative_eq};
use fidkit::bloch::{to_bloch, BasisId};
use fidkit::linalg::{
    eigh, hs_inner, hs_norm, kron, partial_trace, rank_default, tol_recon, trace_norm, ComplexMatrix, Traced,
};
use fidkit::measures::{fidelity_n, fidelity_uj, trace_distance};
use fidkit::rng::trial_rng;
use fidkit::states::{random_mixed, random_mixed_with, random_pure};
use num_complex::Complex64;
use proptest::prelude::*;

fn complex_matrix(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim * dim).prop_map(move |entries| {
        let data = entries.into_iter().map(|(re, im)| Complex64::new(re, im)).collect();
        ComplexMatrix::new(dim, data).expect("square")
    })
}

fn hermitian(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    complex_matrix(dim).prop_map(|a| (&a + &a.adjoint()).scale(0.5))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hs_inner_is_conjugate_symmetric((a, b) in (1usize..=6).prop_flat_map(|d| (complex_matrix(d), complex_matrix(d)))) {
        let ab = hs_inner(&a, &b).unwrap();
        let ba = hs_inner(&b, &a).unwrap();
        assert_abs_diff_eq!(ab.re, ba.re, epsilon = 1e-12);
        assert_abs_diff_eq!(ab.im, -ba.im, epsilon = 1e-12);
        assert_relative_eq!(hs_inner(&a, &a).unwrap().re, hs_norm(&a).powi(2), max_relative = 1e-12);
    }

    #[test]
    fn partial_trace_preserves_trace((a, b) in (1usize..=4, 1usize..=4).prop_flat_map(|(d1, d2)| (complex_matrix(d1), complex_matrix(d2)))) {
        let m = kron(&a, &b);
        let dims = (a.dim(), b.dim());
        let total = m.trace();
        for which in [Traced::First, Traced::Second] {
            let t = partial_trace(&m, dims, which).unwrap().trace();
            assert_abs_diff_eq!(t.re, total.re, epsilon = 1e-12);
            assert_abs_diff_eq!(t.im, total.im, epsilon = 1e-12);
        }
        // the reduction of a product is the kept factor scaled by the traced one
        let kept = partial_trace(&m, dims, Traced::First).unwrap();
        let expected = ComplexMatrix::from_fn(b.dim(), |i, j| a.trace() * b[(i, j)]);
        assert!(kept.max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn trace_norm_is_bounded_by_rank_and_hs_norm(h in (1usize..=8).prop_flat_map(hermitian)) {
        let t = trace_norm(&h).unwrap();
        let hs = hs_norm(&h);
        let r = rank_default(&h).unwrap() as f64;
        prop_assert!(t >= hs - 1e-12);
        prop_assert!(t <= r.sqrt() * hs * (1.0 + 1e-12) + 1e-12);
    }

    #[test]
    fn eigh_reconstructs((d, seed) in (2usize..=32, any::<u64>())) {
        let rho = random_mixed(d, seed);
        let eig = eigh(rho.matrix()).unwrap();
        prop_assert!(eig.reconstruct().max_abs_diff(rho.matrix()) < tol_recon(d));
        prop_assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        let sum: f64 = eig.eigenvalues.iter().sum();
        assert_abs_diff_eq!(sum, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn adjoint_is_an_involution_and_reverses_products((m, n) in (1usize..=5).prop_flat_map(|d| (complex_matrix(d), complex_matrix(d)))) {
        prop_assert_eq!(m.adjoint().adjoint(), m.clone());
        let lhs = m.matmul(&n).adjoint();
        let rhs = n.adjoint().matmul(&m.adjoint());
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn measures_are_symmetric_and_ordered((d, seed) in (2usize..=6, any::<u64>())) {
        let mut rng = trial_rng(seed, 0);
        let a = random_mixed_with(d, &mut rng);
        let b = random_mixed_with(d, &mut rng);
        let f = fidelity_uj(&a, &b).unwrap().value;
        let n = fidelity_n(&a, &b).unwrap().value;
        assert_abs_diff_eq!(f, fidelity_uj(&b, &a).unwrap().value, epsilon = 1e-9);
        assert_abs_diff_eq!(n, fidelity_n(&b, &a).unwrap().value, epsilon = 1e-12);
        prop_assert!((0.0..=1.0).contains(&f) && (0.0..=1.0).contains(&n));
        prop_assert!(f <= n + 1e-9);
    }
}

/// 2 D on qubits is proportional to the Euclidean distance of the Bloch
/// coefficients; with the normalized Gell-Mann basis the constant is sqrt(2).
#[test]
fn qubit_trace_distance_is_proportional_to_bloch_distance() {
    let pairs: Vec<_> = (0..500u64)
        .map(|i| {
            if i % 2 == 0 {
                (random_mixed(2, 2 * i), random_mixed(2, 2 * i + 1))
            } else {
                (random_pure(2, 2 * i), random_mixed(2, 2 * i + 1))
            }
        })
        .collect();
    let ratio = |(a, b): &(fidkit::DensityMatrix, fidkit::DensityMatrix)| {
        let (ra, rb) = (to_bloch(a, BasisId::GellMann), to_bloch(b, BasisId::GellMann));
        let dist = ra
            .coeffs
            .iter()
            .zip(&rb.coeffs)
            .map(|(x, y)| (x - y).powi(2))
            .sum::<f64>()
            .sqrt();
        2.0 * trace_distance(a, b).unwrap().value / dist
    };
    let constant = ratio(&pairs[0]);
    for p in &pairs {
        assert_abs_diff_eq!(ratio(p), constant, epsilon = 1e-9);
    }
    assert_abs_diff_eq!(constant, std::f64::consts::SQRT_2, epsilon = 1e-9);
}
