use num_complex::Complex64;
use proptest::prelude::*;
use schmidt_forge::sampling::{random_hermitian, random_psd, seeded};
use schmidt_forge::tensor_core::{
    antisymmetric_projector, hermitian_eig_matrix, max_abs_diff, symmetric_projector, BipartiteOperator, CMatrix,
};
use schmidt_forge::spectral_analytic::{
    closed_form_spectrum, determinant_closed_form, determinant_direct, determinant_recurrence, ppt_threshold_analytic,
    rational, relative_error, Family,
};
use schmidt_forge::states::sigma_0;
use num_rational::BigRational;

fn uniform_matrix(seed: u64, n: usize) -> CMatrix {
    use rand::Rng;
    let mut rng = seeded(seed);
    CMatrix::from_fn(n, n, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partial_transpose_is_an_involution(seed in any::<u64>(), d in 2usize..=6) {
        let m = uniform_matrix(seed, d * d);
        let op = BipartiteOperator::new(d, m).unwrap();
        prop_assert!(op.partial_transpose().partial_transpose().max_abs_diff(&op) <= 1e-14);
        prop_assert!((op.partial_transpose().trace() - op.trace()).norm() <= 1e-12);
    }

    #[test]
    fn partial_transpose_spectrum_sums_to_trace(seed in any::<u64>(), d in 2usize..=5) {
        let h = random_hermitian(&mut seeded(seed), d).unwrap();
        let eig = hermitian_eig_matrix(h.partial_transpose().matrix()).unwrap();
        let sum: f64 = eig.eigenvalues.iter().sum();
        prop_assert!((sum - h.trace().re).abs() <= 1e-10);
    }

    #[test]
    fn eigendecomposition_reconstructs(seed in any::<u64>(), n in 1usize..=16) {
        let raw = uniform_matrix(seed, n);
        let m = (&raw + raw.adjoint()).map(|z| z * 0.5);
        let eig = hermitian_eig_matrix(&m).unwrap();
        let lambda = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            n,
            eig.eigenvalues.iter().map(|&x| Complex64::from(x)),
        ));
        let rebuilt = &eig.eigenvectors * lambda * eig.eigenvectors.adjoint();
        prop_assert!(max_abs_diff(&rebuilt, &m) <= 1e-9);
        prop_assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn local_unitaries_preserve_positivity(seed in any::<u64>(), d in 2usize..=4) {
        let mut rng = seeded(seed);
        let rho = random_psd(&mut rng, d).unwrap();
        let w = schmidt_forge::sampling::random_unitary(&mut rng, d);
        let moved = rho.local_conjugate(&w).unwrap();
        prop_assert!((moved.trace().re - 1.0).abs() < 1e-12);
        prop_assert!(moved.min_eigenvalue().unwrap() >= -1e-12);
    }

    #[test]
    fn determinant_paths_agree(d2 in 1usize..=6, a in -2.0f64..2.0, b in -2.0f64..2.0, c in -2.0f64..2.0) {
        let d = 2 * d2;
        let direct = determinant_direct(d, a, b, c).unwrap();
        let rec = determinant_recurrence(d, a, b, c).unwrap();
        let closed = determinant_closed_form(d, a, b, c).unwrap();
        let scale = (a.abs() + (d as f64) * b.abs() + c.abs()).powi(d as i32).max(1e-300);
        // absolute agreement on the natural scale of the entries, relative where it matters
        prop_assert!((direct - closed).abs() <= 1e-8 * scale || relative_error(direct, closed) <= 1e-8);
        prop_assert!((rec - closed).abs() <= 1e-8 * scale || relative_error(rec, closed) <= 1e-8);
    }

    #[test]
    fn determinant_paths_agree_exactly(d2 in 1usize..=5, a in -20i64..20, b in -20i64..20, c in -20i64..20, den in 1i64..9) {
        let d = 2 * d2;
        let (a, b, c) = (rational(a, den), rational(b, den), rational(c, den));
        let direct: BigRational = determinant_direct(d, a.clone(), b.clone(), c.clone()).unwrap();
        prop_assert_eq!(&direct, &determinant_recurrence(d, a.clone(), b.clone(), c.clone()).unwrap());
        prop_assert_eq!(&direct, &determinant_closed_form(d, a, b, c).unwrap());
    }

    #[test]
    fn closed_form_spectrum_has_unit_trace(d2 in 1usize..=10, p in 0.0f64..=1.0) {
        let s = closed_form_spectrum(2 * d2, p).unwrap();
        prop_assert!((s.trace() - 1.0).abs() <= 1e-12);
        prop_assert_eq!(s.expanded().len(), 4 * d2 * d2);
    }

    #[test]
    fn closed_form_matches_numerics(d2 in 1usize..=4, p in 0.0f64..=1.0) {
        let d = 2 * d2;
        let numeric = hermitian_eig_matrix(sigma_0(d, p).unwrap().partial_transpose().matrix()).unwrap();
        let closed = closed_form_spectrum(d, p).unwrap().expanded();
        for (x, y) in numeric.eigenvalues.iter().zip(&closed) {
            prop_assert!((x - y).abs() <= 1e-9);
        }
    }
}

#[test]
fn projectors_sum_to_identity_exactly() {
    for d in 2..=8 {
        let sum = symmetric_projector(d).unwrap().add(&antisymmetric_projector(d).unwrap()).unwrap();
        assert_eq!(sum, BipartiteOperator::identity(d));
        let allowed = [0.0, 0.5, -0.5, 1.0];
        assert!(symmetric_projector(d).unwrap().matrix().iter().all(|z| z.im == 0.0 && allowed.contains(&z.re)));
    }
}

#[test]
fn threshold_is_where_the_spectrum_turns_negative() {
    for d in [2usize, 4, 6, 8, 10] {
        let t = ppt_threshold_analytic(d).unwrap();
        let at = closed_form_spectrum(d, t).unwrap();
        assert!(at.min_value() >= -1e-15);
        let past = closed_form_spectrum(d, t + 1e-6).unwrap();
        assert!(past.min_value() < 0.0);
        let binding = if d == 2 { Family::Single } else { Family::Threshold };
        assert!(past.family(binding).value < 0.0);
        if d >= 4 {
            // the remaining family keeps positive slack at the threshold
            assert!(at.family(Family::Single).value > 0.0);
        }
    }
}
