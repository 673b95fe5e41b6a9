use proptest::prelude::*;
use schmidt_forge::certify::{construct_half_d_state, infer_from_pppt, l_threshold};
use schmidt_forge::ppt_sdp::{solve_pppt, trivial_feasible_point, verify_pppt_result, PpptProblem, PpptResult};
use schmidt_forge::sampling::{random_antisymmetric_density, random_antisymmetric_state, random_unitary, seeded};
use schmidt_forge::schmidt::{schmidt_rank, RANK_TOL};
use schmidt_forge::states::psi_0a;
use schmidt_forge::tensor_core::BipartiteOperator;

const TOL: f64 = 1e-7;

fn solve(rho: BipartiteOperator) -> PpptResult {
    let problem = PpptProblem::new(rho).unwrap();
    let r = solve_pppt(&problem).unwrap();
    assert!(verify_pppt_result(&r, &problem).passed);
    r
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn value_is_unchanged_by_local_basis_change(seed in any::<u64>(), d in 3usize..=4, rank in 1usize..=3) {
        let mut rng = seeded(seed);
        let rho = random_antisymmetric_density(&mut rng, d, rank).unwrap();
        let w = random_unitary(&mut rng, d);
        let moved = rho.local_conjugate(&w.conjugate()).unwrap();
        let a = solve(rho).p_value;
        let b = solve(moved).p_value;
        prop_assert!((a - b).abs() <= 2.0 * TOL, "{} vs {}", a, b);
    }

    #[test]
    fn value_stays_between_the_floor_and_one_half(seed in any::<u64>(), d in 2usize..=5, rank in 1usize..=4) {
        let rho = random_antisymmetric_density(&mut seeded(seed), d, rank).unwrap();
        let r = solve(rho);
        prop_assert!(r.p_value >= 0.0);
        prop_assert!(r.p_value <= 0.5 + TOL);
        prop_assert!(r.residuals.within(TOL));
    }

    #[test]
    fn pure_inputs_respect_their_rank_threshold(seed in any::<u64>(), r2 in 1usize..=2, pad in 0usize..=2) {
        // a pure antisymmetric state of Schmidt rank r, padded into r + pad dimensions
        let r = 2 * r2;
        let psi = random_antisymmetric_state(&mut seeded(seed), r).unwrap();
        prop_assert_eq!(schmidt_rank(&psi, RANK_TOL), r);
        let mut rho = BipartiteOperator::projector(&psi);
        if pad > 0 {
            rho = rho.embed(r + pad).unwrap();
        }
        let p = solve(rho).p_value;
        prop_assert!(p >= l_threshold(r).unwrap() - TOL, "rank {}: {}", r, p);
    }

    #[test]
    fn inferred_bounds_are_even(d in 2usize..=20, p in 0.0f64..=0.5) {
        let c = infer_from_pppt(d, p, TOL).unwrap();
        prop_assert_eq!(c.schmidt_lower_bound % 2, 0);
        prop_assert!(c.schmidt_lower_bound >= 2);
    }
}

#[test]
fn trivial_point_always_validates() {
    let mut rng = seeded(9);
    for d in 2..=6 {
        let rho = random_antisymmetric_density(&mut rng, d, 2).unwrap();
        let problem = PpptProblem::new(rho).unwrap();
        let r = trivial_feasible_point(&problem).unwrap();
        assert!(verify_pppt_result(&r, &problem).passed, "d = {d}");
    }
}

#[test]
fn certificates_never_exceed_the_true_rank() {
    for d in [4, 6, 8] {
        let r = solve(BipartiteOperator::projector(&psi_0a(d).unwrap()));
        let bound = infer_from_pppt(d, r.p_value.max(r.upper_bound.min(0.5)), TOL)
            .unwrap()
            .schmidt_lower_bound;
        assert!(bound <= d, "d = {d}: bound {bound}");
    }
}

#[test]
fn constructed_states_pass_the_audit() {
    for d in [4, 6, 8, 10] {
        let (sigma, cert) = construct_half_d_state(d).unwrap();
        let problem = PpptProblem::new(BipartiteOperator::projector(&psi_0a(d).unwrap())).unwrap();
        let result = PpptResult::from_state(&problem, cert.measured_value, sigma).unwrap();
        let report = verify_pppt_result(&result, &problem);
        assert!(report.passed, "d = {d}: {report:?}");
    }
}

#[test]
fn singlet_survives_padding() {
    let singlet = BipartiteOperator::projector(&psi_0a(2).unwrap());
    for d in [3, 5, 8] {
        let p = solve(singlet.embed(d).unwrap()).p_value;
        assert!((p - 0.5).abs() <= 1e-6, "d = {d}: {p}");
    }
}
