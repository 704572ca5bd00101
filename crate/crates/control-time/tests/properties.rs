use control_time::bch::{bch_m, check_norm_inequality};
use control_time::bounds::nielsen_metric_check;
use control_time::lie::closure;
use control_time::metric::{distance, verify_metric_axioms, BranchSearchConfig};
use control_time::numerics::{
    ad_operator_norm, dev, mat_exp, operator_norm, principal_log_unitary, ComplexMatrix, Tolerances,
};
use control_time::random;
use control_time::schedule::ControlSchedule;
use control_time::synthesis::{shared_tables, synthesize_pair, SynthesisConfig};
use proptest::prelude::*;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn dims() -> impl Strategy<Value = usize> {
    2usize..=4
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norm_chain(seed in any::<u64>(), dim in dims()) {
        let x = random::general(&mut random::rng(seed), dim);
        let (op, fro) = (operator_norm(&x), x.frobenius_norm());
        prop_assert!(op <= fro * (1.0 + 1e-12));
        prop_assert!(fro <= (dim as f64).sqrt() * op * (1.0 + 1e-12));
        prop_assert!(ad_operator_norm(&x) <= 2.0 * op * (1.0 + 1e-12));
    }

    #[test]
    fn deviation_ignores_identity_shift(seed in any::<u64>(), dim in dims(), shift in -5.0f64..5.0) {
        let h = random::hermitian(&mut random::rng(seed), dim, 2.0);
        let shifted = &h + &ComplexMatrix::identity(dim).scale_re(shift);
        let (d0, d1) = (dev(&h, 1e-10).unwrap(), dev(&shifted, 1e-10).unwrap());
        prop_assert!((d0 - d1).abs() < 1e-10);
        prop_assert!(d0 <= h.frobenius_norm() + 1e-12);
    }

    #[test]
    fn exp_log_round_trip(seed in any::<u64>(), dim in dims()) {
        // ‖A‖F < π keeps every eigenphase inside the principal branch.
        let a = random::anti_hermitian(&mut random::rng(seed), dim, 3.0);
        let u = mat_exp(&a);
        prop_assert!(u.is_unitary(1e-12));
        let log = principal_log_unitary(&u, 1e-10).unwrap();
        prop_assert!(log.approx_eq(&a, 1e-9));
    }

    #[test]
    fn closure_is_idempotent_and_covariant(seed in any::<u64>(), dim in dims()) {
        let mut rng = random::rng(seed);
        let gens = [random::anti_hermitian(&mut rng, dim, 1.0), random::anti_hermitian(&mut rng, dim, 1.0)];
        let basis = closure(&gens, &tol()).unwrap();
        prop_assert!(basis.closure_defect() < 1e-9);
        prop_assert!(basis.gram_defect() < 1e-12);
        let again = closure(basis.elements(), &tol()).unwrap();
        prop_assert_eq!(again.len(), basis.len());
        prop_assert!(again.span_distance(&basis).unwrap() < 1e-8);

        let v = mat_exp(&random::anti_hermitian(&mut rng, dim, 2.0));
        let conj = |x: &ComplexMatrix| v.matmul(x).matmul(&v.adjoint());
        let moved = closure(&gens.iter().map(conj).collect::<Vec<_>>(), &tol()).unwrap();
        prop_assert_eq!(moved.len(), basis.len());
        for e in basis.elements() {
            prop_assert!(moved.residual(&conj(e)).unwrap() < 1e-8);
        }
    }

    #[test]
    fn composition_matches_product(seed in any::<u64>(), dim in dims()) {
        let mut rng = random::rng(seed);
        let a = random::anti_hermitian(&mut rng, dim, 0.1);
        let b = random::anti_hermitian(&mut rng, dim, 0.1);
        let out = bch_m(&a, &b, &shared_tables(), 8).unwrap();
        let err = (&mat_exp(&out.m) - &mat_exp(&a).matmul(&mat_exp(&b))).frobenius_norm();
        prop_assert!(err < 1e-12, "{}", err);
    }

    #[test]
    fn norm_inequality_under_gate(seed in any::<u64>(), dim in dims()) {
        let cfg = SynthesisConfig::default();
        let gate = cfg.constants.capital_delta_hat;
        let mut rng = random::rng(seed);
        let a = random::anti_hermitian(&mut rng, dim, 0.99 * gate);
        let b = random::anti_hermitian(&mut rng, dim, 0.99 * gate);
        let r = check_norm_inequality(&a, &b, &cfg.tables, 8, gate, &tol()).unwrap();
        prop_assert!(r.holds);
        prop_assert!(r.lhs <= r.rhs + 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn metric_axioms_in_su2(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let basis = closure(&[random::traceless_anti_hermitian(&mut rng, 2, 1.0),
                              random::traceless_anti_hermitian(&mut rng, 2, 1.0)], &tol()).unwrap();
        let sample: Vec<_> = (0..4).map(|_| random::algebra_unitary(&mut rng, &basis, 3.0)).collect();
        let report = verify_metric_axioms(&sample, Some(&basis), &BranchSearchConfig::default(), &tol()).unwrap();
        prop_assert!(report.passed(), "{:?}", report.violations);
    }

    #[test]
    fn distance_is_left_invariant(seed in any::<u64>(), dim in dims()) {
        let mut rng = random::rng(seed);
        let cfg = BranchSearchConfig::default();
        let u1 = mat_exp(&random::anti_hermitian(&mut rng, dim, 2.0));
        let u2 = mat_exp(&random::anti_hermitian(&mut rng, dim, 2.0));
        let v = mat_exp(&random::anti_hermitian(&mut rng, dim, 2.0));
        let d = distance(&u1, &u2, None, &cfg, &tol()).unwrap().value;
        let dv = distance(&v.matmul(&u1), &v.matmul(&u2), None, &cfg, &tol()).unwrap().value;
        prop_assert!((d - dv).abs() < 1e-8, "{} vs {}", d, dv);
    }

    #[test]
    fn nielsen_chain(seed in any::<u64>(), dim in dims()) {
        let mut rng = random::rng(seed);
        let basis = closure(&[random::anti_hermitian(&mut rng, dim, 1.0),
                              random::anti_hermitian(&mut rng, dim, 1.0)], &tol()).unwrap();
        let a = random::schedule_in_algebra(&mut rng, &basis, 3, 0.8);
        let b_segs: Vec<_> = (0..2).map(|_| (random::algebra_element(&mut rng, &basis, 0.5).mul_neg_i(), 0.5 * a.total_time())).collect();
        let b = ControlSchedule::new(b_segs).unwrap();
        let check = nielsen_metric_check(&a, &b, Some(&basis), &BranchSearchConfig::default(), &tol()).unwrap();
        prop_assert!(check.holds(1e-8), "{} {} {}", check.lhs_frob, check.lhs_d, check.rhs);
    }

    #[test]
    fn synthesis_respects_triangle_at_any_fineness(seed in any::<u64>(), r in prop::sample::select(vec![2usize, 8, 32])) {
        let mut rng = random::rng(seed);
        let a = random::anti_hermitian(&mut rng, 2, 0.15);
        let b = random::anti_hermitian(&mut rng, 2, 0.15);
        let cfg = SynthesisConfig::default().with_r(r);
        let (c, trace) = synthesize_pair(&a, &b, &cfg, &tol()).unwrap();
        prop_assert!(c.frobenius_norm() <= a.frobenius_norm() + b.frobenius_norm() + 1e-8);
        prop_assert!((&mat_exp(&c) - &mat_exp(&a).matmul(&mat_exp(&b))).frobenius_norm() < 1e-8);
        prop_assert!(trace.max_u_increase() <= 1e-12);
        prop_assert!(trace.min_descent_slack() >= -1e-10);
    }
}
