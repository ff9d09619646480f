use proptest::prelude::*;
use puiseux::expansion::{
    expand, expand_with_frame, prepare, second_order_closed_form, ExpandOptions,
};
use puiseux::frame::JordanFrame;
use puiseux::linalg::Vector;
use puiseux::scalar::{Complex64, GaussianRational as Q, Scalar, ToleranceConfig};
use puiseux::testing::random_generic_instance;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn options() -> ExpandOptions<Q> {
    ExpandOptions {
        tol: tol(),
        ..Default::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn eigen_equation_and_normalization(seed in any::<u64>(), m in 1usize..=4, extra in 0usize..=2, order in 1usize..=5) {
        let mut rng = StdRng::seed_from_u64(seed);
        let n = m + extra;
        let k = (m + order - 1) / m;
        let inst = random_generic_instance(&mut rng, n, m, k, true);
        let out = expand(&inst.series, &inst.lambda0, order, 0, &options()).unwrap();
        let e = &out.expansion;
        prop_assert_eq!(e.m, m);
        prop_assert_eq!(out.routes.charpoly_value.clone(), out.routes.a_m1_value.clone());
        prop_assert_eq!(e.alphas[0].pow(m as u32), out.routes.a_m1_value.clone());
        for r in e.eigen_equation_residuals(&inst.series).unwrap() {
            prop_assert!(r.iter().all(Q::is_exact_zero));
        }
        let norms = e.normalization_values();
        prop_assert_eq!(norms[0].clone(), Q::one());
        prop_assert!(norms[1..].iter().all(Q::is_exact_zero));
    }

    #[test]
    fn alphas_do_not_depend_on_the_frame(seed in any::<u64>(), m in 1usize..=3, order in 1usize..=4) {
        let mut rng = StdRng::seed_from_u64(seed);
        let k = (m + order - 1) / m;
        let inst = random_generic_instance(&mut rng, m + 1, m, k, true);
        let built = expand(&inst.series, &inst.lambda0, order, 0, &options()).unwrap().expansion;
        let pinned = JordanFrame::from_pinned(&inst.series.coefficients()[0], &inst.lambda0, m, inst.p.clone(), &tol()).unwrap();
        let other = expand_with_frame(&inst.series, pinned, order, 0, &tol()).unwrap();
        prop_assert_eq!(&built.alphas, &other.alphas);

        // raw betas depend on the frame; the eigenvector direction does not,
        // up to the truncation error O(t^(N+1)) with t = eps^(1/m)
        let t: f64 = 1e-3;
        let eps = Complex64::new(t.powi(m as i32), 0.0);
        let (_, x) = built.evaluate_branch_c64(0, eps, 0);
        let (_, y) = other.evaluate_branch_c64(0, eps, 0);
        let coeff = x.inner(&y) / x.inner(&x);
        let off = (y.clone() - x.scale(&coeff)).norm() / y.norm();
        prop_assert!(off <= (1e3 * t.powi(order as i32 + 1)).max(1e-10), "off-direction {off:e}");
    }
}

#[test]
fn closed_second_order_matches_recursion() {
    let mut rng = StdRng::seed_from_u64(7);
    for m in [1usize, 2, 3, 5] {
        for _ in 0..5 {
            let inst = random_generic_instance(&mut rng, m + 1, m, 2, true);
            let (partials, frame, _) = prepare(&inst.series, &inst.lambda0, &options()).unwrap();
            let a = inst.series.coefficients();
            let closed =
                second_order_closed_form(&frame, &a[1], Some(&a[2]), &partials, 0, &tol()).unwrap();
            let e = expand_with_frame(&inst.series, frame, 2, 0, &tol()).unwrap();
            assert_eq!(closed.alpha1, e.alphas[0], "m = {m}");
            assert_eq!(closed.alpha2, e.alphas[1], "m = {m}");
            assert_eq!(closed.alpha2_charpoly, e.alphas[1], "m = {m}");
            assert_eq!(closed.beta0, e.betas[0], "m = {m}");
            assert_eq!(closed.beta1, e.betas[1], "m = {m}");
            assert_eq!(closed.beta2, e.betas[2], "m = {m}");
        }
    }
}

#[test]
fn third_order_formulas() {
    let mut rng = StdRng::seed_from_u64(11);
    for m in [3usize, 4] {
        let inst = random_generic_instance(&mut rng, m + 2, m, 1, true);
        let (_, frame, _) = prepare(&inst.series, &inst.lambda0, &options()).unwrap();
        let a1 = &inst.series.coefficients()[1];
        let e = expand_with_frame(&inst.series, frame.clone(), 3, 0, &tol()).unwrap();
        let (a1v, a2v, a3v) = (
            e.alphas[0].clone(),
            e.alphas[1].clone(),
            e.alphas[2].clone(),
        );
        let pair = |i: usize, j: usize| frame.pair(i, &(a1 * frame.u(j)));
        let mq = Q::from_i64(m as i64);
        let expected_alpha3 = Q::from_ratio(3 - m as i64, 2) * a2v.clone() * a2v.clone()
            / a1v.clone()
            + (pair(m - 2, 1) + pair(m - 1, 2) + pair(m, 3)) / (mq * a1v.pow(m as u32 - 3));
        assert_eq!(a3v, expected_alpha3, "m = {m}");
        let mut beta3: Vector<Q> = frame.u(2).scale(&a3v)
            + frame
                .u(3)
                .scale(&(Q::from_i64(2) * a1v.clone() * a2v.clone()));
        if m == 3 {
            beta3 = beta3 - frame.lambda_matrix() * &(a1 * frame.u(1));
        } else {
            beta3 = beta3 + frame.u(4).scale(&a1v.pow(3));
        }
        assert_eq!(e.betas[3], beta3, "m = {m}");
    }
}
