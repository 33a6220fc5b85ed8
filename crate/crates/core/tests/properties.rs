use expquad::*;
use proptest::prelude::*;

fn params() -> impl Strategy<Value = ModelParams> {
    (
        prop::array::uniform3(0.05..1.0f64),
        prop::array::uniform3(0.001..0.05f64),
        -0.5..1.0f64,
        (-0.01..0.03f64, 0.0..0.15f64, 0.0..0.15f64),
    )
        .prop_map(|(b, sigma, kappa, (p1, p2, p3))| ModelParams {
            b,
            sigma,
            kappa,
            psi0: [p1, p2, p3],
        })
}

fn state() -> impl Strategy<Value = FactorState> {
    (0.0..3.0f64, -0.05..0.05f64, -0.2..0.2f64, -0.2..0.2f64)
        .prop_map(|(t, x, y, z)| FactorState::new(t, [x, y, z]).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn rate_plus_spread_is_the_libor_short_rate(p in params(), s in state()) {
        let [x, y, z] = s.psi;
        prop_assert_eq!(short_rate(&s, &p) + spread(&s, &p), x + y * y + (p.kappa * x + z * z));
        if p.kappa * x >= 0.0 {
            prop_assert!(spread(&s, &p) >= 0.0);
        }
    }

    #[test]
    fn coefficients_vanish_at_maturity(p in params(), t in 0.0..10.0f64) {
        let c = coeff_bundle(t, t, &p).unwrap();
        for v in [c.a, c.a_bar, c.a_tilde, c.b1, c.b1_bar, c.c22, c.c33_bar] {
            prop_assert!(v.abs() <= 1e-14);
        }
    }

    #[test]
    fn coefficients_grow_with_maturity(p in params(), t in 0.0..2.0f64, tau in 0.0..10.0f64, extra in 0.0..5.0f64) {
        let near = coeff_bundle(t, t + tau, &p).unwrap();
        let far = coeff_bundle(t, t + tau + extra, &p).unwrap();
        prop_assert!(far.b1 >= near.b1);
        prop_assert!(far.c22 >= near.c22);
        prop_assert!(far.c33_bar >= near.c33_bar);
    }

    #[test]
    fn libor_loading_ratio(p in params(), t in 0.0..2.0f64, tau in 0.01..10.0f64) {
        let c = coeff_bundle(t, t + tau, &p).unwrap();
        prop_assert_eq!(c.b1_bar, (1.0 + p.kappa) * c.b1);
    }

    #[test]
    fn bonds_are_positive_and_routes_agree(p in params(), s in state(), tau in 0.0..15.0f64) {
        let ois = ois_bond(&s, s.t + tau, &p).unwrap().value;
        let libor = libor_bond(&s, s.t + tau, &p).unwrap().value;
        let via = libor_bond_from_ois(&s, s.t + tau, &p).unwrap().value;
        prop_assert!(ois > 0.0 && libor > 0.0);
        prop_assert!(((libor - via) / libor).abs() < 1e-12);
    }

    #[test]
    fn forward_variances_are_non_negative(p in params(), t in 0.0..3.0f64, gap in 0.0..5.0f64) {
        let m = forward_moments(t, t + gap, &p).unwrap();
        prop_assert!(m.beta.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn exp_quadratic_is_increasing(mean in -1.0..1.0f64, variance in 0.001..1.0f64, c in -5.0..0.0f64, dc in 0.01..0.4f64) {
        let law = GaussianLaw { mean, variance };
        let low = gaussian_exp_quadratic(&law, c).unwrap();
        prop_assert!(low > 0.0);
        if c + dc < 0.5 / variance {
            prop_assert!(gaussian_exp_quadratic(&law, c + dc).unwrap() > low);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn swap_is_affine_in_rate_and_antisymmetric(p in params(), r1 in -0.02..0.08f64, r2 in -0.02..0.08f64) {
        let s = p.initial_state();
        let payer = |rate: f64| SwapSpec { first_reset: 1.0, periods: 4, period_length: 0.5, rate, notional: 1.0, side: SwapSide::Payer };
        let annuity: f64 = (1..=4).map(|k| 0.5 * ois_bond(&s, payer(0.0).date(k), &p).unwrap().value).sum();
        let v1 = swap_price(&s, &payer(r1), &p).unwrap();
        let v2 = swap_price(&s, &payer(r2), &p).unwrap();
        prop_assert!((v1 - v2 + annuity * (r1 - r2)).abs() < 1e-12);
        let receiver = swap_price(&s, &SwapSpec { side: SwapSide::Receiver, ..payer(r1) }, &p).unwrap();
        prop_assert!((receiver + v1).abs() < 1e-15);
    }

    #[test]
    fn caplet_is_non_negative_and_decreasing_in_strike(p in params(), k in -0.01..0.08f64, dk in 0.001..0.02f64) {
        let quad = QuadratureConfig::default();
        let cap = |strike: f64| CapletSpec { fixing: 1.0, delta: 0.5, strike, notional: 1.0 };
        let low = caplet_price(&cap(k), &p, &quad).unwrap();
        let high = caplet_price(&cap(k + dk), &p, &quad).unwrap();
        prop_assert!(high >= 0.0);
        prop_assert!(high <= low + 1e-15);
    }

    #[test]
    fn cap_floor_parity(p in params(), k in -0.01..0.08f64) {
        let quad = QuadratureConfig::default();
        let cap = CapletSpec { fixing: 1.0, delta: 0.5, strike: k, notional: 1.0 };
        let s = p.initial_state();
        let fra = fra_price(&s, &FraSpec { fixing: 1.0, delta: 0.5, rate: k, notional: 1.0 }, &p).unwrap();
        let gap = caplet_price(&cap, &p, &quad).unwrap() - floorlet_price(&cap, &p, &quad).unwrap() - fra;
        prop_assert!(gap.abs() < 1e-15);
    }

    #[test]
    fn exercise_boundaries_are_symmetric(p in params(), k in -0.01..0.08f64, x in -0.1..0.1f64, y in -0.3..0.3f64) {
        let cap = CapletSpec { fixing: 1.0, delta: 0.5, strike: k, notional: 1.0 };
        if let Some((lo, hi)) = caplet_region(x, y, &cap, &p).unwrap().roots {
            prop_assert_eq!(lo, -hi);
            prop_assert!(lo <= 0.0);
        }
        let swap = SwapSpec { first_reset: 1.0, periods: 4, period_length: 0.5, rate: k, notional: 1.0, side: SwapSide::Payer };
        let pricer = SwaptionPricer::new(&SwaptionSpec { swap }, &p).unwrap();
        if let Some((lo, hi)) = pricer.region(x, y).unwrap().roots {
            prop_assert_eq!(lo, -hi);
            let at = pricer.payoff.value(x, y, hi);
            let scale = pricer.payoff.fixed_terms.iter().map(|t| (t[0] - t[1] * x - t[2] * y * y).exp()).sum::<f64>();
            prop_assert!(at.abs() < 1e-9 * scale, "g - h = {at} at z = {hi}");
        }
    }
}
