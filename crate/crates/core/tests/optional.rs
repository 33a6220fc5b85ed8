mod common;

use common::{base_params, draw_params, positive_part_cubature, rng, Laws};
use expquad::optional::caplet::CapletSpec;
use expquad::*;

fn atm_caplet(p: &ModelParams, fixing: f64, delta: f64) -> CapletSpec {
    let strike = fra_rate(&p.initial_state(), fixing, delta, p).unwrap();
    CapletSpec {
        fixing,
        delta,
        strike,
        notional: 1.0,
    }
}

/// Caplet value from direct cubature of the discounted payoff against the
/// forward-measure factor law.
fn caplet_by_cubature(cap: &CapletSpec, p: &ModelParams) -> f64 {
    let pay = cap.fixing + cap.delta;
    let c = coeff_bundle(cap.fixing, pay, p).unwrap();
    let m = forward_moments(cap.fixing, pay, p).unwrap();
    let laws: Laws = [
        (m.alpha[0], m.beta[0]),
        (m.alpha[1], m.beta[1]),
        (m.alpha[2], m.beta[2]),
    ];
    let gross = 1.0 + cap.delta * cap.strike;
    let value = |x: f64, y: f64, z: f64| {
        (c.a_bar + c.b1_bar * x + c.c22 * y * y + c.c33_bar * z * z).exp() - gross
    };
    let discount = ois_bond(&p.initial_state(), pay, p).unwrap().value;
    cap.notional * discount * checked_cubature(&value, &laws)
}

/// Cubature value, asserting its own step-halving error is well inside 1e-6.
fn checked_cubature(value: &dyn Fn(f64, f64, f64) -> f64, laws: &Laws) -> f64 {
    let (v, err) = positive_part_cubature(value, laws);
    assert!(err < 1e-8 * v.abs(), "oracle unresolved: {v} ± {err}");
    v
}

#[test]
fn caplet_matches_cubature_on_base_parameters() {
    let p = base_params();
    let cap = atm_caplet(&p, 1.0, 0.5);
    let closed = caplet_price(&cap, &p, &QuadratureConfig::default()).unwrap();
    let cub = caplet_by_cubature(&cap, &p);
    assert!(((closed - cub) / cub).abs() < 1e-6, "{closed} vs {cub}");
}

#[test]
fn caplet_matches_cubature_off_the_money() {
    let p = base_params();
    let atm = atm_caplet(&p, 2.0, 0.25);
    for shift in [-0.01, 0.004, 0.015] {
        let cap = CapletSpec {
            strike: atm.strike + shift,
            ..atm
        };
        let closed = caplet_price(&cap, &p, &QuadratureConfig::default()).unwrap();
        let cub = caplet_by_cubature(&cap, &p);
        assert!(
            ((closed - cub) / cub).abs() < 1e-6,
            "shift {shift}: {closed} vs {cub}"
        );
    }
}

#[test]
fn caplet_monotone_in_strike_and_bounded_by_zero_strike_fra() {
    let p = base_params();
    let quad = QuadratureConfig::default();
    let atm = atm_caplet(&p, 1.0, 0.5);
    let mut last = f64::INFINITY;
    for i in 0..12 {
        let strike = atm.strike - 0.03 + 0.006 * i as f64;
        let v = caplet_price(&CapletSpec { strike, ..atm }, &p, &quad).unwrap();
        assert!(v >= 0.0 && v <= last, "strike {strike}");
        last = v;
    }
    // R → −1/Δ: the caplet is always exercised and equals the FRA at that strike
    let strike = -1.0 / atm.delta + 1e-3;
    let cap = CapletSpec { strike, ..atm };
    let v = caplet_price(&cap, &p, &quad).unwrap();
    let fra = fra_price(
        &p.initial_state(),
        &FraSpec {
            fixing: 1.0,
            delta: 0.5,
            rate: strike,
            notional: 1.0,
        },
        &p,
    )
    .unwrap();
    assert!(((v - fra) / fra).abs() < 1e-10);
}

#[test]
fn one_period_swaption_is_a_caplet() {
    let p = base_params();
    let quad = QuadratureConfig::default();
    for (fixing, delta, shift) in [(1.0, 0.5, 0.0), (2.0, 1.0, 0.005), (0.5, 0.25, -0.004)] {
        let cap = atm_caplet(&p, fixing, delta);
        let cap = CapletSpec {
            strike: cap.strike + shift,
            ..cap
        };
        let swap = SwapSpec {
            first_reset: fixing,
            periods: 1,
            period_length: delta,
            rate: cap.strike,
            notional: 1.0,
            side: SwapSide::Payer,
        };
        let c = caplet_price(&cap, &p, &quad).unwrap();
        let s = swaption_price(&SwaptionSpec { swap }, &p, &quad).unwrap();
        assert!(((s - c) / c).abs() < 1e-6, "{c} vs {s}");
    }
}

#[test]
fn one_period_swaption_region_matches_caplet_region() {
    let p = base_params();
    let cap = atm_caplet(&p, 1.0, 0.5);
    let swap = SwapSpec {
        first_reset: 1.0,
        periods: 1,
        period_length: 0.5,
        rate: cap.strike,
        notional: 1.0,
        side: SwapSide::Payer,
    };
    let pricer = SwaptionPricer::new(&SwaptionSpec { swap }, &p).unwrap();
    for (x, y) in [(-0.02, 0.01), (0.0, 0.05), (0.01, -0.03)] {
        let a = caplet_region(x, y, &cap, &p).unwrap();
        let b = pricer.region(x, y).unwrap();
        assert_eq!(a.in_region, b.in_region);
        if let (Some((_, za)), Some((_, zb))) = (a.roots, b.roots) {
            assert!((za - zb).abs() < 1e-9 * za.max(1e-3), "{za} vs {zb}");
        }
    }
}

#[test]
fn case2_payoff_matches_cubature() {
    // Decaying float leg in |z|: exercise happens near z = 0.
    let payoff = QuadraticExpPayoff {
        float_terms: vec![[0.02, 0.8, 0.5, 0.6], [0.01, 1.1, 0.3, 0.9]],
        fixed_terms: vec![[0.6, 0.2, 0.1]],
    };
    let laws = [
        GaussianLaw {
            mean: 0.01,
            variance: 0.04,
        },
        GaussianLaw {
            mean: 0.05,
            variance: 0.09,
        },
        GaussianLaw {
            mean: 0.1,
            variance: 0.25,
        },
    ];
    assert_eq!(payoff.case().unwrap(), SwaptionCase::Case2);
    let closed = payoff
        .expected_positive_part(&laws, &QuadratureConfig::default())
        .unwrap();
    let oracle_laws: Laws = [(0.01, 0.04), (0.05, 0.09), (0.1, 0.25)];
    let cub = checked_cubature(&|x, y, z| payoff.value(x, y, z), &oracle_laws);
    assert!(closed > 1e-3);
    assert!(((closed - cub) / cub).abs() < 1e-6, "{closed} vs {cub}");
}

#[test]
fn case1_payoff_matches_cubature() {
    let payoff = QuadraticExpPayoff {
        float_terms: vec![[0.02, 0.8, 0.5, -0.6], [0.0, 1.1, -0.3, -0.2]],
        fixed_terms: vec![[0.7, 0.2, 0.1], [-0.1, 0.5, 0.0]],
    };
    let laws = [
        GaussianLaw {
            mean: 0.01,
            variance: 0.04,
        },
        GaussianLaw {
            mean: 0.05,
            variance: 0.09,
        },
        GaussianLaw {
            mean: 0.1,
            variance: 0.25,
        },
    ];
    let closed = payoff
        .expected_positive_part(&laws, &QuadratureConfig::default())
        .unwrap();
    let oracle_laws: Laws = [(0.01, 0.04), (0.05, 0.09), (0.1, 0.25)];
    let cub = checked_cubature(&|x, y, z| payoff.value(x, y, z), &oracle_laws);
    assert!(((closed - cub) / cub).abs() < 1e-6, "{closed} vs {cub}");
}

#[test]
fn random_caplets_match_cubature() {
    let mut r = rng(61);
    let quad = QuadratureConfig::default();
    for _ in 0..3 {
        let p = draw_params(&mut r);
        assert!(p.caplet_condition());
        let cap = atm_caplet(&p, 1.5, 0.5);
        let closed = caplet_price(&cap, &p, &quad).unwrap();
        let cub = caplet_by_cubature(&cap, &p);
        assert!(
            ((closed - cub) / cub).abs() < 1e-6,
            "{p:?}: {closed} vs {cub}"
        );
    }
}

#[test]
fn mixed_case_detection_on_long_tenor_spread_volatility() {
    let mut p = base_params();
    p.b[2] = 0.05;
    p.sigma[2] = 0.5;
    let swap = SwapSpec {
        first_reset: 1.0,
        periods: 4,
        period_length: 1.0,
        rate: 0.02,
        notional: 1.0,
        side: SwapSide::Payer,
    };
    match swaption_case(&swap, &p) {
        Err(PricingError::MixedCase { case1, case2 }) => {
            assert_eq!(case1[0], 1);
            assert!(!case2.is_empty());
        }
        other => panic!("expected MixedCase, got {other:?}"),
    }
    assert!(matches!(
        swaption_price(&SwaptionSpec { swap }, &p, &QuadratureConfig::default()),
        Err(PricingError::MixedCase { .. })
    ));
}

#[test]
fn node_doubling_is_stable() {
    let p = base_params();
    let cap = atm_caplet(&p, 1.0, 0.5);
    let fixed = |n| QuadratureConfig {
        n_nodes_per_axis: n,
        truncation: 8.0,
        max_refinements: 0,
    };
    let a = caplet_price(&cap, &p, &fixed(128)).unwrap();
    let b = caplet_price(&cap, &p, &fixed(256)).unwrap();
    assert!(((a - b) / b).abs() < 1e-7);
    let swap = SwapSpec {
        first_reset: 1.0,
        periods: 4,
        period_length: 0.5,
        rate: 0.02,
        notional: 1.0,
        side: SwapSide::Payer,
    };
    let a = swaption_price(&SwaptionSpec { swap }, &p, &fixed(128)).unwrap();
    let b = swaption_price(&SwaptionSpec { swap }, &p, &fixed(256)).unwrap();
    assert!(((a - b) / b).abs() < 1e-7);
}

fn light_mc(seed: u64) -> McConfig {
    McConfig {
        n_paths: 200_000,
        steps_per_year: 128,
        seed,
        ..McConfig::default()
    }
}

#[test]
fn caplet_and_floorlet_match_monte_carlo() {
    let p = base_params();
    let quad = QuadratureConfig::default();
    let cap = atm_caplet(&p, 1.0, 0.5);
    let price = caplet_price(&cap, &p, &quad).unwrap();
    let est = mc_price(&p, &ProductSpec::Caplet(cap), &light_mc(71)).unwrap();
    assert!(
        est.z_score(price).abs() < 3.0,
        "caplet z = {}",
        est.z_score(price)
    );
    let floor = CapletSpec {
        strike: cap.strike + 0.005,
        ..cap
    };
    let price = floorlet_price(&floor, &p, &quad).unwrap();
    let est = mc_price(&p, &ProductSpec::Floorlet(floor), &light_mc(72)).unwrap();
    assert!(
        est.z_score(price).abs() < 3.0,
        "floorlet z = {}",
        est.z_score(price)
    );
}

#[test]
fn zero_strike_floorlet_prices_negative_rates() {
    // Gaussian factors allow negative Libor, so a zero-strike floorlet is
    // small but not zero
    let p = base_params();
    let quad = QuadratureConfig::default();
    let floor = CapletSpec {
        fixing: 1.0,
        delta: 0.5,
        strike: 0.0,
        notional: 1.0,
    };
    let price = floorlet_price(&floor, &p, &quad).unwrap();
    let cap = caplet_price(&atm_caplet(&p, 1.0, 0.5), &p, &quad).unwrap();
    assert!(price > 0.0 && price < 0.5 * cap, "{price} vs caplet {cap}");
    let est = mc_price(&p, &ProductSpec::Floorlet(floor), &light_mc(73)).unwrap();
    assert!(est.z_score(price).abs() < 3.0, "z = {}", est.z_score(price));
}

#[test]
fn swaption_matches_monte_carlo() {
    let p = base_params();
    let swap = SwapSpec {
        first_reset: 1.0,
        periods: 4,
        period_length: 0.5,
        rate: 0.02,
        notional: 1.0,
        side: SwapSide::Payer,
    };
    let price = swaption_price(&SwaptionSpec { swap }, &p, &QuadratureConfig::default()).unwrap();
    let est = mc_price(
        &p,
        &ProductSpec::Swaption(SwaptionSpec { swap }),
        &light_mc(74),
    )
    .unwrap();
    assert!(est.z_score(price).abs() < 3.0, "z = {}", est.z_score(price));
}

#[test]
fn swaption_dominates_its_swap() {
    let mut r = rng(75);
    let quad = QuadratureConfig::default();
    for _ in 0..5 {
        let p = draw_params(&mut r);
        for rate in [0.0, 0.03, 0.08] {
            let swap = SwapSpec {
                first_reset: 1.0,
                periods: 4,
                period_length: 0.5,
                rate,
                notional: 1.0,
                side: SwapSide::Payer,
            };
            let option = swaption_price(&SwaptionSpec { swap }, &p, &quad).unwrap();
            let underlying = swap_price(&p.initial_state(), &swap, &p).unwrap();
            assert!(
                option >= underlying.max(0.0) - 1e-12,
                "{option} < {underlying}"
            );
        }
    }
}
