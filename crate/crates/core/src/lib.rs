//! Pricing library for the two-curve Gaussian exponentially quadratic short-rate model.
//!
//! The OIS short rate and the Libor spread are quadratic functions of three
//! independent Ornstein–Uhlenbeck factors, which makes OIS and Libor bond prices
//! exponentials of quadratic forms in the factors. On top of the bond prices the
//! crate provides closed-form FRA and swap pricers, semi-closed caplet and
//! swaption pricers, and a Monte Carlo engine used to validate them.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coeffs;
pub mod curves;
pub mod error;
pub mod linear;
pub mod measures;
pub mod model;
pub mod numerics;
pub mod optional;
pub mod oracle;
pub mod product;

pub use error::{PricingError, Result};

pub use coeffs::{
    a_pair, b1, b1_bar, c22, c33_bar, coeff_bundle, riccati_residual, CoeffBundle, CoeffCache,
    OdeId,
};
pub use curves::{bond, inst_forward, libor_bond, libor_bond_from_ois, ois_bond, BondQuote, Curve};
pub use linear::{
    adjustment, expectation_coeffs, fra_price, fra_rate, residual, single_curve_fra_rate,
    swap_fair_rate, swap_price, swap_price_by_periods, v_multi, v_single, ExpectationCoeffs,
    FraSpec, SwapKernel, SwapSide, SwapSpec,
};
pub use measures::{
    forward_moments, forward_moments_with, gaussian_exp_quadratic, gaussian_mgf, q_conditional_law,
    ForwardMoments, GaussianLaw, MomentMethod,
};
pub use model::{short_rate, spread, validate, FactorState, ModelParams, ValidationReport};
pub use optional::{
    caplet_price, caplet_region, floorlet_price, swaption_case, swaption_price, swaption_region,
    CapletSpec, QuadraticExpPayoff, QuadratureConfig, RegionBoundary, SwaptionCase, SwaptionPricer,
    SwaptionSpec,
};
pub use oracle::{
    mc_bond, mc_expectation, mc_expectations, mc_forward_expectation, mc_forward_expectations,
    mc_price, simulate_paths, McConfig, McEstimate, PathEnsemble, PathObservation,
};
pub use product::ProductSpec;
