//! OIS and Libor zero-coupon bonds and their instantaneous forward rates.

use serde::{Deserialize, Serialize};

use crate::coeffs::{a_pair_slope, coeff_bundle, riccati_c_slope, CoeffBundle};
use crate::error::{check_order, Result};
use crate::model::{FactorState, ModelParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Curve {
    Ois,
    Libor,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BondQuote {
    pub t: f64,
    pub maturity: f64,
    pub value: f64,
    pub curve: Curve,
}

/// −log p(t,T) for a precomputed coefficient bundle.
pub(crate) fn ois_log_discount(c: &CoeffBundle, psi: &[f64; 3]) -> f64 {
    c.a + c.b1 * psi[0] + c.c22 * psi[1] * psi[1]
}

/// −log p̄(t,T) for a precomputed coefficient bundle.
pub(crate) fn libor_log_discount(c: &CoeffBundle, psi: &[f64; 3]) -> f64 {
    c.a_bar + c.b1_bar * psi[0] + c.c22 * psi[1] * psi[1] + c.c33_bar * psi[2] * psi[2]
}

pub fn ois_bond(state: &FactorState, maturity: f64, params: &ModelParams) -> Result<BondQuote> {
    let c = coeff_bundle(state.t, maturity, params)?;
    Ok(BondQuote {
        t: state.t,
        maturity,
        value: (-ois_log_discount(&c, &state.psi)).exp(),
        curve: Curve::Ois,
    })
}

pub fn libor_bond(state: &FactorState, maturity: f64, params: &ModelParams) -> Result<BondQuote> {
    let c = coeff_bundle(state.t, maturity, params)?;
    Ok(BondQuote {
        t: state.t,
        maturity,
        value: (-libor_log_discount(&c, &state.psi)).exp(),
        curve: Curve::Libor,
    })
}

/// p̄(t,T) assembled as p(t,T)·exp[−Ã − κB¹Ψ¹ − C̄³³(Ψ³)²].
pub fn libor_bond_from_ois(
    state: &FactorState,
    maturity: f64,
    params: &ModelParams,
) -> Result<BondQuote> {
    let c = coeff_bundle(state.t, maturity, params)?;
    let p = (-ois_log_discount(&c, &state.psi)).exp();
    let psi = &state.psi;
    let ratio = (-c.a_tilde - params.kappa * c.b1 * psi[0] - c.c33_bar * psi[2] * psi[2]).exp();
    Ok(BondQuote {
        t: state.t,
        maturity,
        value: p * ratio,
        curve: Curve::Libor,
    })
}

pub fn bond(
    state: &FactorState,
    maturity: f64,
    params: &ModelParams,
    curve: Curve,
) -> Result<BondQuote> {
    match curve {
        Curve::Ois => ois_bond(state, maturity, params),
        Curve::Libor => libor_bond(state, maturity, params),
    }
}

/// Instantaneous forward rate −∂_T log p(t,T) (or of p̄ for the Libor curve),
/// from the analytic T-derivatives of the coefficients.
pub fn inst_forward(
    state: &FactorState,
    maturity: f64,
    params: &ModelParams,
    curve: Curve,
) -> Result<f64> {
    check_order(state.t, maturity)?;
    let tau = maturity - state.t;
    let [b1, b2, b3] = params.b;
    let [_, s2, s3] = params.sigma;
    let psi = &state.psi;
    let (a_slope, a_bar_slope) = a_pair_slope(tau, params);
    let b_slope = (-b1 * tau).exp();
    let c22_slope = riccati_c_slope(b2, s2, tau);
    let ois = a_slope + b_slope * psi[0] + c22_slope * psi[1] * psi[1];
    Ok(match curve {
        Curve::Ois => ois,
        Curve::Libor => {
            let c33_slope = riccati_c_slope(b3, s3, tau);
            a_bar_slope
                + (1.0 + params.kappa) * b_slope * psi[0]
                + c22_slope * psi[1] * psi[1]
                + c33_slope * psi[2] * psi[2]
        }
    })
}
