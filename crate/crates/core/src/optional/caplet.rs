//! Time-0 caplet and floorlet on the Libor rate of (T, T+Δ).
//!
//! With G(x,y) = exp[Ā + (κ+1)B¹x + C²²y²] and coefficients at (T, T+Δ), the
//! caplet is p(0,T+Δ)·E^{T+Δ}[(G e^{C̄³³z²} − R̃)⁺], R̃ = 1 + ΔR. The exercise set
//! in z is |z| > z̄ with z̄ = √((ln R̃ − ln G)/C̄³³) when G ≤ R̃, and all of ℝ otherwise.

use serde::{Deserialize, Serialize};

use super::{integrate_outer, prob_outside, refine, tilt, QuadratureConfig, RegionBoundary};
use crate::coeffs::{coeff_bundle, CoeffBundle};
use crate::curves::ois_log_discount;
use crate::error::{PricingError, Result};
use crate::linear::{fra_price, FraSpec};
use crate::measures::forward_moments;
use crate::model::ModelParams;

fn default_notional() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CapletSpec {
    pub fixing: f64,
    pub delta: f64,
    pub strike: f64,
    #[serde(default = "default_notional")]
    pub notional: f64,
}

impl CapletSpec {
    /// R̃ = 1 + ΔR.
    pub fn gross_strike(&self) -> f64 {
        1.0 + self.delta * self.strike
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0) {
            return Err(PricingError::InvalidInput(format!(
                "delta must be positive, got {}",
                self.delta
            )));
        }
        if !(self.fixing >= 0.0) {
            return Err(PricingError::InvalidInput(format!(
                "fixing must be non-negative, got {}",
                self.fixing
            )));
        }
        if !(self.gross_strike() > 0.0) {
            return Err(PricingError::InvalidInput(format!(
                "1 + delta * strike must be positive, got {}",
                self.gross_strike()
            )));
        }
        Ok(())
    }

    fn as_fra(&self) -> FraSpec {
        FraSpec {
            fixing: self.fixing,
            delta: self.delta,
            rate: self.strike,
            notional: self.notional,
        }
    }
}

struct CapletGeometry {
    coeffs: CoeffBundle,
    linear: f64,
    log_strike: f64,
}

impl CapletGeometry {
    fn new(caplet: &CapletSpec, params: &ModelParams) -> Result<Self> {
        caplet.validate()?;
        let coeffs = coeff_bundle(caplet.fixing, caplet.fixing + caplet.delta, params)?;
        if coeffs.c33_bar <= 0.0 {
            return Err(PricingError::DegenerateSpreadFactor);
        }
        Ok(Self {
            coeffs,
            linear: coeffs.b1_bar,
            log_strike: caplet.gross_strike().ln(),
        })
    }

    fn log_g(&self, x: f64, y: f64) -> f64 {
        self.coeffs.a_bar + self.linear * x + self.coeffs.c22 * y * y
    }

    /// ln R̃ − ln G(x,y): non-negative exactly on the region M.
    fn gap(&self, x: f64, y: f64) -> f64 {
        self.log_strike - self.log_g(x, y)
    }

    /// x where the region boundary crosses the line at height y.
    fn x_boundary(&self, y: f64) -> Option<f64> {
        (self.linear != 0.0)
            .then(|| (self.log_strike - self.coeffs.a_bar - self.coeffs.c22 * y * y) / self.linear)
    }
}

pub fn caplet_region(
    x: f64,
    y: f64,
    caplet: &CapletSpec,
    params: &ModelParams,
) -> Result<RegionBoundary> {
    let geo = CapletGeometry::new(caplet, params)?;
    let gap = geo.gap(x, y);
    if gap < 0.0 {
        return Ok(RegionBoundary {
            in_region: false,
            roots: None,
        });
    }
    let zbar = (gap / geo.coeffs.c33_bar).sqrt();
    Ok(RegionBoundary {
        in_region: true,
        roots: Some((-zbar, zbar)),
    })
}

/// Time-0 caplet price.
pub fn caplet_price(
    caplet: &CapletSpec,
    params: &ModelParams,
    quad: &QuadratureConfig,
) -> Result<f64> {
    let geo = CapletGeometry::new(caplet, params)?;
    let pay = caplet.fixing + caplet.delta;
    let moments = forward_moments(caplet.fixing, pay, params)?;
    let law3 = moments.law(2);
    let c33 = geo.coeffs.c33_bar;
    let condition = 1.0 - 2.0 * law3.variance * c33;
    if !(condition > 0.0) {
        return Err(PricingError::CapletConditionViolated(condition));
    }
    let tilted = tilt(&law3, c33)?;
    let z_sd = law3.variance.sqrt();
    let strike = caplet.gross_strike();

    let inner = |x: f64, y: f64| -> Result<f64> {
        let gap = geo.gap(x, y);
        let g = (-gap).exp() * strike;
        if gap <= 0.0 {
            return Ok(g * tilted.scale - strike);
        }
        let zbar = (gap / c33).sqrt();
        Ok(
            g * tilted.scale * prob_outside(tilted.mean, tilted.sd, zbar)
                - strike * prob_outside(law3.mean, z_sd, zbar),
        )
    };
    let expectation = refine(quad, |n| {
        integrate_outer(
            &moments.law(0),
            &moments.law(1),
            quad.truncation,
            n,
            |y, _, _| geo.x_boundary(y).into_iter().collect(),
            inner,
        )
    })?;
    let discount = coeff_bundle(0.0, pay, params)?;
    Ok(caplet.notional * (-ois_log_discount(&discount, &params.psi0)).exp() * expectation)
}

/// Time-0 floorlet price by parity with the caplet and the FRA at the same strike.
pub fn floorlet_price(
    caplet: &CapletSpec,
    params: &ModelParams,
    quad: &QuadratureConfig,
) -> Result<f64> {
    let cap = caplet_price(caplet, params, quad)?;
    let fra = fra_price(&params.initial_state(), &caplet.as_fra(), params)?;
    Ok(cap - fra)
}
