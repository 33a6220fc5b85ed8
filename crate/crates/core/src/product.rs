//! Tagged union of the contracts the pricers understand.

use serde::{Deserialize, Serialize};

use crate::curves::{bond, Curve};
use crate::error::{PricingError, Result};
use crate::linear::{fra_price, fra_rate, swap_fair_rate, swap_price, FraSpec, SwapSpec};
use crate::model::{FactorState, ModelParams};
use crate::optional::{
    caplet_price, floorlet_price, swaption_price, CapletSpec, QuadratureConfig, SwaptionSpec,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProductSpec {
    Bond {
        maturity: f64,
        curve: Curve,
    },
    Fra(FraSpec),
    Swap(SwapSpec),
    Caplet(CapletSpec),
    Floorlet(CapletSpec),
    Swaption(SwaptionSpec),
    /// Strip of caplets priced as a sum.
    Cap {
        caplets: Vec<CapletSpec>,
    },
}

impl ProductSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            ProductSpec::Bond { .. } => "bond",
            ProductSpec::Fra(_) => "fra",
            ProductSpec::Swap(_) => "swap",
            ProductSpec::Caplet(_) => "caplet",
            ProductSpec::Floorlet(_) => "floorlet",
            ProductSpec::Swaption(_) => "swaption",
            ProductSpec::Cap { .. } => "cap",
        }
    }

    /// Whether the analytic pricer only works from the initial state at t = 0.
    pub fn time_zero_only(&self) -> bool {
        matches!(
            self,
            ProductSpec::Caplet(_)
                | ProductSpec::Floorlet(_)
                | ProductSpec::Swaption(_)
                | ProductSpec::Cap { .. }
        )
    }

    /// Last date the product's cash flows depend on.
    pub fn horizon(&self) -> f64 {
        match self {
            ProductSpec::Bond { maturity, .. } => *maturity,
            ProductSpec::Fra(f) => f.fixing + f.delta,
            ProductSpec::Swap(s) | ProductSpec::Swaption(SwaptionSpec { swap: s }) => {
                s.date(s.periods)
            }
            ProductSpec::Caplet(c) | ProductSpec::Floorlet(c) => c.fixing + c.delta,
            ProductSpec::Cap { caplets } => caplets
                .iter()
                .map(|c| c.fixing + c.delta)
                .fold(0.0, f64::max),
        }
    }

    pub fn price(
        &self,
        state: &FactorState,
        params: &ModelParams,
        quad: &QuadratureConfig,
    ) -> Result<f64> {
        if self.time_zero_only() && (state.t != 0.0 || state.psi != params.psi0) {
            return Err(PricingError::InvalidInput(format!(
                "{} is priced at t = 0 from the initial factor values only",
                self.kind()
            )));
        }
        match self {
            ProductSpec::Bond { maturity, curve } => {
                Ok(bond(state, *maturity, params, *curve)?.value)
            }
            ProductSpec::Fra(f) => fra_price(state, f, params),
            ProductSpec::Swap(s) => swap_price(state, s, params),
            ProductSpec::Caplet(c) => caplet_price(c, params, quad),
            ProductSpec::Floorlet(c) => floorlet_price(c, params, quad),
            ProductSpec::Swaption(s) => swaption_price(s, params, quad),
            ProductSpec::Cap { caplets } => caplets
                .iter()
                .try_fold(0.0, |acc, c| Ok(acc + caplet_price(c, params, quad)?)),
        }
    }

    /// Copy with every strike replaced by the rate that makes the underlying
    /// FRA or swap worth zero at `state`.
    pub fn at_fair_rate(&self, state: &FactorState, params: &ModelParams) -> Result<Self> {
        let atm = |c: &CapletSpec| -> Result<CapletSpec> {
            Ok(CapletSpec {
                strike: fra_rate(state, c.fixing, c.delta, params)?,
                ..*c
            })
        };
        Ok(match self {
            ProductSpec::Bond { .. } => self.clone(),
            ProductSpec::Fra(f) => ProductSpec::Fra(FraSpec {
                rate: fra_rate(state, f.fixing, f.delta, params)?,
                ..*f
            }),
            ProductSpec::Swap(s) => ProductSpec::Swap(SwapSpec {
                rate: swap_fair_rate(state, s, params)?,
                ..*s
            }),
            ProductSpec::Caplet(c) => ProductSpec::Caplet(atm(c)?),
            ProductSpec::Floorlet(c) => ProductSpec::Floorlet(atm(c)?),
            ProductSpec::Swaption(SwaptionSpec { swap }) => ProductSpec::Swaption(SwaptionSpec {
                swap: SwapSpec {
                    rate: swap_fair_rate(state, swap, params)?,
                    ..*swap
                },
            }),
            ProductSpec::Cap { caplets } => ProductSpec::Cap {
                caplets: caplets.iter().map(atm).collect::<Result<_>>()?,
            },
        })
    }
}
