//! Scenario document: model, valuation state, products and requested reports.

use std::path::Path;

use expquad::{validate, FactorState, McConfig, ModelParams, ProductSpec, QuadratureConfig};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema_version: u32,
    pub params: ModelParams,
    /// Valuation state; defaults to t = 0 and the initial factor values.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<FactorState>,
    #[serde(default)]
    pub products: Vec<ProductSpec>,
    /// Monte Carlo validation settings; validation runs when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mc: Option<McConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quad: Option<QuadratureConfig>,
    #[serde(default)]
    pub outputs: Vec<OutputRequest>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum OutputRequest {
    /// Curve table on a maturity grid, written to `curves_<name>.csv`.
    CurveDump {
        name: String,
        maturities: Vec<f64>,
        /// Accrual period of the FRA columns.
        delta: f64,
    },
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let scenario: Scenario =
            serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        scenario.check()?;
        Ok(scenario)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    pub fn valuation_state(&self) -> FactorState {
        self.state.unwrap_or_else(|| self.params.initial_state())
    }

    /// Structural checks beyond what the JSON schema enforces.
    fn check(&self) -> Result<(), CliError> {
        let invalid = |field: &str, msg: String| {
            Err(CliError::Validation {
                field: field.into(),
                message: msg,
            })
        };
        if self.schema_version != SCHEMA_VERSION {
            return invalid(
                "schema_version",
                format!("expected {SCHEMA_VERSION}, got {}", self.schema_version),
            );
        }
        if let Err(e) = validate(&self.params) {
            return invalid("params", e.to_string());
        }
        if let Some(s) = &self.state {
            if let Err(e) = FactorState::new(s.t, s.psi) {
                return invalid("state", e.to_string());
            }
        }
        if let Some(mc) = &self.mc {
            if let Err(e) = mc.validate() {
                return invalid("mc", e.to_string());
            }
        }
        if let Some(quad) = &self.quad {
            if let Err(e) = quad.validate() {
                return invalid("quad", e.to_string());
            }
        }
        if self.products.is_empty() && self.outputs.is_empty() {
            return invalid(
                "products",
                "scenario has no products and no curve dumps".into(),
            );
        }
        for (i, out) in self.outputs.iter().enumerate() {
            let OutputRequest::CurveDump {
                name,
                maturities,
                delta,
            } = out;
            let field = format!("outputs[{i}]");
            if name.is_empty()
                || !name
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
            {
                return invalid(
                    &field,
                    format!("name {name:?} must be non-empty and use [A-Za-z0-9_-]"),
                );
            }
            if maturities.is_empty() {
                return invalid(&field, "maturities must not be empty".into());
            }
            if !(*delta > 0.0) {
                return invalid(&field, format!("delta must be positive, got {delta}"));
            }
        }
        Ok(())
    }
}
