//! Three-factor Gaussian model with OIS short rate and Libor spread.
//!
//! The factors are independent zero-mean Ornstein–Uhlenbeck processes under Q,
//!
//! ```text
//! dΨⁱ = −bⁱ Ψⁱ dt + σⁱ dwⁱ,   i = 1, 2, 3
//! r   = Ψ¹ + (Ψ²)²
//! s   = κ Ψ¹ + (Ψ³)²
//! ```
//!
//! Ψ¹ is the common linear factor that correlates rate and spread, Ψ² drives the
//! rate and Ψ³ the spread. Times are year fractions from a fixed epoch.

use serde::{Deserialize, Serialize};

use crate::error::{PricingError, Result};

/// Model coefficients and initial factor values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    /// Mean-reversion speeds b¹, b², b³ (1/year).
    pub b: [f64; 3],
    /// Factor volatilities σ¹, σ², σ³.
    pub sigma: [f64; 3],
    /// Correlation intensity between short rate and spread.
    pub kappa: f64,
    /// Initial factor values Ψ₀.
    pub psi0: [f64; 3],
}

/// Outcome of [`validate`]: the accepted parameters plus non-fatal warnings.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub params: ModelParams,
    /// b³ ≥ σ³/√2, the sufficient condition for finite caplet moments.
    pub caplet_condition: bool,
    pub warnings: Vec<String>,
}

impl ModelParams {
    pub fn new(b: [f64; 3], sigma: [f64; 3], kappa: f64, psi0: [f64; 3]) -> Result<Self> {
        let params = Self {
            b,
            sigma,
            kappa,
            psi0,
        };
        validate(&params)?;
        Ok(params)
    }

    pub fn caplet_condition(&self) -> bool {
        self.b[2] >= self.sigma[2] / std::f64::consts::SQRT_2
    }

    pub fn initial_state(&self) -> FactorState {
        FactorState {
            t: 0.0,
            psi: self.psi0,
        }
    }

    /// Stable 64-bit key over the bit patterns of every field.
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let fields = self
            .b
            .iter()
            .chain(&self.sigma)
            .chain(std::iter::once(&self.kappa))
            .chain(&self.psi0);
        for v in fields {
            for byte in v.to_bits().to_le_bytes() {
                h ^= byte as u64;
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        }
        h
    }
}

/// Factor values at a given time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorState {
    pub t: f64,
    pub psi: [f64; 3],
}

impl FactorState {
    pub fn new(t: f64, psi: [f64; 3]) -> Result<Self> {
        if !t.is_finite() || t < 0.0 {
            return Err(PricingError::InvalidInput(format!(
                "state time must be finite and non-negative, got {t}"
            )));
        }
        Ok(Self { t, psi })
    }
}

/// Accepts parameters whose speeds and volatilities are strictly positive.
pub fn validate(params: &ModelParams) -> Result<ValidationReport> {
    const B_NAMES: [&str; 3] = ["b1", "b2", "b3"];
    const SIGMA_NAMES: [&str; 3] = ["sigma1", "sigma2", "sigma3"];
    for i in 0..3 {
        if !(params.b[i] > 0.0) || !params.b[i].is_finite() {
            return Err(PricingError::NonPositiveCoefficient(B_NAMES[i].into()));
        }
        if !(params.sigma[i] > 0.0) || !params.sigma[i].is_finite() {
            return Err(PricingError::NonPositiveCoefficient(SIGMA_NAMES[i].into()));
        }
    }
    if !params.kappa.is_finite() || params.psi0.iter().any(|v| !v.is_finite()) {
        return Err(PricingError::InvalidInput(
            "kappa and psi0 must be finite".into(),
        ));
    }
    let caplet_condition = params.caplet_condition();
    let mut warnings = Vec::new();
    if !caplet_condition {
        warnings.push(format!(
            "b3 = {} < sigma3/sqrt(2) = {}: caplet moment condition not guaranteed",
            params.b[2],
            params.sigma[2] / std::f64::consts::SQRT_2
        ));
    }
    if params.kappa != 0.0 {
        warnings
            .push("kappa != 0: rate and spread are correlated, Ad >= 1 is not guaranteed".into());
    }
    Ok(ValidationReport {
        params: *params,
        caplet_condition,
        warnings,
    })
}

/// OIS short rate r = Ψ¹ + (Ψ²)².
pub fn short_rate(state: &FactorState, _params: &ModelParams) -> f64 {
    state.psi[0] + state.psi[1] * state.psi[1]
}

/// Libor short-rate spread s = κΨ¹ + (Ψ³)².
pub fn spread(state: &FactorState, params: &ModelParams) -> f64 {
    params.kappa * state.psi[0] + state.psi[2] * state.psi[2]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> ModelParams {
        ModelParams {
            b: [0.5, 0.3, 0.4],
            sigma: [0.01, 0.02, 0.015],
            kappa: 0.3,
            psi0: [0.01, 0.05, 0.05],
        }
    }

    fn at(psi: [f64; 3]) -> FactorState {
        FactorState { t: 0.0, psi }
    }

    #[test]
    fn short_rate_examples() {
        let p = base();
        assert_eq!(short_rate(&at([0.0, 0.0, 0.0]), &p), 0.0);
        assert!((short_rate(&at([0.01, 0.1, 0.3]), &p) - 0.02).abs() < 1e-17);
        assert!((short_rate(&at([-0.02, 0.1, 0.0]), &p) + 0.01).abs() < 1e-17);
    }

    #[test]
    fn spread_examples() {
        let mut p = base();
        p.kappa = 0.0;
        assert_eq!(spread(&at([5.0, 0.0, 0.0]), &p), 0.0);
        p.kappa = 0.5;
        assert!((spread(&at([0.01, 0.0, 0.2]), &p) - 0.045).abs() < 1e-16);
        p.kappa = 1.0;
        let s = at([0.01, 0.3, 0.1]);
        assert!((spread(&s, &p) - 0.02).abs() < 1e-16);
        assert!((short_rate(&s, &p) + spread(&s, &p) - 0.12).abs() < 1e-16);
    }

    #[test]
    fn validation() {
        let mut p = base();
        let report = validate(&p).unwrap();
        assert!(report.caplet_condition);
        p.b[1] = 0.0;
        assert_eq!(
            validate(&p),
            Err(PricingError::NonPositiveCoefficient("b2".into()))
        );
        let mut p = base();
        p.sigma[2] = -0.1;
        assert_eq!(
            validate(&p),
            Err(PricingError::NonPositiveCoefficient("sigma3".into()))
        );
        let mut p = base();
        p.b[2] = 0.01;
        p.sigma[2] = 0.05;
        let report = validate(&p).unwrap();
        assert!(!report.caplet_condition);
        assert!(report.warnings.iter().any(|w| w.contains("caplet")));
    }

    #[test]
    fn fingerprint_distinguishes_fields() {
        let a = base();
        let mut b = base();
        b.psi0[2] = 0.0500001;
        assert_ne!(a.fingerprint(), b.fingerprint());
        assert_eq!(a.fingerprint(), base().fingerprint());
    }
}
