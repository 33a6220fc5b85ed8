//! Linear products: FRAs, the single-to-multi-curve adjustment factor and payer swaps.
//!
//! For a period (T, T+Δ) the multi-curve FRA quantity factorizes as
//!
//! ```text
//! v̄ = E^{T+Δ}[1/p̄(T,T+Δ)] = v · Ad · Res,   v = p(t,T)/p(t,T+Δ)
//! ```
//!
//! Swaps need E^{T_k}[1/p̄(T_{k−1},T_k) | F_t] for every period. Under Q^{T_k} the
//! factors are independent Gaussians, so each expectation is
//! exp[Σ Γⁱ − ρ¹ψ₁ − ρ²ψ₂² − ρ³ψ₃²] with loadings ρⁱ and log-scales Γⁱ evaluated at
//! the fixing horizon T_{k−1}.

use serde::{Deserialize, Serialize};

use crate::coeffs::{b1_tau, coeff_bundle, riccati_c, CoeffBundle};
use crate::curves::ois_log_discount;
use crate::error::{check_order, PricingError, Result};
use crate::measures::{gaussian_exp_quadratic, gaussian_mgf, q_conditional_law};
use crate::model::{FactorState, ModelParams};
use crate::numerics::{integrate, rk4};

const QUAD_REL_TOL: f64 = 1e-10;
const SINGULARITY_SCAN: usize = 256;

fn default_notional() -> f64 {
    1.0
}

/// Forward rate agreement on (fixing, fixing + delta) struck at `rate`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FraSpec {
    pub fixing: f64,
    pub delta: f64,
    pub rate: f64,
    #[serde(default = "default_notional")]
    pub notional: f64,
}

impl FraSpec {
    pub fn validate(&self, t: f64) -> Result<()> {
        if !(self.delta > 0.0) {
            return Err(PricingError::InvalidInput(format!(
                "delta must be positive, got {}",
                self.delta
            )));
        }
        check_order(t, self.fixing)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SwapSide {
    /// Pay fixed, receive Libor.
    #[default]
    Payer,
    Receiver,
}

impl SwapSide {
    pub fn sign(self) -> f64 {
        match self {
            SwapSide::Payer => 1.0,
            SwapSide::Receiver => -1.0,
        }
    }
}

/// Swap with resets T_{k−1} and payments T_k = first_reset + k·period_length, k = 1..periods.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SwapSpec {
    pub first_reset: f64,
    pub periods: usize,
    pub period_length: f64,
    pub rate: f64,
    #[serde(default = "default_notional")]
    pub notional: f64,
    #[serde(default)]
    pub side: SwapSide,
}

impl SwapSpec {
    pub fn validate(&self, t: f64) -> Result<()> {
        if self.periods == 0 {
            return Err(PricingError::InvalidInput(
                "swap needs at least one period".into(),
            ));
        }
        if !(self.period_length > 0.0) {
            return Err(PricingError::InvalidInput(format!(
                "period_length must be positive, got {}",
                self.period_length
            )));
        }
        check_order(t, self.first_reset)
    }

    /// T_k for k = 0..=periods.
    pub fn date(&self, k: usize) -> f64 {
        self.first_reset + k as f64 * self.period_length
    }

    pub fn payment_dates(&self) -> Vec<f64> {
        (1..=self.periods).map(|k| self.date(k)).collect()
    }
}

/// Loadings ρⁱ and log-scales Γⁱ of E^{T_k}[1/p̄(T_{k−1},T_k) | F_t] = e^{Ā_k + ΣΓ − ρ¹ψ₁ − ρ²ψ₂² − ρ³ψ₃²}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpectationCoeffs {
    pub k: usize,
    pub rho: [f64; 3],
    pub gamma: [f64; 3],
}

/// p(t,T)/p(t,T+Δ).
pub fn v_single(
    state: &FactorState,
    maturity: f64,
    delta: f64,
    params: &ModelParams,
) -> Result<f64> {
    check_order(state.t, maturity)?;
    let near = coeff_bundle(state.t, maturity, params)?;
    let far = coeff_bundle(state.t, maturity + delta, params)?;
    Ok((ois_log_discount(&far, &state.psi) - ois_log_discount(&near, &state.psi)).exp())
}

/// Ad = E^Q[p(T,T+Δ)/p̄(T,T+Δ) | F_t].
pub fn adjustment(
    state: &FactorState,
    maturity: f64,
    delta: f64,
    params: &ModelParams,
) -> Result<f64> {
    check_order(state.t, maturity)?;
    let period = coeff_bundle(maturity, maturity + delta, params)?;
    let law1 = q_conditional_law(0, state.t, maturity, state, params)?;
    let law3 = q_conditional_law(2, state.t, maturity, state, params)?;
    let linear = gaussian_mgf(&law1, params.kappa * period.b1);
    let quadratic = gaussian_exp_quadratic(&law3, period.c33_bar)?;
    Ok(period.a_tilde.exp() * linear * quadratic)
}

/// Deterministic correction from the correlation between the rate and spread factors.
pub fn residual(t: f64, maturity: f64, delta: f64, params: &ModelParams) -> Result<f64> {
    check_order(t, maturity)?;
    let (b, s) = (params.b[0], params.sigma[0]);
    let accrual = -(-b * delta).exp_m1();
    let horizon = -(-b * (maturity - t)).exp_m1();
    Ok((-params.kappa * s * s / (2.0 * b * b * b) * accrual * horizon * horizon).exp())
}

/// v̄ = E^{T+Δ}[1/p̄(T,T+Δ) | F_t].
pub fn v_multi(
    state: &FactorState,
    maturity: f64,
    delta: f64,
    params: &ModelParams,
) -> Result<f64> {
    Ok(v_single(state, maturity, delta, params)?
        * adjustment(state, maturity, delta, params)?
        * residual(state.t, maturity, delta, params)?)
}

/// Single-curve FRA rate (v − 1)/Δ.
pub fn single_curve_fra_rate(
    state: &FactorState,
    maturity: f64,
    delta: f64,
    params: &ModelParams,
) -> Result<f64> {
    Ok((v_single(state, maturity, delta, params)? - 1.0) / delta)
}

/// Multi-curve FRA rate (v̄ − 1)/Δ.
pub fn fra_rate(
    state: &FactorState,
    maturity: f64,
    delta: f64,
    params: &ModelParams,
) -> Result<f64> {
    Ok((v_multi(state, maturity, delta, params)? - 1.0) / delta)
}

pub fn fra_price(state: &FactorState, spec: &FraSpec, params: &ModelParams) -> Result<f64> {
    spec.validate(state.t)?;
    let pay = coeff_bundle(state.t, spec.fixing + spec.delta, params)?;
    let discount = (-ois_log_discount(&pay, &state.psi)).exp();
    let v_bar = v_multi(state, spec.fixing, spec.delta, params)?;
    Ok(spec.notional * discount * (v_bar - (1.0 + spec.delta * spec.rate)))
}

/// D(τ) = 1 − σ²C(1 − e^{−2bτ})/b: the quantity 1 − 2C·Var for a constant-coefficient factor.
fn spread_denominator(b: f64, sigma: f64, c: f64, tau: f64) -> f64 {
    1.0 + sigma * sigma * c * (-2.0 * b * tau).exp_m1() / b
}

/// h³_k = C̄³³_k / (4(σ³)²C̄³³_k − 4b³), the constant of the closed-form ρ³ solution.
pub fn spread_riccati_constant(c33: f64, params: &ModelParams) -> f64 {
    let (b, s) = (params.b[2], params.sigma[2]);
    c33 / (4.0 * s * s * c33 - 4.0 * b)
}

/// ρ³ and Γ³ in closed form; `None` when a pole lies on [0, τ].
pub(crate) fn spread_loading(c33: f64, tau: f64, params: &ModelParams) -> Option<(f64, f64)> {
    let (b, s) = (params.b[2], params.sigma[2]);
    let singular = (0..=SINGULARITY_SCAN).any(|i| {
        let u = tau * i as f64 / SINGULARITY_SCAN as f64;
        !(spread_denominator(b, s, c33, u) > 0.0)
    });
    if singular {
        return None;
    }
    let d = spread_denominator(b, s, c33, tau);
    Some((-c33 * (-2.0 * b * tau).exp() / d, -0.5 * d.ln()))
}

/// ρ² and ∫ρ² by RK4 in the time-to-fixing s, with step halving until two
/// successive solutions agree to 1e-9.
fn rate_loading(
    c22_k: f64,
    gap: f64,
    tau: f64,
    params: &ModelParams,
    k: usize,
) -> Result<(f64, f64)> {
    if tau == 0.0 {
        return Ok((-c22_k, 0.0));
    }
    let (b, s) = (params.b[1], params.sigma[1]);
    let rhs = |u: f64, y: &[f64; 2]| {
        let beta = b + 2.0 * s * s * riccati_c(b, s, gap + u);
        [-(2.0 * beta * y[0] + 2.0 * s * s * y[0] * y[0]), y[0]]
    };
    let mut steps = (tau / (1e-3f64).min(tau / 200.0)).ceil() as usize;
    let mut coarse = rk4(rhs, [-c22_k, 0.0], 0.0, tau, steps);
    for _ in 0..6 {
        steps *= 2;
        let fine = rk4(rhs, [-c22_k, 0.0], 0.0, tau, steps);
        if !fine.iter().all(|v| v.is_finite()) || fine[0].abs() > 1e12 {
            return Err(PricingError::ExpectationSingularity {
                period: k,
                reason: "rate-factor Riccati solution blows up".into(),
            });
        }
        let scale = 1f64.max(fine[0].abs()).max(fine[1].abs());
        if (fine[0] - coarse[0]).abs() <= 1e-9 * scale
            && (fine[1] - coarse[1]).abs() <= 1e-9 * scale
        {
            return Ok((fine[0], fine[1]));
        }
        coarse = fine;
    }
    Err(PricingError::QuadratureFailure(format!(
        "rate-factor Riccati for period {k} did not converge under step halving"
    )))
}

/// ρⁱ(t,T_k) and Γⁱ(t,T_k) for period `k` (1-based), at the fixing horizon T_{k−1}.
pub fn expectation_coeffs(
    t: f64,
    k: usize,
    swap: &SwapSpec,
    params: &ModelParams,
) -> Result<ExpectationCoeffs> {
    if k == 0 || k > swap.periods {
        return Err(PricingError::InvalidInput(format!(
            "period index {k} outside 1..={}",
            swap.periods
        )));
    }
    let fixing = swap.date(k - 1);
    check_order(t, fixing)?;
    let tau = fixing - t;
    let gap = swap.period_length;
    let [b1, b2, b3] = params.b;
    let [s1, s2, s3] = params.sigma;
    let loading = (1.0 + params.kappa) * b1_tau(b1, gap);
    let c22_k = riccati_c(b2, s2, gap);
    let c33_k = riccati_c(b3, s3, gap);

    let rho1 = -loading * (-b1 * tau).exp();
    let rho1_at = |u: f64| -loading * (-b1 * (fixing - u)).exp();
    let quad_sq = integrate(|u| rho1_at(u).powi(2), t, fixing, QUAD_REL_TOL, 1e-16)?;
    let quad_cross = integrate(
        |u| b1_tau(b1, swap.date(k) - u) * rho1_at(u),
        t,
        fixing,
        QUAD_REL_TOL,
        1e-16,
    )?;
    let e1 = -(-b1 * tau).exp_m1();
    let e2 = -(-2.0 * b1 * tau).exp_m1();
    let exact_sq = loading * loading * e2 / (2.0 * b1);
    let exact_cross = -loading / b1 * (e1 / b1 - (-b1 * gap).exp() * e2 / (2.0 * b1));
    if (quad_sq - exact_sq).abs() > 1e-8 * exact_sq.abs() + 1e-14
        || (quad_cross - exact_cross).abs() > 1e-8 * exact_cross.abs() + 1e-14
    {
        return Err(PricingError::QuadratureFailure(format!(
            "linear-factor log-scale for period {k}: quadrature and closed form disagree"
        )));
    }
    let gamma1 = 0.5 * s1 * s1 * exact_sq + s1 * s1 * exact_cross;

    let (rho2, rho2_integral) = rate_loading(c22_k, gap, tau, params, k)?;
    let gamma2 = -s2 * s2 * rho2_integral;

    let (rho3, gamma3) =
        spread_loading(c33_k, tau, params).ok_or_else(|| PricingError::ExpectationSingularity {
            period: k,
            reason: format!(
                "spread-factor denominator vanishes on [{t}, {fixing}] (h3 = {:e})",
                spread_riccati_constant(c33_k, params)
            ),
        })?;
    let gamma3_quad = integrate(
        |u| {
            let (r, _) = spread_loading_unchecked(b3, s3, c33_k, fixing - u);
            -s3 * s3 * r
        },
        t,
        fixing,
        QUAD_REL_TOL,
        1e-16,
    )?;
    if (gamma3_quad - gamma3).abs() > 1e-8 * gamma3.abs() + 1e-14 {
        return Err(PricingError::QuadratureFailure(format!(
            "spread-factor log-scale for period {k}: quadrature {gamma3_quad:e} vs closed form {gamma3:e}"
        )));
    }

    Ok(ExpectationCoeffs {
        k,
        rho: [rho1, rho2, rho3],
        gamma: [gamma1, gamma2, gamma3],
    })
}

fn spread_loading_unchecked(b: f64, s: f64, c33: f64, tau: f64) -> (f64, f64) {
    let d = spread_denominator(b, s, c33, tau);
    (-c33 * (-2.0 * b * tau).exp() / d, d)
}

/// Per-period exponents of a swap at a fixed valuation time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodTerms {
    pub coeffs: ExpectationCoeffs,
    /// Coefficients of p(t,T_k).
    pub discount: CoeffBundle,
    /// Ā_k + ΣΓⁱ − A(t,T_k).
    pub float_log_scale: f64,
    /// B¹(t,T_k) + ρ¹, C²²(t,T_k) + ρ², ρ³.
    pub float_loadings: [f64; 3],
}

impl PeriodTerms {
    /// p(t,T_k)·E^{T_k}[1/p̄(T_{k−1},T_k)].
    pub fn float_value(&self, psi: &[f64; 3]) -> f64 {
        let [l1, l2, l3] = self.float_loadings;
        (self.float_log_scale - l1 * psi[0] - l2 * psi[1] * psi[1] - l3 * psi[2] * psi[2]).exp()
    }

    pub fn discount_value(&self, psi: &[f64; 3]) -> f64 {
        (-ois_log_discount(&self.discount, psi)).exp()
    }
}

/// Swap value as a function of the factor state at a fixed time t.
#[derive(Debug, Clone, PartialEq)]
pub struct SwapKernel {
    pub t: f64,
    pub spec: SwapSpec,
    pub periods: Vec<PeriodTerms>,
}

impl SwapKernel {
    pub fn new(t: f64, spec: &SwapSpec, params: &ModelParams) -> Result<Self> {
        spec.validate(t)?;
        let periods = (1..=spec.periods)
            .map(|k| {
                let coeffs = expectation_coeffs(t, k, spec, params)?;
                let discount = coeff_bundle(t, spec.date(k), params)?;
                let period = coeff_bundle(spec.date(k - 1), spec.date(k), params)?;
                let [g1, g2, g3] = coeffs.gamma;
                let [r1, r2, r3] = coeffs.rho;
                Ok(PeriodTerms {
                    coeffs,
                    discount,
                    float_log_scale: period.a_bar + g1 + g2 + g3 - discount.a,
                    float_loadings: [discount.b1 + r1, discount.c22 + r2, r3],
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            t,
            spec: *spec,
            periods,
        })
    }

    /// Payer value per unit notional, before the side sign.
    fn payer_unit_value(&self, psi: &[f64; 3], rate: f64) -> f64 {
        let fixed = 1.0 + rate * self.spec.period_length;
        self.periods
            .iter()
            .map(|p| p.float_value(psi) - fixed * p.discount_value(psi))
            .sum()
    }

    pub fn value(&self, psi: &[f64; 3]) -> f64 {
        self.spec.side.sign() * self.spec.notional * self.payer_unit_value(psi, self.spec.rate)
    }

    /// γ Σ p(t,T_k).
    pub fn annuity(&self, psi: &[f64; 3]) -> f64 {
        self.spec.period_length
            * self
                .periods
                .iter()
                .map(|p| p.discount_value(psi))
                .sum::<f64>()
    }

    /// Fixed rate at which the swap is worth zero.
    pub fn fair_rate(&self, psi: &[f64; 3]) -> f64 {
        self.payer_unit_value(psi, 0.0) / self.annuity(psi)
    }
}

pub fn swap_price(state: &FactorState, swap: &SwapSpec, params: &ModelParams) -> Result<f64> {
    Ok(SwapKernel::new(state.t, swap, params)?.value(&state.psi))
}

/// Same swap value assembled period by period from multi-curve FRA quantities,
/// Σ p(t,T_k)(v̄(T_{k−1}, γ) − 1 − Rγ).
pub fn swap_price_by_periods(
    state: &FactorState,
    swap: &SwapSpec,
    params: &ModelParams,
) -> Result<f64> {
    swap.validate(state.t)?;
    let mut total = 0.0;
    for k in 1..=swap.periods {
        let pay = coeff_bundle(state.t, swap.date(k), params)?;
        let discount = (-ois_log_discount(&pay, &state.psi)).exp();
        let v_bar = v_multi(state, swap.date(k - 1), swap.period_length, params)?;
        total += discount * (v_bar - 1.0 - swap.rate * swap.period_length);
    }
    Ok(swap.side.sign() * swap.notional * total)
}

pub fn swap_fair_rate(state: &FactorState, swap: &SwapSpec, params: &ModelParams) -> Result<f64> {
    Ok(SwapKernel::new(state.t, swap, params)?.fair_rate(&state.psi))
}
