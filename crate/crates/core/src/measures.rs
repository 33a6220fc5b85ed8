//! Factor distributions under Q and under the T*-forward measure.
//!
//! Under Q^{T*} the factors stay independent Gaussians with drifts
//!
//! ```text
//! dΨ¹ = −[b¹Ψ¹ + (σ¹)² B¹(t,T*)] dt + σ¹ dw
//! dΨ² = −[b² + 2(σ²)² C²²(t,T*)] Ψ² dt + σ² dw
//! dΨ³ = −b³Ψ³ dt + σ³ dw
//! ```
//!
//! Means and variances of the first two factors are integrated from their
//! linear moment ODEs; the third factor keeps its Q law.

use crate::coeffs::{b1_tau, riccati_c};
use crate::error::{check_order, PricingError, Result};
use crate::model::{FactorState, ModelParams};
use crate::numerics::{integrate, rk4};

/// Gaussian law of the factors at horizon `t` under the `t_star`-forward measure,
/// started from Ψ₀ at time 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForwardMoments {
    pub t: f64,
    pub t_star: f64,
    pub alpha: [f64; 3],
    pub beta: [f64; 3],
}

impl ForwardMoments {
    pub fn law(&self, factor: usize) -> GaussianLaw {
        GaussianLaw {
            mean: self.alpha[factor],
            variance: self.beta[factor],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianLaw {
    pub mean: f64,
    pub variance: f64,
}

/// How [`forward_moments_with`] evaluates the first two factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MomentMethod {
    /// RK4 on the moment ODEs implied by the forward-measure drifts.
    #[default]
    Ode,
    /// The closed-form expressions as commonly transcribed, including a
    /// (b¹)² variance denominator and the sign of the drift-correction term
    /// in the first mean. Only for comparison against [`MomentMethod::Ode`].
    LiteralClosedForm,
}

pub fn forward_moments(t: f64, t_star: f64, params: &ModelParams) -> Result<ForwardMoments> {
    forward_moments_with(t, t_star, params, MomentMethod::Ode)
}

pub fn forward_moments_with(
    t: f64,
    t_star: f64,
    params: &ModelParams,
    method: MomentMethod,
) -> Result<ForwardMoments> {
    if t < 0.0 {
        return Err(PricingError::InvalidInput(format!(
            "moment horizon {t} is negative"
        )));
    }
    check_order(t, t_star)?;
    let [b1, b2, b3] = params.b;
    let [s1, s2, s3] = params.sigma;
    let psi0 = params.psi0;
    let alpha3 = (-b3 * t).exp() * psi0[2];
    let beta3 = ou_variance(b3, s3, t);
    if t == 0.0 {
        return Ok(ForwardMoments {
            t,
            t_star,
            alpha: psi0,
            beta: [0.0; 3],
        });
    }
    let (alpha, beta) = match method {
        MomentMethod::Ode => {
            let h = (1e-3f64).min(t / 100.0);
            let steps = (t / h).ceil() as usize;
            let y = rk4(
                |u, y: &[f64; 4]| {
                    let b_fwd = b1_tau(b1, t_star - u);
                    let k2 = b2 + 2.0 * s2 * s2 * riccati_c(b2, s2, t_star - u);
                    [
                        -b1 * y[0] - s1 * s1 * b_fwd,
                        -2.0 * b1 * y[1] + s1 * s1,
                        -k2 * y[2],
                        -2.0 * k2 * y[3] + s2 * s2,
                    ]
                },
                [psi0[0], 0.0, psi0[1], 0.0],
                0.0,
                t,
                steps,
            );
            ([y[0], y[2], alpha3], [y[1], y[3], beta3])
        }
        MomentMethod::LiteralClosedForm => {
            let e1 = (-b1 * t).exp();
            let alpha1 = e1
                * (psi0[0]
                    - s1 * s1 / (2.0 * b1 * b1)
                        * (-b1 * t_star).exp()
                        * (1.0 - (2.0 * b1 * t).exp())
                    - s1 * s1 / (b1 * b1) * (1.0 - (b1 * t).exp()));
            let beta1 = e1 * e1 * ((2.0 * b1 * t).exp() - 1.0) * s1 * s1 / (2.0 * b1 * b1);
            let c22_int =
                |upper: f64| integrate(|s| riccati_c(b2, s2, t_star - s), 0.0, upper, 1e-12, 1e-16);
            let i_t = c22_int(t)?;
            let alpha2 = (-(b2 * t + 2.0 * s2 * s2 * i_t)).exp() * psi0[1];
            let inner = integrate(
                |s| {
                    let i_s = c22_int(s).unwrap_or(f64::NAN);
                    (2.0 * b2 * s + 4.0 * s2 * s2 * i_s).exp() * s2 * s2
                },
                0.0,
                t,
                1e-10,
                1e-16,
            )?;
            let beta2 = (-(2.0 * b2 * t + 4.0 * s2 * s2 * i_t)).exp() * inner;
            ([alpha1, alpha2, alpha3], [beta1, beta2, beta3])
        }
    };
    Ok(ForwardMoments {
        t,
        t_star,
        alpha,
        beta,
    })
}

pub(crate) fn ou_variance(b: f64, sigma: f64, tau: f64) -> f64 {
    -sigma * sigma * (-2.0 * b * tau).exp_m1() / (2.0 * b)
}

/// Law of Ψⁱ_T given the state at t under Q (`factor` is 0-based).
pub fn q_conditional_law(
    factor: usize,
    t: f64,
    maturity: f64,
    state: &FactorState,
    params: &ModelParams,
) -> Result<GaussianLaw> {
    if factor > 2 {
        return Err(PricingError::InvalidInput(format!(
            "factor index {factor} out of range"
        )));
    }
    check_order(t, maturity)?;
    let b = params.b[factor];
    let tau = maturity - t;
    Ok(GaussianLaw {
        mean: (-b * tau).exp() * state.psi[factor],
        variance: ou_variance(b, params.sigma[factor], tau),
    })
}

/// E[exp(cZ²)] for Z with the given law.
pub fn gaussian_exp_quadratic(law: &GaussianLaw, c: f64) -> Result<f64> {
    let denominator = 1.0 - 2.0 * c * law.variance;
    if !(denominator > 0.0) {
        return Err(PricingError::MomentExplosion { denominator });
    }
    Ok((c * law.mean * law.mean / denominator).exp() / denominator.sqrt())
}

/// E[exp(kZ)] for Z with the given law.
pub fn gaussian_mgf(law: &GaussianLaw, k: f64) -> f64 {
    (k * law.mean + 0.5 * k * k * law.variance).exp()
}
