//! Time-0 payer swaption with expiry at the first reset date T₀.
//!
//! At T₀ the swap value is Σ_k a_k(x,y) e^{−c_k z²} − h(x,y) with a_k, c_k from
//! the swap expectation coefficients evaluated at t = T₀ and h the fixed leg. When
//! every c_k ≤ 0 (case 1) the float leg grows in |z| and the swaption is exercised
//! for |z| > z̄; when every c_k > 0 (case 2) it decays in |z| and exercise happens
//! for |z| < z̄. The outer expectation is under Q^{T₀}.

use serde::{Deserialize, Serialize};

use super::{
    integrate_outer, prob_inside, prob_outside, refine, tilt, QuadratureConfig, RegionBoundary,
    TiltedLaw,
};
use crate::coeffs::{coeff_bundle, riccati_c};
use crate::curves::ois_log_discount;
use crate::error::{PricingError, Result};
use crate::linear::{spread_riccati_constant, SwapKernel, SwapSide, SwapSpec};
use crate::measures::{forward_moments, GaussianLaw};
use crate::model::ModelParams;
use crate::numerics::{positive_root, sign_changes};

const ROOT_REL_TOL: f64 = 1e-12;
const BOUNDARY_SCAN: usize = 32;

/// Payer swaption expiring at `swap.first_reset`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SwaptionSpec {
    pub swap: SwapSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SwaptionCase {
    /// Every spread loading c_k ≤ 0.
    Case1,
    /// Every spread loading c_k > 0.
    Case2,
}

/// Payoff Σ_k exp(s_k − u_k x − v_k y² − c_k z²) − Σ_j exp(r_j − p_j x − q_j y²)
/// over independent Gaussian (x, y, z).
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticExpPayoff {
    /// [s_k, u_k, v_k, c_k] per receiving term.
    pub float_terms: Vec<[f64; 4]>,
    /// [r_j, p_j, q_j] per paying term.
    pub fixed_terms: Vec<[f64; 3]>,
}

impl QuadraticExpPayoff {
    pub fn value(&self, x: f64, y: f64, z: f64) -> f64 {
        let y2 = y * y;
        let z2 = z * z;
        let float: f64 = self
            .float_terms
            .iter()
            .map(|t| (t[0] - t[1] * x - t[2] * y2 - t[3] * z2).exp())
            .sum();
        float - self.fixed_leg(x, y)
    }

    fn float_scales(&self, x: f64, y: f64) -> impl Iterator<Item = f64> + '_ {
        let y2 = y * y;
        self.float_terms
            .iter()
            .map(move |t| (t[0] - t[1] * x - t[2] * y2).exp())
    }

    fn fixed_leg(&self, x: f64, y: f64) -> f64 {
        let y2 = y * y;
        self.fixed_terms
            .iter()
            .map(|t| (t[0] - t[1] * x - t[2] * y2).exp())
            .sum()
    }

    /// g(x,y,0) − h(x,y).
    fn value_at_zero(&self, x: f64, y: f64) -> f64 {
        self.float_scales(x, y).sum::<f64>() - self.fixed_leg(x, y)
    }

    pub fn case(&self) -> Result<SwaptionCase> {
        let (mut case1, mut case2) = (Vec::new(), Vec::new());
        for (k, t) in self.float_terms.iter().enumerate() {
            if t[3] > 0.0 {
                case2.push(k + 1);
            } else {
                case1.push(k + 1);
            }
        }
        match (case1.is_empty(), case2.is_empty()) {
            (_, true) => Ok(SwaptionCase::Case1),
            (true, false) => Ok(SwaptionCase::Case2),
            _ => Err(PricingError::MixedCase { case1, case2 }),
        }
    }

    /// Exercise region {g(x,y,0) ≤ h(x,y)} and the roots of g(x,y,z) = h(x,y).
    pub fn region(&self, x: f64, y: f64) -> Result<RegionBoundary> {
        let case = self.case()?;
        let gap = self.value_at_zero(x, y);
        let in_region = gap <= 0.0;
        let has_root = match case {
            SwaptionCase::Case1 => in_region && self.float_terms.iter().any(|t| t[3] < 0.0),
            SwaptionCase::Case2 => !in_region,
        };
        if !has_root {
            return Ok(RegionBoundary {
                in_region,
                roots: None,
            });
        }
        let zbar = self.z_root(x, y)?;
        Ok(RegionBoundary {
            in_region,
            roots: Some((-zbar, zbar)),
        })
    }

    fn z_root(&self, x: f64, y: f64) -> Result<f64> {
        let scales: Vec<f64> = self.float_scales(x, y).collect();
        let h = self.fixed_leg(x, y);
        positive_root(
            |z| {
                let z2 = z * z;
                scales
                    .iter()
                    .zip(&self.float_terms)
                    .map(|(a, t)| a * (-t[3] * z2).exp())
                    .sum::<f64>()
                    - h
            },
            ROOT_REL_TOL,
        )
    }

    /// E[(payoff)⁺] under independent Gaussian laws for (x, y, z).
    pub fn expected_positive_part(
        &self,
        laws: &[GaussianLaw; 3],
        quad: &QuadratureConfig,
    ) -> Result<f64> {
        let case = self.case()?;
        let law3 = laws[2];
        let tilts: Vec<TiltedLaw> = self
            .float_terms
            .iter()
            .map(|t| tilt(&law3, -t[3]))
            .collect::<Result<_>>()?;
        let z_sd = law3.variance.sqrt();
        let any_growth = self.float_terms.iter().any(|t| t[3] < 0.0);

        let inner = |x: f64, y: f64| -> Result<f64> {
            let scales: Vec<f64> = self.float_scales(x, y).collect();
            let h = self.fixed_leg(x, y);
            let g0: f64 = scales.iter().sum();
            let full: f64 = scales.iter().zip(&tilts).map(|(a, t)| a * t.scale).sum();
            match case {
                SwaptionCase::Case1 => {
                    if g0 >= h {
                        return Ok(full - h);
                    }
                    if !any_growth {
                        return Ok(0.0);
                    }
                    let zbar = self.z_root(x, y)?;
                    let float: f64 = scales
                        .iter()
                        .zip(&tilts)
                        .map(|(a, t)| a * t.scale * prob_outside(t.mean, t.sd, zbar))
                        .sum();
                    Ok(float - h * prob_outside(law3.mean, z_sd, zbar))
                }
                SwaptionCase::Case2 => {
                    if g0 <= h {
                        return Ok(0.0);
                    }
                    let zbar = self.z_root(x, y)?;
                    let float: f64 = scales
                        .iter()
                        .zip(&tilts)
                        .map(|(a, t)| a * t.scale * prob_inside(t.mean, t.sd, zbar))
                        .sum();
                    Ok(float - h * prob_inside(law3.mean, z_sd, zbar))
                }
            }
        };
        let cuts = |y: f64, lo: f64, hi: f64| {
            sign_changes(
                |x| self.value_at_zero(x, y),
                lo,
                hi,
                BOUNDARY_SCAN,
                1e-13 * (hi - lo),
            )
        };
        refine(quad, |n| {
            integrate_outer(&laws[0], &laws[1], quad.truncation, n, cuts, inner)
        })
    }
}

/// Case of each period from h³_k, the constant of the spread-factor Riccati
/// solution, at the expiry T₀: period k is in case 2 when
/// 0 < h³_k < e^{2b³(T_{k−1}−T₀)}/(4(σ³)²).
pub fn swaption_case(swap: &SwapSpec, params: &ModelParams) -> Result<SwaptionCase> {
    swap.validate(0.0)?;
    let (b3, s3) = (params.b[2], params.sigma[2]);
    let c33 = riccati_c(b3, s3, swap.period_length);
    let h3 = spread_riccati_constant(c33, params);
    let (mut case1, mut case2) = (Vec::new(), Vec::new());
    for k in 1..=swap.periods {
        let horizon = swap.date(k - 1) - swap.first_reset;
        let upper = (2.0 * b3 * horizon).exp() / (4.0 * s3 * s3);
        if h3 > 0.0 && h3 < upper {
            case2.push(k);
        } else {
            case1.push(k);
        }
    }
    match (case1.is_empty(), case2.is_empty()) {
        (_, true) => Ok(SwaptionCase::Case1),
        (true, false) => Ok(SwaptionCase::Case2),
        _ => Err(PricingError::MixedCase { case1, case2 }),
    }
}

/// Swaption pieces that do not depend on the outer quadrature.
#[derive(Debug, Clone)]
pub struct SwaptionPricer {
    pub spec: SwaptionSpec,
    pub case: SwaptionCase,
    pub kernel: SwapKernel,
    pub payoff: QuadraticExpPayoff,
    /// Laws of the factors at T₀ under Q^{T₀}.
    pub laws: [GaussianLaw; 3],
    /// p(0, T₀).
    pub discount: f64,
}

impl SwaptionPricer {
    pub fn new(spec: &SwaptionSpec, params: &ModelParams) -> Result<Self> {
        let swap = spec.swap;
        if swap.side != SwapSide::Payer {
            return Err(PricingError::InvalidInput(
                "swaptions are priced on payer swaps".into(),
            ));
        }
        let gross = 1.0 + swap.rate * swap.period_length;
        if !(gross > 0.0) {
            return Err(PricingError::InvalidInput(format!(
                "1 + rate * period_length must be positive, got {gross}"
            )));
        }
        let case = swaption_case(&swap, params)?;
        let expiry = swap.first_reset;
        let kernel = SwapKernel::new(expiry, &swap, params)?;
        let payoff = QuadraticExpPayoff {
            float_terms: kernel
                .periods
                .iter()
                .map(|p| {
                    let [l1, l2, l3] = p.float_loadings;
                    [p.float_log_scale, l1, l2, l3]
                })
                .collect(),
            fixed_terms: kernel
                .periods
                .iter()
                .map(|p| [gross.ln() - p.discount.a, p.discount.b1, p.discount.c22])
                .collect(),
        };
        let moments = forward_moments(expiry, expiry, params)?;
        let discount = (-ois_log_discount(&coeff_bundle(0.0, expiry, params)?, &params.psi0)).exp();
        Ok(Self {
            spec: *spec,
            case,
            kernel,
            payoff,
            laws: [moments.law(0), moments.law(1), moments.law(2)],
            discount,
        })
    }

    pub fn region(&self, x: f64, y: f64) -> Result<RegionBoundary> {
        self.payoff.region(x, y)
    }

    pub fn price(&self, quad: &QuadratureConfig) -> Result<f64> {
        let expectation = self.payoff.expected_positive_part(&self.laws, quad)?;
        Ok(self.spec.swap.notional * self.discount * expectation)
    }
}

pub fn swaption_region(
    x: f64,
    y: f64,
    swap: &SwapSpec,
    params: &ModelParams,
    case: SwaptionCase,
) -> Result<RegionBoundary> {
    let pricer = SwaptionPricer::new(&SwaptionSpec { swap: *swap }, params)?;
    if pricer.case != case {
        return Err(PricingError::InvalidInput(format!(
            "requested {case:?} but the swap is in {:?}",
            pricer.case
        )));
    }
    pricer.region(x, y)
}

pub fn swaption_price(
    spec: &SwaptionSpec,
    params: &ModelParams,
    quad: &QuadratureConfig,
) -> Result<f64> {
    SwaptionPricer::new(spec, params)?.price(quad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::swap_price;

    fn base() -> ModelParams {
        ModelParams {
            b: [0.5, 0.3, 0.4],
            sigma: [0.01, 0.02, 0.015],
            kappa: 0.3,
            psi0: [0.01, 0.05, 0.05],
        }
    }

    fn swap4(rate: f64) -> SwapSpec {
        SwapSpec {
            first_reset: 1.0,
            periods: 4,
            period_length: 0.5,
            rate,
            notional: 1.0,
            side: SwapSide::Payer,
        }
    }

    #[test]
    fn base_parameters_are_case1() {
        assert_eq!(
            swaption_case(&swap4(0.02), &base()).unwrap(),
            SwaptionCase::Case1
        );
    }

    #[test]
    fn region_plug_back() {
        let p = base();
        let pricer = SwaptionPricer::new(&SwaptionSpec { swap: swap4(0.03) }, &p).unwrap();
        let r = pricer.region(-0.01, 0.02).unwrap();
        assert!(r.in_region);
        let (z1, z2) = r.roots.unwrap();
        assert_eq!(z1, -z2);
        let h = pricer.payoff.fixed_leg(-0.01, 0.02);
        assert!(pricer.payoff.value(-0.01, 0.02, z2).abs() / h < 1e-10);
    }

    #[test]
    fn jensen_and_far_strike() {
        let p = base();
        let quad = QuadratureConfig::default();
        for rate in [0.0, 0.02, 0.05] {
            let swap = swap4(rate);
            let opt = swaption_price(&SwaptionSpec { swap }, &p, &quad).unwrap();
            let und = swap_price(&p.initial_state(), &swap, &p).unwrap();
            assert!(opt >= und.max(0.0) - 1e-12, "{rate}: {opt} vs {und}");
        }
        let far = swaption_price(&SwaptionSpec { swap: swap4(1.0) }, &p, &quad).unwrap();
        assert!(far < 1e-10);
    }

    #[test]
    fn mixed_signs_are_refused() {
        let payoff = QuadraticExpPayoff {
            float_terms: vec![[0.0, 0.0, 0.0, -0.1], [0.0, 0.0, 0.0, 0.1]],
            fixed_terms: vec![[0.0, 0.0, 0.0]],
        };
        assert_eq!(
            payoff.case(),
            Err(PricingError::MixedCase {
                case1: vec![1],
                case2: vec![2]
            })
        );
    }
}
