//! Term-structure coefficients of the exponentially quadratic bond prices.
//!
//! ```text
//! p(t,T) = exp[−A − B¹Ψ¹ − C²²(Ψ²)²]
//! p̄(t,T) = exp[−Ā − (1+κ)B¹Ψ¹ − C²²(Ψ²)² − C̄³³(Ψ³)²]
//! ```
//!
//! B¹, C²² and C̄³³ have closed forms; A and Ā are integrals of those closed forms
//! and are evaluated by adaptive quadrature. Every coefficient depends on (t, T)
//! only through τ = T − t.

use std::collections::HashMap;
use std::sync::RwLock;

use crate::error::{check_order, PricingError, Result};
use crate::model::ModelParams;
use crate::numerics::integrate;

const QUAD_REL_TOL: f64 = 1e-10;
const QUAD_ABS_TOL: f64 = 1e-15;

/// All coefficient functions evaluated at one (t, T).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoeffBundle {
    pub t: f64,
    pub maturity: f64,
    pub a: f64,
    pub a_bar: f64,
    /// Ā − A.
    pub a_tilde: f64,
    pub b1: f64,
    /// (1 + κ) B¹.
    pub b1_bar: f64,
    pub c22: f64,
    pub c33_bar: f64,
}

/// Identifies one of the ODEs satisfied by the coefficient functions in t.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OdeId {
    /// C_t − 2b²C − 2(σ²)²C² + 1 = 0
    C22,
    /// C_t − 2b³C − 2(σ³)²C² + 1 = 0
    C33Bar,
    /// B_t − b¹B + 1 = 0
    B1,
    /// B_t − b¹B + (1+κ) = 0
    B1Bar,
    /// A_t + (σ²)²C²² − ½(σ¹)²(B¹)² = 0
    A,
    /// Ā_t + (σ²)²C²² + (σ³)²C̄³³ − ½(σ¹)²(B̄¹)² = 0
    ABar,
}

pub(crate) fn riccati_h(b: f64, sigma: f64) -> f64 {
    (4.0 * b * b + 8.0 * sigma * sigma).sqrt()
}

/// Solution of C' = 1 − 2bC − 2σ²C², C(0) = 0, as a function of τ.
/// Written in e^{−τh} so that it stays finite for long horizons.
pub(crate) fn riccati_c(b: f64, sigma: f64, tau: f64) -> f64 {
    let h = riccati_h(b, sigma);
    let em = (-tau * h).exp();
    let one_minus = -(-tau * h).exp_m1();
    2.0 * one_minus / (2.0 * h * em + (2.0 * b + h) * one_minus)
}

/// dC/dτ from the Riccati equation itself.
pub(crate) fn riccati_c_slope(b: f64, sigma: f64, tau: f64) -> f64 {
    let c = riccati_c(b, sigma, tau);
    1.0 - 2.0 * b * c - 2.0 * sigma * sigma * c * c
}

pub(crate) fn b1_tau(b: f64, tau: f64) -> f64 {
    -(-b * tau).exp_m1() / b
}

/// ∫₀^τ B¹(s)² ds in closed form.
pub(crate) fn b1_squared_integral(b: f64, tau: f64) -> f64 {
    let e1 = -(-b * tau).exp_m1();
    let e2 = -(-2.0 * b * tau).exp_m1();
    (tau - 2.0 * e1 / b + e2 / (2.0 * b)) / (b * b)
}

pub fn c22(t: f64, maturity: f64, params: &ModelParams) -> Result<f64> {
    check_order(t, maturity)?;
    Ok(riccati_c(params.b[1], params.sigma[1], maturity - t))
}

pub fn c33_bar(t: f64, maturity: f64, params: &ModelParams) -> Result<f64> {
    check_order(t, maturity)?;
    Ok(riccati_c(params.b[2], params.sigma[2], maturity - t))
}

pub fn b1(t: f64, maturity: f64, params: &ModelParams) -> Result<f64> {
    check_order(t, maturity)?;
    Ok(b1_tau(params.b[0], maturity - t))
}

pub fn b1_bar(t: f64, maturity: f64, params: &ModelParams) -> Result<f64> {
    Ok((1.0 + params.kappa) * b1(t, maturity, params)?)
}

/// Integrals of the closed-form coefficients over [0, τ].
struct CoeffIntegrals {
    c22: f64,
    c33: f64,
    b1_sq: f64,
}

fn coeff_integrals(tau: f64, params: &ModelParams) -> Result<CoeffIntegrals> {
    let [b1, b2, b3] = params.b;
    let [_, s2, s3] = params.sigma;
    let c22 = integrate(
        |s| riccati_c(b2, s2, s),
        0.0,
        tau,
        QUAD_REL_TOL,
        QUAD_ABS_TOL,
    )?;
    let c33 = integrate(
        |s| riccati_c(b3, s3, s),
        0.0,
        tau,
        QUAD_REL_TOL,
        QUAD_ABS_TOL,
    )?;
    let b1_sq_quad = integrate(
        |s| b1_tau(b1, s).powi(2),
        0.0,
        tau,
        QUAD_REL_TOL,
        QUAD_ABS_TOL,
    )?;
    let b1_sq = b1_squared_integral(b1, tau);
    if (b1_sq_quad - b1_sq).abs() > 1e-9 * b1_sq.abs() + 1e-14 {
        return Err(PricingError::QuadratureFailure(format!(
            "B1^2 integral: quadrature {b1_sq_quad:e} vs closed form {b1_sq:e}"
        )));
    }
    Ok(CoeffIntegrals { c22, c33, b1_sq })
}

/// (A(t,T), Ā(t,T)).
pub fn a_pair(t: f64, maturity: f64, params: &ModelParams) -> Result<(f64, f64)> {
    check_order(t, maturity)?;
    let tau = maturity - t;
    if tau == 0.0 {
        return Ok((0.0, 0.0));
    }
    let [s1, s2, s3] = params.sigma;
    let k1 = 1.0 + params.kappa;
    let ints = coeff_integrals(tau, params)?;
    let a = s2 * s2 * ints.c22 - 0.5 * s1 * s1 * ints.b1_sq;
    let a_bar = s2 * s2 * ints.c22 + s3 * s3 * ints.c33 - 0.5 * s1 * s1 * k1 * k1 * ints.b1_sq;
    Ok((a, a_bar))
}

/// ∂A/∂T and ∂Ā/∂T: the integrands of A and Ā evaluated at τ.
pub(crate) fn a_pair_slope(tau: f64, params: &ModelParams) -> (f64, f64) {
    let [b1, b2, b3] = params.b;
    let [s1, s2, s3] = params.sigma;
    let k1 = 1.0 + params.kappa;
    let c22 = riccati_c(b2, s2, tau);
    let c33 = riccati_c(b3, s3, tau);
    let bb = b1_tau(b1, tau).powi(2);
    (
        s2 * s2 * c22 - 0.5 * s1 * s1 * bb,
        s2 * s2 * c22 + s3 * s3 * c33 - 0.5 * s1 * s1 * k1 * k1 * bb,
    )
}

pub fn coeff_bundle(t: f64, maturity: f64, params: &ModelParams) -> Result<CoeffBundle> {
    check_order(t, maturity)?;
    let tau = maturity - t;
    let (a, a_bar) = a_pair(t, maturity, params)?;
    let b1 = b1_tau(params.b[0], tau);
    Ok(CoeffBundle {
        t,
        maturity,
        a,
        a_bar,
        a_tilde: a_bar - a,
        b1,
        b1_bar: (1.0 + params.kappa) * b1,
        c22: riccati_c(params.b[1], params.sigma[1], tau),
        c33_bar: riccati_c(params.b[2], params.sigma[2], tau),
    })
}

/// Memo layer over [`coeff_bundle`]; returns bit-identical bundles.
#[derive(Debug, Default)]
pub struct CoeffCache {
    entries: RwLock<HashMap<(u64, u64, u64), CoeffBundle>>,
}

impl CoeffCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, t: f64, maturity: f64, params: &ModelParams) -> Result<CoeffBundle> {
        let key = (params.fingerprint(), t.to_bits(), maturity.to_bits());
        if let Some(hit) = self.entries.read().expect("cache lock").get(&key) {
            return Ok(*hit);
        }
        let bundle = coeff_bundle(t, maturity, params)?;
        self.entries
            .write()
            .expect("cache lock")
            .insert(key, bundle);
        Ok(bundle)
    }

    pub fn len(&self) -> usize {
        self.entries.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Magnitude of the ODE `ode` evaluated on `coef` (a function of t with T fixed),
/// with the t-derivative from fourth-order central differences.
pub fn riccati_residual<F: Fn(f64) -> f64>(
    coef: F,
    ode: OdeId,
    t: f64,
    maturity: f64,
    params: &ModelParams,
) -> f64 {
    let h = (1e-3f64).min((maturity - t) / 4.0);
    let deriv = (coef(t - 2.0 * h) - 8.0 * coef(t - h) + 8.0 * coef(t + h) - coef(t + 2.0 * h))
        / (12.0 * h);
    let value = coef(t);
    let tau = maturity - t;
    let [b1, b2, b3] = params.b;
    let [s1, s2, s3] = params.sigma;
    let k1 = 1.0 + params.kappa;
    let lhs = match ode {
        OdeId::C22 => deriv - 2.0 * b2 * value - 2.0 * s2 * s2 * value * value + 1.0,
        OdeId::C33Bar => deriv - 2.0 * b3 * value - 2.0 * s3 * s3 * value * value + 1.0,
        OdeId::B1 => deriv - b1 * value + 1.0,
        OdeId::B1Bar => deriv - b1 * value + k1,
        OdeId::A => {
            deriv + s2 * s2 * riccati_c(b2, s2, tau) - 0.5 * s1 * s1 * b1_tau(b1, tau).powi(2)
        }
        OdeId::ABar => {
            deriv + s2 * s2 * riccati_c(b2, s2, tau) + s3 * s3 * riccati_c(b3, s3, tau)
                - 0.5 * s1 * s1 * (k1 * b1_tau(b1, tau)).powi(2)
        }
    };
    lhs.abs()
}
