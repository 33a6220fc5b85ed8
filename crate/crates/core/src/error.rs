use thiserror::Error;

/// Errors raised by the pricers, the coefficient evaluators and the Monte Carlo engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PricingError {
    #[error("coefficient `{0}` must be strictly positive")]
    NonPositiveCoefficient(String),

    #[error("invalid time order: t = {t} is after T = {maturity}")]
    InvalidTimeOrder { t: f64, maturity: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("quadrature did not reach tolerance: {0}")]
    QuadratureFailure(String),

    /// E[exp(c Z^2)] is infinite for the requested Gaussian law.
    #[error("exponential-quadratic moment explodes (1 - 2 c var = {denominator:e})")]
    MomentExplosion { denominator: f64 },

    /// The Riccati solution behind a swap expectation crosses a pole.
    #[error("expectation coefficients for period {period} are singular: {reason}")]
    ExpectationSingularity { period: usize, reason: String },

    #[error("spread factor coefficient C33 vanishes; caplet reduces to a two-factor problem")]
    DegenerateSpreadFactor,

    #[error("caplet condition violated: 1 - 2 beta3 C33 = {0:e} is not positive")]
    CapletConditionViolated(f64),

    #[error("swaption periods straddle both region cases (case-1 periods {case1:?}, case-2 periods {case2:?})")]
    MixedCase {
        case1: Vec<usize>,
        case2: Vec<usize>,
    },

    #[error("boundary root not bracketed: {0}")]
    RootNotBracketed(String),

    #[error("Monte Carlo time-step bias {bias:e} dominates standard error {std_error:e}")]
    BiasDominates { bias: f64, std_error: f64 },
}

pub type Result<T> = std::result::Result<T, PricingError>;

pub(crate) fn check_order(t: f64, maturity: f64) -> Result<()> {
    if t > maturity || t.is_nan() || maturity.is_nan() {
        Err(PricingError::InvalidTimeOrder { t, maturity })
    } else {
        Ok(())
    }
}
