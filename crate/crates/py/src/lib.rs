//! Python bindings for the expquad pricers.
//!
//! Contracts cross the boundary either as keyword arguments or, for the generic
//! `price` and `mc_price`, as the same JSON product objects the CLI reads.

use core::{
    Curve, FactorState, PricingError as CoreError, ProductSpec, QuadratureConfig, SwapSide,
    SwapSpec,
};
use expquad_core as core;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

create_exception!(
    expquad,
    PricingError,
    PyException,
    "Raised when a pricer or the Monte Carlo engine fails."
);

fn err(e: CoreError) -> PyErr {
    PricingError::new_err(e.to_string())
}

fn curve(name: &str) -> PyResult<Curve> {
    match name {
        "ois" => Ok(Curve::Ois),
        "libor" => Ok(Curve::Libor),
        other => Err(PyValueError::new_err(format!(
            "curve must be 'ois' or 'libor', got {other:?}"
        ))),
    }
}

fn side(name: &str) -> PyResult<SwapSide> {
    match name {
        "payer" => Ok(SwapSide::Payer),
        "receiver" => Ok(SwapSide::Receiver),
        other => Err(PyValueError::new_err(format!(
            "side must be 'payer' or 'receiver', got {other:?}"
        ))),
    }
}

fn parse_product(json: &str) -> PyResult<ProductSpec> {
    serde_json::from_str(json).map_err(|e| PyValueError::new_err(format!("invalid product: {e}")))
}

/// Model coefficients b, sigma (three each), kappa and initial factors psi0.
#[pyclass(frozen, name = "ModelParams", module = "expquad")]
struct PyModelParams {
    inner: core::ModelParams,
}

#[pymethods]
impl PyModelParams {
    #[new]
    fn new(b: [f64; 3], sigma: [f64; 3], kappa: f64, psi0: [f64; 3]) -> PyResult<Self> {
        let inner = core::ModelParams {
            b,
            sigma,
            kappa,
            psi0,
        };
        core::validate(&inner).map_err(err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn b(&self) -> [f64; 3] {
        self.inner.b
    }

    #[getter]
    fn sigma(&self) -> [f64; 3] {
        self.inner.sigma
    }

    #[getter]
    fn kappa(&self) -> f64 {
        self.inner.kappa
    }

    #[getter]
    fn psi0(&self) -> [f64; 3] {
        self.inner.psi0
    }

    /// Whether the caplet moment condition holds.
    fn caplet_condition(&self) -> bool {
        self.inner.caplet_condition()
    }

    /// Non-fatal warnings from validation.
    fn warnings(&self) -> PyResult<Vec<String>> {
        Ok(core::validate(&self.inner).map_err(err)?.warnings)
    }

    fn __repr__(&self) -> String {
        let p = &self.inner;
        format!(
            "ModelParams(b={:?}, sigma={:?}, kappa={}, psi0={:?})",
            p.b, p.sigma, p.kappa, p.psi0
        )
    }
}

/// Monte Carlo estimate with its standard error and grid-bias proxy.
#[pyclass(frozen, name = "McEstimate", module = "expquad")]
struct PyMcEstimate {
    inner: core::McEstimate,
}

#[pymethods]
impl PyMcEstimate {
    #[getter]
    fn mean(&self) -> f64 {
        self.inner.mean
    }

    #[getter]
    fn std_error(&self) -> f64 {
        self.inner.std_error
    }

    #[getter]
    fn n_paths(&self) -> usize {
        self.inner.n_paths
    }

    #[getter]
    fn bias_proxy(&self) -> f64 {
        self.inner.bias_proxy
    }

    /// (value − mean) / std_error.
    fn z_score(&self, value: f64) -> f64 {
        self.inner.z_score(value)
    }

    fn __repr__(&self) -> String {
        format!(
            "McEstimate(mean={}, std_error={}, n_paths={})",
            self.inner.mean, self.inner.std_error, self.inner.n_paths
        )
    }
}

fn state(params: &PyModelParams, t: f64, psi: Option<[f64; 3]>) -> PyResult<FactorState> {
    FactorState::new(t, psi.unwrap_or(params.inner.psi0)).map_err(err)
}

fn quad(n_nodes: usize, truncation: f64, max_refinements: usize) -> QuadratureConfig {
    QuadratureConfig {
        n_nodes_per_axis: n_nodes,
        truncation,
        max_refinements,
    }
}

#[pyfunction]
#[pyo3(signature = (params, maturity, curve_name = "ois", t = 0.0, psi = None))]
fn bond(
    params: &PyModelParams,
    maturity: f64,
    curve_name: &str,
    t: f64,
    psi: Option<[f64; 3]>,
) -> PyResult<f64> {
    let s = state(params, t, psi)?;
    Ok(core::bond(&s, maturity, &params.inner, curve(curve_name)?)
        .map_err(err)?
        .value)
}

#[pyfunction]
#[pyo3(signature = (params, maturity, curve_name = "ois", t = 0.0, psi = None))]
fn inst_forward(
    params: &PyModelParams,
    maturity: f64,
    curve_name: &str,
    t: f64,
    psi: Option<[f64; 3]>,
) -> PyResult<f64> {
    let s = state(params, t, psi)?;
    core::inst_forward(&s, maturity, &params.inner, curve(curve_name)?).map_err(err)
}

/// Multi-curve FRA rate for (fixing, fixing + delta).
#[pyfunction]
#[pyo3(signature = (params, fixing, delta, t = 0.0, psi = None))]
fn fra_rate(
    params: &PyModelParams,
    fixing: f64,
    delta: f64,
    t: f64,
    psi: Option<[f64; 3]>,
) -> PyResult<f64> {
    core::fra_rate(&state(params, t, psi)?, fixing, delta, &params.inner).map_err(err)
}

/// Single-curve FRA rate for (fixing, fixing + delta).
#[pyfunction]
#[pyo3(signature = (params, fixing, delta, t = 0.0, psi = None))]
fn single_curve_fra_rate(
    params: &PyModelParams,
    fixing: f64,
    delta: f64,
    t: f64,
    psi: Option<[f64; 3]>,
) -> PyResult<f64> {
    core::single_curve_fra_rate(&state(params, t, psi)?, fixing, delta, &params.inner).map_err(err)
}

/// (Ad, Res): the factors turning the single-curve ratio into the multi-curve one.
#[pyfunction]
#[pyo3(signature = (params, fixing, delta, t = 0.0, psi = None))]
fn adjustment_factors(
    params: &PyModelParams,
    fixing: f64,
    delta: f64,
    t: f64,
    psi: Option<[f64; 3]>,
) -> PyResult<(f64, f64)> {
    let s = state(params, t, psi)?;
    let ad = core::adjustment(&s, fixing, delta, &params.inner).map_err(err)?;
    let res = core::residual(t, fixing, delta, &params.inner).map_err(err)?;
    Ok((ad, res))
}

/// Forward-measure means and variances of the three factors at t under Q^{t_star}.
#[pyfunction]
fn forward_moments(params: &PyModelParams, t: f64, t_star: f64) -> PyResult<([f64; 3], [f64; 3])> {
    let m = core::forward_moments(t, t_star, &params.inner).map_err(err)?;
    Ok((m.alpha, m.beta))
}

fn swap_spec(
    first_reset: f64,
    periods: usize,
    period_length: f64,
    rate: f64,
    notional: f64,
    side_name: &str,
) -> PyResult<SwapSpec> {
    Ok(SwapSpec {
        first_reset,
        periods,
        period_length,
        rate,
        notional,
        side: side(side_name)?,
    })
}

#[pyfunction]
#[pyo3(signature = (params, first_reset, periods, period_length, rate, notional = 1.0, side = "payer", t = 0.0, psi = None))]
#[allow(clippy::too_many_arguments)]
fn swap_price(
    params: &PyModelParams,
    first_reset: f64,
    periods: usize,
    period_length: f64,
    rate: f64,
    notional: f64,
    side: &str,
    t: f64,
    psi: Option<[f64; 3]>,
) -> PyResult<f64> {
    let spec = swap_spec(first_reset, periods, period_length, rate, notional, side)?;
    core::swap_price(&state(params, t, psi)?, &spec, &params.inner).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (params, first_reset, periods, period_length, t = 0.0, psi = None))]
fn swap_fair_rate(
    params: &PyModelParams,
    first_reset: f64,
    periods: usize,
    period_length: f64,
    t: f64,
    psi: Option<[f64; 3]>,
) -> PyResult<f64> {
    let spec = swap_spec(first_reset, periods, period_length, 0.0, 1.0, "payer")?;
    core::swap_fair_rate(&state(params, t, psi)?, &spec, &params.inner).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (params, fixing, delta, strike, notional = 1.0, floor = false, n_nodes = 128, truncation = 8.0, max_refinements = 3))]
#[allow(clippy::too_many_arguments)]
fn caplet_price(
    params: &PyModelParams,
    fixing: f64,
    delta: f64,
    strike: f64,
    notional: f64,
    floor: bool,
    n_nodes: usize,
    truncation: f64,
    max_refinements: usize,
) -> PyResult<f64> {
    let spec = core::CapletSpec {
        fixing,
        delta,
        strike,
        notional,
    };
    let q = quad(n_nodes, truncation, max_refinements);
    if floor {
        core::floorlet_price(&spec, &params.inner, &q).map_err(err)
    } else {
        core::caplet_price(&spec, &params.inner, &q).map_err(err)
    }
}

/// Time-0 payer swaption expiring at the first reset date.
#[pyfunction]
#[pyo3(signature = (params, first_reset, periods, period_length, rate, notional = 1.0, n_nodes = 128, truncation = 8.0, max_refinements = 3))]
#[allow(clippy::too_many_arguments)]
fn swaption_price(
    params: &PyModelParams,
    first_reset: f64,
    periods: usize,
    period_length: f64,
    rate: f64,
    notional: f64,
    n_nodes: usize,
    truncation: f64,
    max_refinements: usize,
) -> PyResult<f64> {
    let swap = swap_spec(first_reset, periods, period_length, rate, notional, "payer")?;
    core::swaption_price(
        &core::SwaptionSpec { swap },
        &params.inner,
        &quad(n_nodes, truncation, max_refinements),
    )
    .map_err(err)
}

/// "case1" or "case2"; raises PricingError for a mixed swap.
#[pyfunction]
fn swaption_case(
    params: &PyModelParams,
    first_reset: f64,
    periods: usize,
    period_length: f64,
    rate: f64,
) -> PyResult<&'static str> {
    let swap = swap_spec(first_reset, periods, period_length, rate, 1.0, "payer")?;
    Ok(
        match core::swaption_case(&swap, &params.inner).map_err(err)? {
            core::SwaptionCase::Case1 => "case1",
            core::SwaptionCase::Case2 => "case2",
        },
    )
}

/// Analytic time-0 price of a product given as a JSON object, e.g.
/// `{"kind": "caplet", "fixing": 1.0, "delta": 0.5, "strike": 0.03}`.
#[pyfunction]
fn price(params: &PyModelParams, product: &str) -> PyResult<f64> {
    let spec = parse_product(product)?;
    spec.price(
        &params.inner.initial_state(),
        &params.inner,
        &QuadratureConfig::default(),
    )
    .map_err(err)
}

/// Monte Carlo estimate of a product given as a JSON object.
#[pyfunction]
#[pyo3(signature = (params, product, n_paths = 1_000_000, steps_per_year = 512, seed = 0, antithetic = true, bias_check = true))]
#[allow(clippy::too_many_arguments)]
fn mc_price(
    py: Python<'_>,
    params: &PyModelParams,
    product: &str,
    n_paths: usize,
    steps_per_year: usize,
    seed: u64,
    antithetic: bool,
    bias_check: bool,
) -> PyResult<PyMcEstimate> {
    let spec = parse_product(product)?;
    let config = core::McConfig {
        n_paths,
        steps_per_year,
        seed,
        antithetic,
        bias_check,
    };
    let p = params.inner;
    let inner = py
        .detach(|| core::mc_price(&p, &spec, &config))
        .map_err(err)?;
    Ok(PyMcEstimate { inner })
}

#[pymodule]
fn expquad(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("PricingError", m.py().get_type::<PricingError>())?;
    m.add_class::<PyModelParams>()?;
    m.add_class::<PyMcEstimate>()?;
    m.add_function(wrap_pyfunction!(bond, m)?)?;
    m.add_function(wrap_pyfunction!(inst_forward, m)?)?;
    m.add_function(wrap_pyfunction!(fra_rate, m)?)?;
    m.add_function(wrap_pyfunction!(single_curve_fra_rate, m)?)?;
    m.add_function(wrap_pyfunction!(adjustment_factors, m)?)?;
    m.add_function(wrap_pyfunction!(forward_moments, m)?)?;
    m.add_function(wrap_pyfunction!(swap_price, m)?)?;
    m.add_function(wrap_pyfunction!(swap_fair_rate, m)?)?;
    m.add_function(wrap_pyfunction!(caplet_price, m)?)?;
    m.add_function(wrap_pyfunction!(swaption_price, m)?)?;
    m.add_function(wrap_pyfunction!(swaption_case, m)?)?;
    m.add_function(wrap_pyfunction!(price, m)?)?;
    m.add_function(wrap_pyfunction!(mc_price, m)?)?;
    Ok(())
}
