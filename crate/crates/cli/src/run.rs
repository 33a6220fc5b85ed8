//! Pricing a scenario and writing its reports.

use std::fs;
use std::path::Path;

use expquad::{
    adjustment, fra_rate, libor_bond, mc_price, ois_bond, residual, single_curve_fra_rate,
    FactorState, McConfig, McEstimate, ModelParams, PricingError, ProductSpec, QuadratureConfig,
};
use rayon::prelude::*;

use crate::error::CliError;
use crate::scenario::{OutputRequest, Scenario};

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Run the Monte Carlo validator even when the scenario has no `mc` block.
    pub force_mc: bool,
    pub seed: Option<u64>,
    pub solve_fair_rate: bool,
}

/// Outcome for one product.
#[derive(Debug, Clone)]
pub struct ProductRecord {
    pub index: usize,
    pub kind: &'static str,
    pub price: Result<f64, PricingError>,
    pub mc: Option<Result<McEstimate, PricingError>>,
}

impl ProductRecord {
    /// (analytic − MC) / SE.
    pub fn z_score(&self) -> Option<f64> {
        match (&self.price, &self.mc) {
            (Ok(price), Some(Ok(est))) => Some(est.z_score(*price)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CurveRow {
    pub maturity: f64,
    pub ois_bond: f64,
    pub libor_bond: f64,
    pub single_curve_fra: f64,
    pub multi_curve_fra: f64,
    pub adjustment: f64,
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub products: Vec<ProductRecord>,
    pub curves: Vec<(String, Result<Vec<CurveRow>, PricingError>)>,
}

impl RunReport {
    /// 0 on success, 3 for a pricing error, 4 for a Monte Carlo bias failure.
    pub fn exit_code(&self) -> i32 {
        let pricing_failed = self.products.iter().any(|r| {
            r.price.is_err()
                || matches!(&r.mc, Some(Err(e)) if !matches!(e, PricingError::BiasDominates { .. }))
        }) || self.curves.iter().any(|(_, c)| c.is_err());
        let bias_failed = self
            .products
            .iter()
            .any(|r| matches!(&r.mc, Some(Err(PricingError::BiasDominates { .. }))));
        if pricing_failed {
            3
        } else if bias_failed {
            4
        } else {
            0
        }
    }
}

pub fn run(scenario: &Scenario, options: &RunOptions) -> RunReport {
    let state = scenario.valuation_state();
    let params = scenario.params;
    let quad = scenario.quad.unwrap_or_default();
    let mc = match (scenario.mc, options.force_mc) {
        (Some(c), _) => Some(c),
        (None, true) => Some(McConfig::default()),
        (None, false) => None,
    }
    .map(|c| McConfig {
        seed: options.seed.unwrap_or(c.seed),
        ..c
    });

    let products: Vec<ProductRecord> = scenario
        .products
        .par_iter()
        .enumerate()
        .map(|(index, product)| {
            price_product(index, product, &state, &params, &quad, mc.as_ref(), options)
        })
        .collect();
    let curves = scenario
        .outputs
        .iter()
        .map(|out| {
            let OutputRequest::CurveDump {
                name,
                maturities,
                delta,
            } = out;
            (
                name.clone(),
                curve_rows(&state, &params, maturities, *delta),
            )
        })
        .collect();
    RunReport { products, curves }
}

fn price_product(
    index: usize,
    product: &ProductSpec,
    state: &FactorState,
    params: &ModelParams,
    quad: &QuadratureConfig,
    mc: Option<&McConfig>,
    options: &RunOptions,
) -> ProductRecord {
    let kind = product.kind();
    let product = if options.solve_fair_rate {
        match product.at_fair_rate(state, params) {
            Ok(p) => p,
            Err(e) => {
                return ProductRecord {
                    index,
                    kind,
                    price: Err(e),
                    mc: None,
                }
            }
        }
    } else {
        product.clone()
    };
    let price = product.price(state, params, quad);
    let mc = mc.map(|config| {
        if state.t != 0.0 || state.psi != params.psi0 {
            return Err(PricingError::InvalidInput(
                "Monte Carlo validation runs from the initial state only".into(),
            ));
        }
        mc_price(params, &product, config)
    });
    ProductRecord {
        index,
        kind,
        price,
        mc,
    }
}

fn curve_rows(
    state: &FactorState,
    params: &ModelParams,
    maturities: &[f64],
    delta: f64,
) -> Result<Vec<CurveRow>, PricingError> {
    maturities
        .iter()
        .map(|&maturity| {
            Ok(CurveRow {
                maturity,
                ois_bond: ois_bond(state, maturity, params)?.value,
                libor_bond: libor_bond(state, maturity, params)?.value,
                single_curve_fra: single_curve_fra_rate(state, maturity, delta, params)?,
                multi_curve_fra: fra_rate(state, maturity, delta, params)?,
                adjustment: adjustment(state, maturity, delta, params)?,
                residual: residual(state.t, maturity, delta, params)?,
            })
        })
        .collect()
}

/// Seventeen significant digits.
fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub const PRICE_COLUMNS: [&str; 9] = [
    "index",
    "kind",
    "price",
    "mc_mean",
    "mc_std_error",
    "mc_z",
    "mc_bias_proxy",
    "mc_paths",
    "error",
];

pub const CURVE_COLUMNS: [&str; 7] = [
    "maturity",
    "ois_bond",
    "libor_bond",
    "single_curve_fra",
    "multi_curve_fra",
    "adjustment",
    "residual",
];

pub fn write_reports(report: &RunReport, out_dir: &Path) -> Result<(), CliError> {
    let io = |e: &dyn std::fmt::Display| CliError::Io(e.to_string());
    fs::create_dir_all(out_dir).map_err(|e| io(&e))?;
    if !report.products.is_empty() {
        let mut w = csv::Writer::from_path(out_dir.join("prices.csv")).map_err(|e| io(&e))?;
        w.write_record(PRICE_COLUMNS).map_err(|e| io(&e))?;
        for r in &report.products {
            let est = r.mc.as_ref().and_then(|m| m.as_ref().ok());
            let error = match (&r.price, &r.mc) {
                (Err(e), _) | (_, Some(Err(e))) => e.to_string(),
                _ => String::new(),
            };
            w.write_record([
                r.index.to_string(),
                r.kind.to_string(),
                r.price.as_ref().map(|v| num(*v)).unwrap_or_default(),
                est.map(|e| num(e.mean)).unwrap_or_default(),
                est.map(|e| num(e.std_error)).unwrap_or_default(),
                r.z_score().map(num).unwrap_or_default(),
                est.map(|e| num(e.bias_proxy)).unwrap_or_default(),
                est.map(|e| e.n_paths.to_string()).unwrap_or_default(),
                error,
            ])
            .map_err(|e| io(&e))?;
        }
        w.flush().map_err(|e| io(&e))?;
    }
    for (name, rows) in &report.curves {
        let Ok(rows) = rows else { continue };
        let mut w = csv::Writer::from_path(out_dir.join(format!("curves_{name}.csv")))
            .map_err(|e| io(&e))?;
        w.write_record(CURVE_COLUMNS).map_err(|e| io(&e))?;
        for row in rows {
            w.write_record(
                [
                    row.maturity,
                    row.ois_bond,
                    row.libor_bond,
                    row.single_curve_fra,
                    row.multi_curve_fra,
                    row.adjustment,
                    row.residual,
                ]
                .map(num),
            )
            .map_err(|e| io(&e))?;
        }
        w.flush().map_err(|e| io(&e))?;
    }
    Ok(())
}

/// Human-readable summary for standard output.
pub fn summary(report: &RunReport) -> String {
    let mut out = String::new();
    for r in &report.products {
        let line = match &r.price {
            Ok(p) => format!("[{}] {:<9} price {p:.10e}", r.index, r.kind),
            Err(e) => format!("[{}] {:<9} pricing error: {e}", r.index, r.kind),
        };
        out.push_str(&line);
        match &r.mc {
            Some(Ok(est)) => {
                let z = r
                    .z_score()
                    .map(|z| format!("{z:+.2}"))
                    .unwrap_or_else(|| "n/a".into());
                out.push_str(&format!(
                    "  mc {:.10e} ± {:.2e}  z {z}",
                    est.mean, est.std_error
                ));
            }
            Some(Err(e)) => out.push_str(&format!("  mc error: {e}")),
            None => {}
        }
        out.push('\n');
    }
    for (name, rows) in &report.curves {
        match rows {
            Ok(rows) => out.push_str(&format!("curve dump {name}: {} maturities\n", rows.len())),
            Err(e) => out.push_str(&format!("curve dump {name}: error: {e}\n")),
        }
    }
    out
}
