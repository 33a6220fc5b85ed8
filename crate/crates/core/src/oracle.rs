//! Monte Carlo engine used to validate the analytic pricers.
//!
//! Factors are advanced with exact Ornstein–Uhlenbeck transitions under Q, so the
//! only discretization error is the trapezoid rule for ∫r and ∫s. Every estimate
//! is also computed on the same paths with a grid of twice the step (keeping the
//! contract dates), and the difference is reported as `bias_proxy`.
//!
//! Paths are generated in blocks of [`BLOCK_PATHS`]; block `i` draws from the
//! ChaCha8 stream `i` of the configured seed and blocks are reduced in index order,
//! so estimates do not depend on the number of worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coeffs::coeff_bundle;
use crate::curves::{libor_log_discount, ois_log_discount, Curve};
use crate::error::{PricingError, Result};
use crate::linear::{SwapKernel, SwapSide};
use crate::model::ModelParams;
use crate::product::ProductSpec;

pub const BLOCK_PATHS: usize = 4096;

fn default_steps() -> usize {
    512
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McConfig {
    pub n_paths: usize,
    #[serde(default = "default_steps")]
    pub steps_per_year: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_true")]
    pub antithetic: bool,
    /// Fail with [`PricingError::BiasDominates`] when the step-halving bias reaches 3 SE.
    #[serde(default = "default_true")]
    pub bias_check: bool,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            n_paths: 1_000_000,
            steps_per_year: 512,
            seed: 0,
            antithetic: true,
            bias_check: true,
        }
    }
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_paths < 1000 {
            return Err(PricingError::InvalidInput(format!(
                "n_paths must be at least 1000, got {}",
                self.n_paths
            )));
        }
        if !self.steps_per_year.is_power_of_two() || self.steps_per_year < 2 {
            return Err(PricingError::InvalidInput(format!(
                "steps_per_year must be a power of two of at least 2, got {}",
                self.steps_per_year
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n_paths: usize,
    /// |estimate on the full grid − estimate on the doubled-step grid|.
    pub bias_proxy: f64,
}

impl McEstimate {
    /// (value − mean)/std_error.
    pub fn z_score(&self, value: f64) -> f64 {
        (value - self.mean) / self.std_error
    }
}

/// Factor values and running integrals at the requested observation dates of one path.
#[derive(Debug, Clone, Copy)]
pub struct PathObservation<'a> {
    pub dates: &'a [f64],
    pub psi: &'a [[f64; 3]],
    /// ∫₀^{date} r du.
    pub int_rate: &'a [f64],
    /// ∫₀^{date} s du.
    pub int_spread: &'a [f64],
}

impl PathObservation<'_> {
    /// exp(−∫₀^{date} r du) for observation `j`.
    pub fn discount(&self, j: usize) -> f64 {
        (-self.int_rate[j]).exp()
    }
}

/// Simulation grid: uniform steps merged with the observation dates.
struct TimeGrid {
    times: Vec<f64>,
    /// Member of the doubled-step grid.
    coarse: Vec<bool>,
    /// Per step i (times[i−1] → times[i]) and factor: (e^{−b dt}, conditional s.d.).
    transitions: Vec<[(f64, f64); 3]>,
    /// Grid index of each observation date.
    observe_at: Vec<usize>,
}

impl TimeGrid {
    fn new(params: &ModelParams, dates: &[f64], steps_per_year: usize) -> Result<Self> {
        if dates.is_empty() || dates.windows(2).any(|w| w[1] < w[0]) || dates[0] < 0.0 {
            return Err(PricingError::InvalidInput(
                "observation dates must be non-empty, non-negative and sorted".into(),
            ));
        }
        let horizon = *dates.last().expect("non-empty");
        let h = 1.0 / steps_per_year as f64;
        let mut points: Vec<(f64, bool)> = dates.iter().map(|&d| (d, true)).collect();
        let mut k = 0usize;
        while (k as f64) * h < horizon - 1e-12 {
            let t = k as f64 * h;
            if !dates.iter().any(|d| (d - t).abs() <= 1e-12) {
                points.push((t, k.is_multiple_of(2)));
            }
            k += 1;
        }
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut times: Vec<f64> = Vec::with_capacity(points.len());
        let mut coarse: Vec<bool> = Vec::with_capacity(points.len());
        for (t, c) in points {
            if times.last() == Some(&t) {
                let last = coarse.len() - 1;
                coarse[last] |= c;
            } else {
                times.push(t);
                coarse.push(c);
            }
        }
        if times[0] != 0.0 {
            times.insert(0, 0.0);
            coarse.insert(0, true);
        }
        coarse[0] = true;
        let transitions = times
            .windows(2)
            .map(|w| {
                let dt = w[1] - w[0];
                let mut out = [(0.0, 0.0); 3];
                for (j, slot) in out.iter_mut().enumerate() {
                    let (b, s) = (params.b[j], params.sigma[j]);
                    *slot = (
                        (-b * dt).exp(),
                        s * (-(-2.0 * b * dt).exp_m1() / (2.0 * b)).sqrt(),
                    );
                }
                out
            })
            .collect();
        let observe_at = dates
            .iter()
            .map(|d| {
                times
                    .iter()
                    .position(|t| t == d)
                    .expect("dates are grid points")
            })
            .collect();
        Ok(Self {
            times,
            coarse,
            transitions,
            observe_at,
        })
    }
}

fn block_rng(seed: u64, block: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block as u64);
    rng
}

fn step(psi: &mut [f64; 3], tr: &[(f64, f64); 3], z: &[f64; 3], sign: f64) {
    for j in 0..3 {
        psi[j] = tr[j].0 * psi[j] + sign * tr[j].1 * z[j];
    }
}

/// Paths in block `block` and their number of antithetic pairs (or single paths).
fn block_layout(config: &McConfig) -> (usize, usize) {
    let per_draw = if config.antithetic { 2 } else { 1 };
    let draws = config.n_paths.div_ceil(per_draw);
    let draws_per_block = BLOCK_PATHS / per_draw;
    (draws, draws_per_block)
}

/// Running integrals of r and s on the fine and on the coarse grid for one path.
struct PathAccumulator {
    psi: [f64; 3],
    rate_fine: f64,
    spread_fine: f64,
    rate_coarse: f64,
    spread_coarse: f64,
    last_coarse: (f64, f64, f64),
    obs_psi: Vec<[f64; 3]>,
    obs_rate: [Vec<f64>; 2],
    obs_spread: [Vec<f64>; 2],
}

impl PathAccumulator {
    fn new(n_obs: usize) -> Self {
        Self {
            psi: [0.0; 3],
            rate_fine: 0.0,
            spread_fine: 0.0,
            rate_coarse: 0.0,
            spread_coarse: 0.0,
            last_coarse: (0.0, 0.0, 0.0),
            obs_psi: vec![[0.0; 3]; n_obs],
            obs_rate: [vec![0.0; n_obs], vec![0.0; n_obs]],
            obs_spread: [vec![0.0; n_obs], vec![0.0; n_obs]],
        }
    }

    fn reset(&mut self, psi0: [f64; 3], kappa: f64) {
        self.psi = psi0;
        self.rate_fine = 0.0;
        self.spread_fine = 0.0;
        self.rate_coarse = 0.0;
        self.spread_coarse = 0.0;
        self.last_coarse = (0.0, rate(&psi0), spread(&psi0, kappa));
    }

    fn record(&mut self, j: usize) {
        self.obs_psi[j] = self.psi;
        self.obs_rate[0][j] = self.rate_fine;
        self.obs_spread[0][j] = self.spread_fine;
        self.obs_rate[1][j] = self.rate_coarse;
        self.obs_spread[1][j] = self.spread_coarse;
    }

    fn observation<'a>(&'a self, dates: &'a [f64], resolution: usize) -> PathObservation<'a> {
        PathObservation {
            dates,
            psi: &self.obs_psi,
            int_rate: &self.obs_rate[resolution],
            int_spread: &self.obs_spread[resolution],
        }
    }
}

fn rate(psi: &[f64; 3]) -> f64 {
    psi[0] + psi[1] * psi[1]
}

fn spread(psi: &[f64; 3], kappa: f64) -> f64 {
    kappa * psi[0] + psi[2] * psi[2]
}

/// Mergeable mean/variance accumulator (fine estimate) plus the summed
/// fine − coarse gap, which is exactly zero when the payoff ignores the integrals.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    count: f64,
    mean: f64,
    m2: f64,
    gap_sum: f64,
}

impl Moments {
    fn push(&mut self, fine: f64, coarse: f64) {
        self.count += 1.0;
        let d = fine - self.mean;
        self.mean += d / self.count;
        self.m2 += d * (fine - self.mean);
        self.gap_sum += fine - coarse;
    }

    fn merge(self, other: Moments) -> Moments {
        if other.count == 0.0 {
            return self;
        }
        let count = self.count + other.count;
        let d = other.mean - self.mean;
        Moments {
            count,
            mean: self.mean + d * other.count / count,
            m2: self.m2 + other.m2 + d * d * self.count * other.count / count,
            gap_sum: self.gap_sum + other.gap_sum,
        }
    }
}

/// E^Q[payoff] over paths observed at the sorted `dates`; the payoff handles its
/// own discounting through [`PathObservation::discount`].
pub fn mc_expectation<F>(
    params: &ModelParams,
    dates: &[f64],
    config: &McConfig,
    payoff: F,
) -> Result<McEstimate>
where
    F: Fn(&PathObservation) -> f64 + Sync,
{
    let mut out = mc_expectations(params, dates, config, 1, |obs, values| {
        values[0] = payoff(obs)
    })?;
    Ok(out.remove(0))
}

/// Several expectations from one set of paths: `payoff` fills `n_outputs` values
/// per path.
pub fn mc_expectations<F>(
    params: &ModelParams,
    dates: &[f64],
    config: &McConfig,
    n_outputs: usize,
    payoff: F,
) -> Result<Vec<McEstimate>>
where
    F: Fn(&PathObservation, &mut [f64]) + Sync,
{
    config.validate()?;
    let grid = TimeGrid::new(params, dates, config.steps_per_year)?;
    let (draws, per_block) = block_layout(config);
    let n_blocks = draws.div_ceil(per_block);
    let kappa = params.kappa;

    let blocks: Vec<Vec<Moments>> = (0..n_blocks)
        .into_par_iter()
        .map(|block| {
            let mut rng = block_rng(config.seed, block);
            let in_block = per_block.min(draws - block * per_block);
            let mut paths = [
                PathAccumulator::new(dates.len()),
                PathAccumulator::new(dates.len()),
            ];
            let signs: &[f64] = if config.antithetic {
                &[1.0, -1.0]
            } else {
                &[1.0]
            };
            let mut stats = vec![Moments::default(); n_outputs];
            let mut values = vec![0.0; n_outputs];
            let mut fine = vec![0.0; n_outputs];
            let mut coarse = vec![0.0; n_outputs];
            for _ in 0..in_block {
                for acc in paths.iter_mut() {
                    acc.reset(params.psi0, kappa);
                }
                let mut next_obs = 0;
                while next_obs < dates.len() && grid.observe_at[next_obs] == 0 {
                    for acc in paths.iter_mut() {
                        acc.record(next_obs);
                    }
                    next_obs += 1;
                }
                for i in 1..grid.times.len() {
                    let z: [f64; 3] = [
                        StandardNormal.sample(&mut rng),
                        StandardNormal.sample(&mut rng),
                        StandardNormal.sample(&mut rng),
                    ];
                    let dt = grid.times[i] - grid.times[i - 1];
                    for (acc, &sign) in paths.iter_mut().zip(signs) {
                        let (r0, s0) = (rate(&acc.psi), spread(&acc.psi, kappa));
                        step(&mut acc.psi, &grid.transitions[i - 1], &z, sign);
                        let (r1, s1) = (rate(&acc.psi), spread(&acc.psi, kappa));
                        acc.rate_fine += 0.5 * dt * (r0 + r1);
                        acc.spread_fine += 0.5 * dt * (s0 + s1);
                        if grid.coarse[i] {
                            let (tc, rc, sc) = acc.last_coarse;
                            let dc = grid.times[i] - tc;
                            acc.rate_coarse += 0.5 * dc * (rc + r1);
                            acc.spread_coarse += 0.5 * dc * (sc + s1);
                            acc.last_coarse = (grid.times[i], r1, s1);
                        }
                    }
                    while next_obs < dates.len() && grid.observe_at[next_obs] == i {
                        for acc in paths.iter_mut() {
                            acc.record(next_obs);
                        }
                        next_obs += 1;
                    }
                }
                let used = &paths[..signs.len()];
                let n = used.len() as f64;
                fine.fill(0.0);
                coarse.fill(0.0);
                for acc in used {
                    payoff(&acc.observation(dates, 0), &mut values);
                    fine.iter_mut().zip(&values).for_each(|(f, v)| *f += v / n);
                    payoff(&acc.observation(dates, 1), &mut values);
                    coarse
                        .iter_mut()
                        .zip(&values)
                        .for_each(|(c, v)| *c += v / n);
                }
                for (m, (f, c)) in stats.iter_mut().zip(fine.iter().zip(&coarse)) {
                    m.push(*f, *c);
                }
            }
            stats
        })
        .collect();

    let n_paths = draws * if config.antithetic { 2 } else { 1 };
    (0..n_outputs)
        .map(|j| {
            let total = blocks
                .iter()
                .fold(Moments::default(), |acc, b| acc.merge(b[j]));
            let std_error = if total.count > 1.0 {
                (total.m2 / (total.count - 1.0) / total.count).sqrt()
            } else {
                0.0
            };
            let estimate = McEstimate {
                mean: total.mean,
                std_error,
                n_paths,
                bias_proxy: (total.gap_sum / total.count).abs(),
            };
            if config.bias_check
                && estimate.bias_proxy >= 3.0 * estimate.std_error
                && estimate.bias_proxy > 0.0
            {
                return Err(PricingError::BiasDominates {
                    bias: estimate.bias_proxy,
                    std_error: estimate.std_error,
                });
            }
            Ok(estimate)
        })
        .collect()
}

/// Simulated factor paths on the uniform grid up to `horizon`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathEnsemble {
    pub times: Vec<f64>,
    /// One vector of states per path; antithetic partners are adjacent.
    pub paths: Vec<Vec<[f64; 3]>>,
}

/// Stores every state of every path; meant for small ensembles. Uses the same
/// random-number layout as [`mc_expectation`].
pub fn simulate_paths(
    params: &ModelParams,
    horizon: f64,
    config: &McConfig,
) -> Result<PathEnsemble> {
    config.validate()?;
    let grid = TimeGrid::new(params, &[horizon], config.steps_per_year)?;
    let (draws, per_block) = block_layout(config);
    let n_blocks = draws.div_ceil(per_block);
    let signs: &[f64] = if config.antithetic {
        &[1.0, -1.0]
    } else {
        &[1.0]
    };
    let blocks: Vec<Vec<Vec<[f64; 3]>>> = (0..n_blocks)
        .into_par_iter()
        .map(|block| {
            let mut rng = block_rng(config.seed, block);
            let in_block = per_block.min(draws - block * per_block);
            let mut out = Vec::with_capacity(in_block * signs.len());
            for _ in 0..in_block {
                let mut paths: Vec<Vec<[f64; 3]>> =
                    signs.iter().map(|_| vec![params.psi0]).collect();
                for i in 1..grid.times.len() {
                    let z: [f64; 3] = [
                        StandardNormal.sample(&mut rng),
                        StandardNormal.sample(&mut rng),
                        StandardNormal.sample(&mut rng),
                    ];
                    for (path, &sign) in paths.iter_mut().zip(signs) {
                        let mut psi = *path.last().expect("starts with psi0");
                        step(&mut psi, &grid.transitions[i - 1], &z, sign);
                        path.push(psi);
                    }
                }
                out.extend(paths);
            }
            out
        })
        .collect();
    Ok(PathEnsemble {
        times: grid.times,
        paths: blocks.into_iter().flatten().collect(),
    })
}

/// p(0,T) or p̄(0,T) as E^Q[exp(−∫r)] or E^Q[exp(−∫(r+s))].
pub fn mc_bond(
    params: &ModelParams,
    maturity: f64,
    curve: Curve,
    config: &McConfig,
) -> Result<McEstimate> {
    mc_expectation(params, &[maturity], config, |obs| match curve {
        Curve::Ois => obs.discount(0),
        Curve::Libor => (-obs.int_rate[0] - obs.int_spread[0]).exp(),
    })
}

/// E^{T*}[payoff(Ψ_horizon)] by reweighting Q-paths with p(horizon,T*)/(p(0,T*)·e^{∫r}).
pub fn mc_forward_expectation<F>(
    params: &ModelParams,
    t_star: f64,
    horizon: f64,
    payoff: F,
    config: &McConfig,
) -> Result<McEstimate>
where
    F: Fn(&[f64; 3]) -> f64 + Sync,
{
    crate::error::check_order(horizon, t_star)?;
    let start = coeff_bundle(0.0, t_star, params)?;
    let p0 = (-ois_log_discount(&start, &params.psi0)).exp();
    let end = coeff_bundle(horizon, t_star, params)?;
    mc_expectation(params, &[horizon], config, |obs| {
        let psi = &obs.psi[0];
        let weight = (-ois_log_discount(&end, psi)).exp() / p0 * obs.discount(0);
        weight * payoff(psi)
    })
}

/// Several E^{T*}[payoff] from one set of paths observed at `horizon`.
pub fn mc_forward_expectations<F>(
    params: &ModelParams,
    t_star: f64,
    horizon: f64,
    n_outputs: usize,
    payoff: F,
    config: &McConfig,
) -> Result<Vec<McEstimate>>
where
    F: Fn(&[f64; 3], &mut [f64]) + Sync,
{
    crate::error::check_order(horizon, t_star)?;
    let start = coeff_bundle(0.0, t_star, params)?;
    let p0 = (-ois_log_discount(&start, &params.psi0)).exp();
    let end = coeff_bundle(horizon, t_star, params)?;
    mc_expectations(params, &[horizon], config, n_outputs, |obs, values| {
        let psi = &obs.psi[0];
        let weight = (-ois_log_discount(&end, psi)).exp() / p0 * obs.discount(0);
        payoff(psi, values);
        values.iter_mut().for_each(|v| *v *= weight);
    })
}

/// Discounted payoff of `product` under Q from the initial state.
///
/// Period payments are valued at their fixing date with the closed-form
/// p(T,T+Δ) and p̄(T,T+Δ); swaptions use the closed-form swap value at expiry.
pub fn mc_price(
    params: &ModelParams,
    product: &ProductSpec,
    config: &McConfig,
) -> Result<McEstimate> {
    match product {
        ProductSpec::Bond { maturity, curve } => mc_bond(params, *maturity, *curve, config),
        ProductSpec::Fra(f) => {
            f.validate(0.0)?;
            let period = coeff_bundle(f.fixing, f.fixing + f.delta, params)?;
            let gross = 1.0 + f.delta * f.rate;
            mc_expectation(params, &[f.fixing], config, |obs| {
                let psi = &obs.psi[0];
                let p = (-ois_log_discount(&period, psi)).exp();
                let inv_pbar = libor_log_discount(&period, psi).exp();
                f.notional * obs.discount(0) * p * (inv_pbar - gross)
            })
        }
        ProductSpec::Swap(s) => {
            s.validate(0.0)?;
            let periods = (1..=s.periods)
                .map(|k| coeff_bundle(s.date(k - 1), s.date(k), params))
                .collect::<Result<Vec<_>>>()?;
            let fixings: Vec<f64> = (0..s.periods).map(|k| s.date(k)).collect();
            let gross = 1.0 + s.rate * s.period_length;
            let scale = s.side.sign() * s.notional;
            mc_expectation(params, &fixings, config, |obs| {
                let total: f64 = periods
                    .iter()
                    .enumerate()
                    .map(|(j, c)| {
                        let psi = &obs.psi[j];
                        let p = (-ois_log_discount(c, psi)).exp();
                        obs.discount(j) * p * (libor_log_discount(c, psi).exp() - gross)
                    })
                    .sum();
                scale * total
            })
        }
        ProductSpec::Caplet(c) | ProductSpec::Floorlet(c) => {
            c.validate()?;
            let call = matches!(product, ProductSpec::Caplet(_));
            let period = coeff_bundle(c.fixing, c.fixing + c.delta, params)?;
            let gross = c.gross_strike();
            mc_expectation(params, &[c.fixing], config, |obs| {
                let psi = &obs.psi[0];
                let p = (-ois_log_discount(&period, psi)).exp();
                let diff = libor_log_discount(&period, psi).exp() - gross;
                let intrinsic = if call {
                    diff.max(0.0)
                } else {
                    (-diff).max(0.0)
                };
                c.notional * obs.discount(0) * p * intrinsic
            })
        }
        ProductSpec::Swaption(s) => {
            if s.swap.side != SwapSide::Payer {
                return Err(PricingError::InvalidInput(
                    "swaptions are priced on payer swaps".into(),
                ));
            }
            let kernel = SwapKernel::new(s.swap.first_reset, &s.swap, params)?;
            mc_expectation(params, &[s.swap.first_reset], config, |obs| {
                obs.discount(0) * kernel.value(&obs.psi[0]).max(0.0)
            })
        }
        ProductSpec::Cap { caplets } => {
            let mut order: Vec<usize> = (0..caplets.len()).collect();
            order.sort_by(|&a, &b| caplets[a].fixing.total_cmp(&caplets[b].fixing));
            let mut legs = Vec::with_capacity(caplets.len());
            for &i in &order {
                let c = &caplets[i];
                c.validate()?;
                legs.push((
                    coeff_bundle(c.fixing, c.fixing + c.delta, params)?,
                    c.gross_strike(),
                    c.notional,
                ));
            }
            let fixings: Vec<f64> = order.iter().map(|&i| caplets[i].fixing).collect();
            mc_expectation(params, &fixings, config, |obs| {
                legs.iter()
                    .enumerate()
                    .map(|(j, (period, gross, notional))| {
                        let psi = &obs.psi[j];
                        let p = (-ois_log_discount(period, psi)).exp();
                        let diff = libor_log_discount(period, psi).exp() - gross;
                        notional * obs.discount(j) * p * diff.max(0.0)
                    })
                    .sum()
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::ois_bond;

    fn base() -> ModelParams {
        ModelParams {
            b: [0.5, 0.3, 0.4],
            sigma: [0.01, 0.02, 0.015],
            kappa: 0.3,
            psi0: [0.01, 0.05, 0.05],
        }
    }

    fn small() -> McConfig {
        McConfig {
            n_paths: 8192,
            steps_per_year: 32,
            seed: 7,
            antithetic: true,
            bias_check: false,
        }
    }

    #[test]
    fn grid_contains_dates_and_coarse_subgrid() {
        let p = base();
        let g = TimeGrid::new(&p, &[0.3, 1.0], 8).unwrap();
        assert!(g.times.contains(&0.3) && g.times.contains(&1.0));
        assert_eq!(g.times.first(), Some(&0.0));
        assert_eq!(g.observe_at.len(), 2);
        assert!(g.coarse[0] && *g.coarse.last().unwrap());
        assert!(!g.coarse[g.times.iter().position(|&t| t == 0.125).unwrap()]);
    }

    #[test]
    fn quiet_factors_follow_deterministic_decay() {
        let p = ModelParams {
            sigma: [1e-14; 3],
            ..base()
        };
        let ens = simulate_paths(
            &p,
            1.0,
            &McConfig {
                n_paths: 1000,
                ..small()
            },
        )
        .unwrap();
        let last = ens.paths[17].last().unwrap();
        for j in 0..3 {
            assert!((last[j] - (-p.b[j]).exp() * p.psi0[j]).abs() < 1e-12);
        }
    }

    #[test]
    fn deterministic_bond_matches_closed_form() {
        let p = ModelParams {
            sigma: [1e-12; 3],
            ..base()
        };
        let cfg = McConfig {
            n_paths: 1000,
            steps_per_year: 512,
            ..small()
        };
        let est = mc_bond(&p, 2.0, Curve::Ois, &cfg).unwrap();
        let exact = ois_bond(&p.initial_state(), 2.0, &p).unwrap().value;
        assert!((est.mean - exact).abs() < 1e-8);
    }

    #[test]
    fn same_seed_same_estimate() {
        let p = base();
        let a = mc_bond(&p, 1.0, Curve::Libor, &small()).unwrap();
        let b = mc_bond(&p, 1.0, Curve::Libor, &small()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.n_paths, 8192);
    }

    #[test]
    fn config_validation() {
        assert!(McConfig {
            n_paths: 10,
            ..small()
        }
        .validate()
        .is_err());
        assert!(McConfig {
            steps_per_year: 100,
            ..small()
        }
        .validate()
        .is_err());
    }
}
