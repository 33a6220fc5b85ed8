//! Semi-closed pricers for caplets, floorlets and payer swaptions.
//!
//! Both payoffs are positive parts of sums of exponentials that are quadratic in
//! the spread factor z. Conditional on the first two factors (x, y) the z-integral
//! is a combination of normal CDFs under an exponentially tilted Gaussian law; the
//! remaining (x, y) integral is done by tensor Gauss–Legendre quadrature with the
//! inner axis split where the exercise region changes.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{PricingError, Result};
use crate::measures::GaussianLaw;
use crate::numerics::{normal_cdf, GaussLegendre};

pub mod caplet;
pub mod swaption;

pub use caplet::{caplet_price, caplet_region, floorlet_price, CapletSpec};
pub use swaption::{
    swaption_case, swaption_price, swaption_region, QuadraticExpPayoff, SwaptionCase,
    SwaptionPricer, SwaptionSpec,
};

const REFINEMENT_TOL: f64 = 1e-7;
/// Absolute floor on the refinement change of an expectation per unit
/// notional; values this small are zero for pricing purposes.
const REFINEMENT_FLOOR: f64 = 1e-15;

/// Outer (x, y) quadrature settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadratureConfig {
    pub n_nodes_per_axis: usize,
    /// Half-width of the integration box in standard deviations.
    pub truncation: f64,
    /// Node doublings allowed while the relative change exceeds 1e-7.
    pub max_refinements: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            n_nodes_per_axis: 128,
            truncation: 8.0,
            max_refinements: 3,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_nodes_per_axis < 16 {
            return Err(PricingError::InvalidInput(format!(
                "n_nodes_per_axis must be at least 16, got {}",
                self.n_nodes_per_axis
            )));
        }
        if !(self.truncation > 0.0) {
            return Err(PricingError::InvalidInput(
                "truncation must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Exercise-region membership at (x, y) and the symmetric z-roots (z̄¹, z̄²) = (−z̄, z̄)
/// of the exercise boundary, when they exist.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionBoundary {
    pub in_region: bool,
    pub roots: Option<(f64, f64)>,
}

/// N(mean, sd²) reweighted by e^{cz²}/E[e^{cZ²}].
#[derive(Debug, Clone, Copy)]
pub(crate) struct TiltedLaw {
    /// E[e^{cZ²}].
    pub scale: f64,
    pub mean: f64,
    pub sd: f64,
}

pub(crate) fn tilt(law: &GaussianLaw, c: f64) -> Result<TiltedLaw> {
    let s2 = 1.0 - 2.0 * c * law.variance;
    if !(s2 > 0.0) {
        return Err(PricingError::MomentExplosion { denominator: s2 });
    }
    Ok(TiltedLaw {
        scale: (c * law.mean * law.mean / s2).exp() / s2.sqrt(),
        mean: law.mean / s2,
        sd: (law.variance / s2).sqrt(),
    })
}

/// P(|Z| > zbar) for Z ~ N(mean, sd²).
pub(crate) fn prob_outside(mean: f64, sd: f64, zbar: f64) -> f64 {
    if sd == 0.0 {
        return if mean.abs() > zbar { 1.0 } else { 0.0 };
    }
    normal_cdf((-zbar - mean) / sd) + normal_cdf((mean - zbar) / sd)
}

/// P(|Z| < zbar) for Z ~ N(mean, sd²).
pub(crate) fn prob_inside(mean: f64, sd: f64, zbar: f64) -> f64 {
    if sd == 0.0 {
        return if mean.abs() < zbar { 1.0 } else { 0.0 };
    }
    normal_cdf((zbar - mean) / sd) - normal_cdf((-zbar - mean) / sd)
}

/// Quadrature nodes carrying the Gaussian density in their weights.
fn law_nodes(law: &GaussianLaw, truncation: f64, rule: &GaussLegendre) -> Vec<(f64, f64)> {
    if law.variance <= 0.0 {
        return vec![(law.mean, 1.0)];
    }
    let sd = law.variance.sqrt();
    rule.mapped(law.mean - truncation * sd, law.mean + truncation * sd)
        .map(|(x, w)| {
            let u = (x - law.mean) / sd;
            (
                x,
                w * (-0.5 * u * u).exp() / (sd * (2.0 * std::f64::consts::PI).sqrt()),
            )
        })
        .collect()
}

/// ∫∫ f(x, y) φ_x φ_y dx dy with `n` Gauss–Legendre nodes per axis (and per x-piece).
///
/// `cuts(y, lo, hi)` lists the x-locations in (lo, hi) where f(·, y) is not smooth.
pub(crate) fn integrate_outer<F, S>(
    x_law: &GaussianLaw,
    y_law: &GaussianLaw,
    truncation: f64,
    n: usize,
    cuts: S,
    f: F,
) -> Result<f64>
where
    F: Fn(f64, f64) -> Result<f64> + Sync,
    S: Fn(f64, f64, f64) -> Vec<f64> + Sync,
{
    let rule = GaussLegendre::new(n);
    let y_nodes = law_nodes(y_law, truncation, &rule);
    let partial: Vec<Result<f64>> = y_nodes
        .par_iter()
        .map(|&(y, wy)| {
            if x_law.variance <= 0.0 {
                return Ok(wy * f(x_law.mean, y)?);
            }
            let sd = x_law.variance.sqrt();
            let (lo, hi) = (x_law.mean - truncation * sd, x_law.mean + truncation * sd);
            let mut inner: Vec<f64> = cuts(y, lo, hi)
                .into_iter()
                .filter(|c| *c > lo && *c < hi)
                .collect();
            inner.sort_by(f64::total_cmp);
            inner.dedup();
            // Each piece is split so that every half touches at most one cut, and
            // that half is integrated in √(distance to the cut): the payoff is
            // smooth in that variable but has a fractional power in x.
            let mut halves: Vec<(f64, f64)> = Vec::with_capacity(2 * inner.len() + 1);
            let mut edges = vec![(lo, false)];
            edges.extend(inner.iter().map(|&c| (c, true)));
            edges.push((hi, false));
            for piece in edges.windows(2) {
                let ((a, cut_a), (b, cut_b)) = (piece[0], piece[1]);
                match (cut_a, cut_b) {
                    (false, false) => halves.push((a, b)),
                    (true, false) => halves.push((a, b)),
                    (false, true) => halves.push((b, a)),
                    (true, true) => {
                        let mid = 0.5 * (a + b);
                        halves.push((a, mid));
                        halves.push((b, mid));
                    }
                }
            }
            let graded = !inner.is_empty();
            let density = |x: f64| {
                let u = (x - x_law.mean) / sd;
                (-0.5 * u * u).exp() / (sd * (2.0 * std::f64::consts::PI).sqrt())
            };
            let mut sum = 0.0;
            for (from, to) in halves {
                if graded && (inner.contains(&from)) {
                    // x = from + (to − from) t², t ∈ [0, 1]
                    let span = to - from;
                    for (t, w) in rule.mapped(0.0, 1.0) {
                        let x = from + span * t * t;
                        sum += w * 2.0 * span.abs() * t * density(x) * f(x, y)?;
                    }
                } else {
                    let (a, b) = if from < to { (from, to) } else { (to, from) };
                    for (x, w) in rule.mapped(a, b) {
                        sum += w * density(x) * f(x, y)?;
                    }
                }
            }
            Ok(wy * sum)
        })
        .collect();
    partial.into_iter().try_fold(0.0, |acc, v| Ok(acc + v?))
}

/// Runs `eval(n)` with doubling n until successive results agree to 1e-7 relative.
pub(crate) fn refine<F: Fn(usize) -> Result<f64>>(quad: &QuadratureConfig, eval: F) -> Result<f64> {
    quad.validate()?;
    let mut n = quad.n_nodes_per_axis;
    let mut prev = eval(n)?;
    for _ in 0..quad.max_refinements {
        n *= 2;
        let next = eval(n)?;
        if (next - prev).abs() <= REFINEMENT_TOL * next.abs() + REFINEMENT_FLOOR {
            return Ok(next);
        }
        prev = next;
    }
    if quad.max_refinements == 0 {
        return Ok(prev);
    }
    Err(PricingError::QuadratureFailure(format!(
        "outer quadrature still changing by more than {REFINEMENT_TOL:e} at {n} nodes per axis"
    )))
}
