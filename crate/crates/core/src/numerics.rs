//! Numerical building blocks: normal CDF, adaptive Gauss–Kronrod, Gauss–Legendre
//! rules, classical RK4 and a bracketing root finder.

use std::f64::consts::SQRT_2;

use libm::erfc;

use crate::error::{PricingError, Result};

/// Standard normal cumulative distribution function.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}

/// Standard normal density.
pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

// Kronrod 15-point abscissae on [-1, 1] (non-negative half) and weights;
// the embedded 7-point Gauss rule uses every other abscissa.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Globally adaptive 15-point Gauss–Kronrod quadrature of `f` on `[a, b]`.
///
/// Stops once the summed error estimate is below `max(abs_tol, rel_tol * |I|)`;
/// fails after 4096 subintervals.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let (value, err) = kronrod15(&f, a, b);
    let mut intervals = vec![(a, b, value, err)];
    loop {
        let total: f64 = intervals.iter().map(|iv| iv.2).sum();
        let total_err: f64 = intervals.iter().map(|iv| iv.3).sum();
        if !total.is_finite() {
            return Err(PricingError::QuadratureFailure(format!(
                "non-finite integrand on [{a}, {b}]"
            )));
        }
        if total_err <= abs_tol.max(rel_tol * total.abs()) {
            return Ok(total);
        }
        if intervals.len() >= 4096 {
            return Err(PricingError::QuadratureFailure(format!(
                "error estimate {total_err:e} after {} subintervals on [{a}, {b}]",
                intervals.len()
            )));
        }
        let (worst, _) = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("non-empty");
        let (lo, hi, _, _) = intervals.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = kronrod15(&f, lo, mid);
        let (v2, e2) = kronrod15(&f, mid, hi);
        intervals.push((lo, mid, v1, e1));
        intervals.push((mid, hi, v2, e2));
    }
}

/// Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes by Newton iteration on the Legendre three-term recurrence.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                let pn = if n == 1 { x } else { p1 };
                let pnm1 = if n == 1 { 1.0 } else { p0 };
                dp = nf * (x * pn - pnm1) / (x * x - 1.0);
                let dx = pn / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            weights[i] = w;
            nodes[n - 1 - i] = x;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (c + h * x, h * w))
    }
}

/// Classical fourth-order Runge–Kutta for `dy/ds = f(s, y)` from `s0` to `s1`
/// in `steps` equal steps.
pub fn rk4<const N: usize, F>(f: F, y0: [f64; N], s0: f64, s1: f64, steps: usize) -> [f64; N]
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let h = (s1 - s0) / steps as f64;
    let mut y = y0;
    for i in 0..steps {
        let s = s0 + i as f64 * h;
        let k1 = f(s, &y);
        let k2 = f(s + 0.5 * h, &axpy(&y, 0.5 * h, &k1));
        let k3 = f(s + 0.5 * h, &axpy(&y, 0.5 * h, &k2));
        let k4 = f(s + h, &axpy(&y, h, &k3));
        for j in 0..N {
            y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
    }
    y
}

fn axpy<const N: usize>(y: &[f64; N], a: f64, k: &[f64; N]) -> [f64; N] {
    let mut out = *y;
    for j in 0..N {
        out[j] += a * k[j];
    }
    out
}

/// Smallest positive root of a function that is negative at zero and changes
/// sign exactly once on `(0, ∞)`: geometric bracket expansion from `1e-6`,
/// then bisection to relative width `rel_tol`.
pub fn positive_root<F: Fn(f64) -> f64>(f: F, rel_tol: f64) -> Result<f64> {
    let f0 = f(0.0);
    if f0 == 0.0 {
        return Ok(0.0);
    }
    let sign0 = f0.signum();
    let mut lo = 0.0;
    let mut hi = 1e-6;
    let mut expansions = 0;
    while f(hi).signum() == sign0 {
        lo = hi;
        hi *= 2.0;
        expansions += 1;
        if expansions > 1100 || !hi.is_finite() {
            return Err(PricingError::RootNotBracketed(format!(
                "no sign change up to z = {lo:e}"
            )));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == sign0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= rel_tol * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// All sign changes of `f` on `[a, b]`, located by scanning `scan` cells and
/// bisecting each bracketing cell to absolute width `tol`.
pub fn sign_changes<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, scan: usize, tol: f64) -> Vec<f64> {
    let mut roots = Vec::new();
    let h = (b - a) / scan as f64;
    let mut x0 = a;
    let mut f0 = f(x0);
    for i in 1..=scan {
        let x1 = if i == scan { b } else { a + i as f64 * h };
        let f1 = f(x1);
        if f0 == 0.0 {
            roots.push(x0);
        } else if f0 * f1 < 0.0 {
            let (mut lo, mut hi, mut flo) = (x0, x1, f0);
            while hi - lo > tol {
                let mid = 0.5 * (lo + hi);
                let fm = f(mid);
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if fm.signum() == flo.signum() {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        x0 = x1;
        f0 = f1;
    }
    roots
}
