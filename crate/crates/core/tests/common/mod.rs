//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use expquad::ModelParams;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn base_params() -> ModelParams {
    ModelParams {
        b: [0.5, 0.3, 0.4],
        sigma: [0.01, 0.02, 0.015],
        kappa: 0.3,
        psi0: [0.01, 0.05, 0.05],
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// b ∈ [0.05, 1], σ ∈ [0.001, 0.05], κ ∈ [−0.5, 1], moderate initial factors.
pub fn draw_params(rng: &mut ChaCha8Rng) -> ModelParams {
    let mut b = [0.0; 3];
    let mut sigma = [0.0; 3];
    for i in 0..3 {
        b[i] = rng.random_range(0.05..1.0);
        sigma[i] = rng.random_range(0.001..0.05);
    }
    ModelParams {
        b,
        sigma,
        kappa: rng.random_range(-0.5..1.0),
        psi0: [
            rng.random_range(-0.01..0.03),
            rng.random_range(0.0..0.15),
            rng.random_range(0.0..0.15),
        ],
    }
}

/// C(τ) from C' = 1 − 2bC − 2σ²C², C(0) = 0, by classical RK4 in τ.
pub fn riccati_rk4(b: f64, sigma: f64, tau: f64, step: f64) -> f64 {
    let n = (tau / step).ceil().max(1.0) as usize;
    let h = tau / n as f64;
    let f = |c: f64| 1.0 - 2.0 * b * c - 2.0 * sigma * sigma * c * c;
    let mut c = 0.0;
    for _ in 0..n {
        let k1 = f(c);
        let k2 = f(c + 0.5 * h * k1);
        let k3 = f(c + 0.5 * h * k2);
        let k4 = f(c + h * k3);
        c += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    c
}

/// Composite Simpson with interval halving until successive values agree to `tol`.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let rule = |n: usize| {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    };
    let mut n = 8;
    let mut prev = rule(n);
    loop {
        n *= 2;
        let next = rule(n);
        if (next - prev).abs() <= tol || n > 1 << 22 {
            return next;
        }
        prev = next;
    }
}

pub fn normal_density(x: f64, mean: f64, var: f64) -> f64 {
    (-(x - mean).powi(2) / (2.0 * var)).exp() / (2.0 * std::f64::consts::PI * var).sqrt()
}

/// Gaussian law (mean, variance) per factor.
pub type Laws = [(f64, f64); 3];

/// Gauss–Legendre nodes and weights on [−1, 1] by Newton iteration on the
/// three-term recurrence.
pub fn legendre_rule(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// Sum of the rule over consecutive breakpoints.
fn panels(f: &dyn Fn(f64) -> f64, mut points: Vec<f64>, rule: &[(f64, f64)]) -> f64 {
    points.sort_by(f64::total_cmp);
    points.dedup();
    points
        .windows(2)
        .map(|w| {
            let (mid, rad) = (0.5 * (w[0] + w[1]), 0.5 * (w[1] - w[0]));
            rad * rule
                .iter()
                .map(|(u, wt)| wt * f(mid + rad * u))
                .sum::<f64>()
        })
        .sum()
}

/// Box ends, eight uniform interior points, the kinks, and points graded
/// geometrically toward each kink.
fn breakpoints(lo: f64, hi: f64, kinks: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = (0..=8).map(|i| lo + (hi - lo) * i as f64 / 8.0).collect();
    let width = (hi - lo) / 8.0;
    for &k in kinks {
        out.push(k);
        for j in 1..=12 {
            let d = width * 0.5f64.powi(j);
            out.extend([k - d, k + d].into_iter().filter(|p| *p > lo && *p < hi));
        }
    }
    out
}

fn bisect(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let sign_lo = f(lo).signum();
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if f(mid).signum() == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// E[(value)⁺] for a payoff that is even and monotone in |z|, with independent
/// Gaussian factors, by nested panel Gauss–Legendre over ±9 s.d. boxes. Kinks
/// in z are found by bisection, kinks in x by scanning the payoff at z = 0.
/// Returns (estimate with 20 nodes per panel, |difference from 12 nodes|).
pub fn positive_part_cubature(value: &dyn Fn(f64, f64, f64) -> f64, laws: &Laws) -> (f64, f64) {
    let coarse = positive_part_cubature_with(value, laws, &legendre_rule(12));
    let fine = positive_part_cubature_with(value, laws, &legendre_rule(20));
    (fine, (fine - coarse).abs())
}

fn positive_part_cubature_with(
    value: &dyn Fn(f64, f64, f64) -> f64,
    laws: &Laws,
    rule: &[(f64, f64)],
) -> f64 {
    let span = |(m, v): (f64, f64)| (m - 9.0 * v.sqrt(), m + 9.0 * v.sqrt());
    let (xl, xh) = span(laws[0]);
    let (yl, yh) = span(laws[1]);
    let (zl, zh) = span(laws[2]);
    let z_far = zl.abs().max(zh.abs());
    let z_points = |x: f64, y: f64| -> Vec<f64> {
        let f = |z: f64| value(x, y, z);
        let mut kinks = Vec::new();
        if f(0.0).signum() != f(z_far).signum() {
            let root = bisect(&f, 0.0, z_far);
            kinks.extend([-root, root].into_iter().filter(|r| *r > zl && *r < zh));
        }
        let mut out: Vec<f64> = (0..=8).map(|i| zl + (zh - zl) * i as f64 / 8.0).collect();
        out.extend(kinks);
        out
    };
    let x_points = |y: f64| -> Vec<f64> {
        let f = |x: f64| value(x, y, 0.0);
        let n = 400;
        let step = (xh - xl) / n as f64;
        let mut kinks = Vec::new();
        for i in 0..n {
            let (a, b) = (xl + i as f64 * step, xl + (i + 1) as f64 * step);
            if f(a).signum() != f(b).signum() {
                kinks.push(bisect(&f, a, b));
            }
        }
        breakpoints(xl, xh, &kinks)
    };
    let outer = |y: f64| {
        let inner_x = |x: f64| {
            let inner_z =
                |z: f64| value(x, y, z).max(0.0) * normal_density(z, laws[2].0, laws[2].1);
            panels(&inner_z, z_points(x, y), rule) * normal_density(x, laws[0].0, laws[0].1)
        };
        panels(&inner_x, x_points(y), rule) * normal_density(y, laws[1].0, laws[1].1)
    };
    panels(&outer, breakpoints(yl, yh, &[]), rule)
}
