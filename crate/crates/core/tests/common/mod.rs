//! Shared numerical oracles for the integration tests.
//!
//! Everything here is computed independently of the library under test:
//! quadrature instead of `erfc`, exhaustive enumeration instead of LP or
//! Monte Carlo. Slow and simple on purpose.
#![allow(dead_code)]

use discrepancy::coloring::SetSystem;

/// Standard normal density.
pub fn normal_density(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Simpson's rule on `[a, b]` with `2·panels` subintervals.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let n = 2 * panels;
    let h = (b - a) / n as f64;
    let mut total = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        total += w * f(a + k as f64 * h);
    }
    total * h / 3.0
}

/// Φ(x) by quadrature of the density from 0 — no `erf`/`erfc` involved.
pub fn cdf_oracle(x: f64) -> f64 {
    0.5 + simpson(normal_density, 0.0, x, 2000)
}

/// Mean and variance of a standard normal conditioned on `[a, b]`
/// (`b = ∞` allowed), by quadrature.
pub fn truncated_moments_oracle(a: f64, b: f64) -> (f64, f64) {
    let hi = if b.is_finite() { b } else { a.max(0.0) + 40.0 };
    let mass = simpson(normal_density, a, hi, 4000);
    let mean = simpson(|x| x * normal_density(x), a, hi, 4000) / mass;
    let second = simpson(|x| x * x * normal_density(x), a, hi, 4000) / mass;
    (mean, second - mean * mean)
}

/// Minimum discrepancy of a set system over every sign assignment.
/// Exponential in `n`; callers keep `n ≤ 20`.
pub fn min_discrepancy_exhaustive(system: &SetSystem) -> u64 {
    let n = system.n();
    assert!(n <= 20, "exhaustive discrepancy oracle is 2^n");
    let mut best = u64::MAX;
    for mask in 0u64..(1u64 << n) {
        let mut worst = 0u64;
        for set in system.sets() {
            let sum: i64 = set
                .iter()
                .map(|&i| if mask & (1 << i) != 0 { 1i64 } else { -1i64 })
                .sum();
            worst = worst.max(sum.unsigned_abs());
        }
        best = best.min(worst);
        if best == 0 {
            break;
        }
    }
    best
}
