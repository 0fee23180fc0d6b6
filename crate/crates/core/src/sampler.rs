//! Hit-and-run sampling of the Gaussian measure restricted to a convex body,
//! with per-coordinate marginal statistics and moment diagnostics.
//!
//! Each step draws a uniform direction in the unfixed subspace, intersects
//! the line through the current point with the body to get a chord, and
//! draws the next point exactly from the one-dimensional Gaussian restricted
//! to that chord (inverse-cdf; no step-size parameter, no rejection). The
//! restriction of the standard Gaussian to the line `x + t·d` with `‖d‖ = 1`
//! is `t ~ N(−⟨x,d⟩, 1)`, so the chord draw is a truncated normal.
//!
//! Budgets are desk-scale heuristics, not mixing-time bounds: the defaults
//! burn in for `10n` steps and keep every `n`-th state afterwards, and the
//! confidence half-widths treat thinned samples as independent — an
//! approximation, which is why downstream checks always allow `3·half_width`
//! slack.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::gaussian::{gaussian_cdf, gaussian_quantile, MeasureEstimate, RandomSource, CONFIDENCE_Z};
use crate::geometry::StripPolytope;
use crate::lp::{self, LinearProgram, SimplexOutcome};
use crate::vecmath::dot;

/// Chords narrower than this count as degenerate (the chain stays put).
const CHORD_TOL: f64 = 1e-12;

/// Consecutive degenerate chords tolerated before giving up.
const MAX_DEGENERATE: usize = 100;

/// Minimum sample count for marginal statistics.
pub const MIN_MARGINAL_SAMPLES: usize = 30;

/// Chain length controls.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplerBudget {
    /// Steps discarded before any sample is kept.
    pub burn_in: usize,
    /// Steps between kept samples.
    pub thinning: usize,
    /// Number of kept samples.
    pub samples: usize,
}

impl SamplerBudget {
    /// Desk-scale defaults for dimension `n`: burn-in `10n`, thinning `n`,
    /// 2000 samples.
    pub fn for_dim(n: usize) -> SamplerBudget {
        SamplerBudget {
            burn_in: 10 * n.max(1),
            thinning: n.max(1),
            samples: 2000,
        }
    }

    /// Doubled burn-in and sample count — the escalation used when coordinate
    /// selection fails on the first attempt.
    pub fn doubled(&self) -> SamplerBudget {
        SamplerBudget {
            burn_in: 2 * self.burn_in,
            thinning: self.thinning,
            samples: 2 * self.samples,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.burn_in == 0 || self.thinning == 0 || self.samples == 0 {
            return Err(Error::InvalidConfig(
                "sampler budget fields must all be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Per-coordinate sample means and variances from a chain run.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginalStats {
    /// Sample mean per coordinate.
    pub mean: Vec<f64>,
    /// Sample variance (about the mean, `N−1` divisor) per coordinate.
    pub variance: Vec<f64>,
    pub sample_count: usize,
    /// 95% half-width for each mean, `1.96·s_i/√N`.
    pub half_width: Vec<f64>,
}

/// Deterministic feasible point for starting a chain: the origin with fixed
/// coordinates substituted when that is feasible, otherwise the point of
/// minimum L∞ norm found by a small LP (deterministic, and interior enough
/// for hit-and-run, which only needs positive-length chords).
pub fn feasible_start(body: &StripPolytope) -> Result<Vec<f64>> {
    let mut origin = vec![0.0; body.dim()];
    for (&i, &value) in body.fixed() {
        origin[i] = value;
    }
    if body.membership(&origin)? {
        return Ok(origin);
    }
    // Variables: the active coordinates, then the norm bound t ≥ 0.
    // Maximize −t subject to the body rows and ±x_i ≤ t.
    let active = body.unfixed_indices();
    let d = active.len();
    let mut rows: Vec<(Vec<f64>, f64)> = lp::body_rows(body, &active, true)
        .into_iter()
        .map(|(mut coeffs, rhs)| {
            coeffs.push(0.0);
            (coeffs, rhs)
        })
        .collect();
    for j in 0..d {
        for sign in [1.0, -1.0] {
            let mut coeffs = vec![0.0; d + 1];
            coeffs[j] = sign;
            coeffs[d] = -1.0;
            rows.push((coeffs, 0.0));
        }
    }
    let mut objective = vec![0.0; d + 1];
    objective[d] = -1.0;
    let mut lower = vec![None; d];
    lower.push(Some(0.0));
    let program = LinearProgram {
        objective,
        lower,
        rows,
    };
    match lp::simplex(&program)? {
        SimplexOutcome::Optimal { point } => {
            let mut start = origin;
            for (j, &i) in active.iter().enumerate() {
                start[i] = point[j];
            }
            if body.membership(&start)? {
                Ok(start)
            } else {
                Err(Error::InfeasibleStart)
            }
        }
        SimplexOutcome::Infeasible => Err(Error::InfeasibleStart),
        // Maximizing −t with t ≥ 0 is bounded; reaching here means the
        // tableau lost the plot numerically.
        SimplexOutcome::Unbounded => Err(Error::LpUnbounded),
    }
}

/// Chord of the body along `x + t·direction`: the tightest `[t_lo, t_hi]`
/// over all constraints, with infinite ends where nothing cuts.
fn chord(body: &StripPolytope, x: &[f64], direction: &[f64]) -> (f64, f64) {
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    let mut clip = |value: f64, slope: f64, lower: f64, upper: f64| {
        // lower ≤ value + t·slope ≤ upper
        if slope.abs() <= CHORD_TOL {
            return;
        }
        let a = (lower - value) / slope;
        let b = (upper - value) / slope;
        let (a, b) = if slope > 0.0 { (a, b) } else { (b, a) };
        lo = lo.max(a);
        hi = hi.min(b);
    };
    for strip in body.strips() {
        clip(
            dot(&strip.normal, x),
            dot(&strip.normal, direction),
            -strip.bound,
            strip.bound,
        );
    }
    for half in body.halfspaces() {
        clip(
            dot(&half.normal, x),
            dot(&half.normal, direction),
            half.offset,
            f64::INFINITY,
        );
    }
    for i in 0..body.dim() {
        if let Some((lower, upper)) = body.interval(i) {
            clip(x[i], direction[i], lower, upper);
        }
    }
    (lo, hi)
}

/// Draw from the standard normal truncated to `[a, b]` by cdf inversion.
///
/// When the window sits in the upper tail, reflect and work in the lower
/// tail, where the cdf keeps relative precision. A window so extreme that
/// its probability underflows returns the endpoint nearest the mean.
fn truncated_standard_normal(a: f64, b: f64, u: f64) -> f64 {
    if a + b > 0.0 {
        return -truncated_standard_normal(-b, -a, u);
    }
    let cdf_a = gaussian_cdf(a);
    let cdf_b = gaussian_cdf(b);
    let mass = cdf_b - cdf_a;
    if mass <= 1e-300 {
        // Nearest feasible point to the bulk of the mass.
        return if b.is_finite() { b } else { a };
    }
    let p = (cdf_a + u * mass).clamp(f64::MIN_POSITIVE, 1.0 - 1e-16);
    let draw = gaussian_quantile(p).expect("clamped probability is interior");
    draw.clamp(a, b)
}

/// Runs one hit-and-run chain and returns the post-burn-in, thinned samples.
///
/// The chain is a pure function of `(body, budget, start, source)`. Fixed
/// coordinates never move (directions live in the unfixed subspace). A body
/// whose interior has collapsed shows up as [`Error::DegenerateChord`] after
/// [`MAX_DEGENERATE`] consecutive zero-length chords.
pub fn hit_and_run_chain(
    body: &StripPolytope,
    budget: &SamplerBudget,
    start: &[f64],
    source: &RandomSource,
) -> Result<Vec<Vec<f64>>> {
    budget.validate()?;
    if !body.membership(start)? {
        return Err(Error::InfeasibleStart);
    }
    let unfixed = body.unfixed_indices();
    if unfixed.is_empty() {
        return Err(Error::DegenerateChord);
    }
    let mut rng = source.rng();
    let mut x = start.to_vec();
    let mut out = Vec::with_capacity(budget.samples);
    let mut degenerate_run = 0usize;
    let total = budget.burn_in + budget.thinning * budget.samples;
    for step in 0..total {
        let direction = random_direction(&unfixed, body.dim(), &mut rng);
        let (t_lo, t_hi) = chord(body, &x, &direction);
        if t_hi - t_lo <= CHORD_TOL {
            degenerate_run += 1;
            if degenerate_run >= MAX_DEGENERATE {
                return Err(Error::DegenerateChord);
            }
        } else {
            degenerate_run = 0;
            let mu = -dot(&x, &direction);
            let u: f64 = rng.random();
            let t = mu + truncated_standard_normal(t_lo - mu, t_hi - mu, u);
            let t = t.clamp(t_lo.max(-1e12), t_hi.min(1e12));
            for (i, value) in x.iter_mut().enumerate() {
                *value += t * direction[i];
            }
        }
        if step >= budget.burn_in && (step - budget.burn_in + 1) % budget.thinning == 0 {
            out.push(x.clone());
        }
    }
    Ok(out)
}

/// Uniform random unit direction supported on the unfixed coordinates.
fn random_direction(unfixed: &[usize], dim: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let raw: Vec<f64> = (0..unfixed.len()).map(|_| rng.sample(StandardNormal)).collect();
        let norm = dot(&raw, &raw).sqrt();
        if norm > 1e-12 {
            let mut direction = vec![0.0; dim];
            for (&i, value) in unfixed.iter().zip(&raw) {
                direction[i] = value / norm;
            }
            return direction;
        }
    }
}

/// Per-coordinate empirical means and variances of a sample list.
pub fn marginal_stats(samples: &[Vec<f64>]) -> Result<MarginalStats> {
    if samples.len() < MIN_MARGINAL_SAMPLES {
        return Err(Error::TooFewSamples {
            got: samples.len(),
            min: MIN_MARGINAL_SAMPLES,
        });
    }
    let dim = samples[0].len();
    if let Some(odd) = samples.iter().find(|s| s.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: odd.len(),
        });
    }
    let count = samples.len() as f64;
    let mut mean = vec![0.0; dim];
    for sample in samples {
        for (m, value) in mean.iter_mut().zip(sample) {
            *m += value;
        }
    }
    for m in &mut mean {
        *m /= count;
    }
    let mut variance = vec![0.0; dim];
    for sample in samples {
        for ((v, value), m) in variance.iter_mut().zip(sample).zip(&mean) {
            *v += (value - m) * (value - m);
        }
    }
    for v in &mut variance {
        *v /= count - 1.0;
    }
    let half_width = variance
        .iter()
        .map(|v| CONFIDENCE_Z * (v / count).sqrt())
        .collect();
    Ok(MarginalStats {
        mean,
        variance,
        sample_count: samples.len(),
        half_width,
    })
}

/// Outcome of the restricted-measure moment bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentReport {
    /// ‖mean‖₂ and its ceiling `4·√(ln(2/γ̂))`.
    pub mean_norm: f64,
    pub mean_norm_bound: f64,
    pub mean_ok: bool,
    /// `Σ(v_i + u_i²)` and its floor `n − 6√n·√(2·ln(4/γ̂))`.
    pub second_moment: f64,
    pub second_moment_bound: f64,
    pub second_ok: bool,
    /// `3·√(Σ half_width_i²)`, the statistical slack applied to both bounds.
    pub tolerance: f64,
}

/// Checks the two moment bounds that the restricted Gaussian measure of any
/// convex body must satisfy: the mean cannot drift farther than
/// `4√(ln(2/γ))` from the origin, and the total second moment cannot fall
/// more than `6√n·√(2 ln(4/γ))` below `n`. Both are tested with `3·SE` slack
/// from the marginal half-widths; the measure estimate enters only through
/// the slowly-varying logarithms and its own noise is ignored.
pub fn moment_diagnostics(stats: &MarginalStats, measure: &MeasureEstimate) -> Result<MomentReport> {
    if !(measure.estimate > 0.0) {
        return Err(Error::MeasureVanished {
            hits: 0,
            samples: measure.sample_count,
        });
    }
    let n = stats.mean.len() as f64;
    let gamma = measure.estimate.min(1.0);
    let mean_norm = dot(&stats.mean, &stats.mean).sqrt();
    let mean_norm_bound = 4.0 * (2.0 / gamma).ln().sqrt();
    let second_moment: f64 = stats
        .variance
        .iter()
        .zip(&stats.mean)
        .map(|(v, u)| v + u * u)
        .sum();
    let second_moment_bound = n - 6.0 * n.sqrt() * (2.0 * (4.0 / gamma).ln()).sqrt();
    let tolerance = 3.0 * dot(&stats.half_width, &stats.half_width).sqrt();
    Ok(MomentReport {
        mean_norm,
        mean_norm_bound,
        mean_ok: mean_norm <= mean_norm_bound + tolerance,
        second_moment,
        second_moment_bound,
        second_ok: second_moment >= second_moment_bound - tolerance,
        tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget_defaults_and_doubling() {
        let budget = SamplerBudget::for_dim(16);
        assert_eq!(budget.burn_in, 160);
        assert_eq!(budget.thinning, 16);
        assert_eq!(budget.samples, 2000);
        let doubled = budget.doubled();
        assert_eq!(doubled.burn_in, 320);
        assert_eq!(doubled.thinning, 16);
        assert_eq!(doubled.samples, 4000);
        assert!(SamplerBudget {
            burn_in: 0,
            thinning: 1,
            samples: 1
        }
        .validate()
        .is_err());
    }

    #[test]
    fn start_is_origin_when_feasible() {
        let body = StripPolytope::cube(3).unwrap();
        assert_eq!(feasible_start(&body).unwrap(), vec![0.0; 3]);
    }

    #[test]
    fn start_respects_halfspaces_and_fixed_values() {
        let body = StripPolytope::new(3)
            .unwrap()
            .with_halfspace(vec![1.0, 0.0, 0.0], 2.0)
            .unwrap();
        let start = feasible_start(&body).unwrap();
        assert!((start[0] - 2.0).abs() < 1e-6);
        assert!(start[1].abs() < 1e-6 && start[2].abs() < 1e-6);

        let pinned = StripPolytope::cube(2).unwrap().restrict(0, 0.75).unwrap();
        assert_eq!(feasible_start(&pinned).unwrap(), vec![0.75, 0.0]);
    }

    #[test]
    fn start_detects_infeasibility() {
        let body = StripPolytope::new(1)
            .unwrap()
            .with_interval(0, -1.0, 0.0)
            .unwrap()
            .with_halfspace(vec![1.0], 0.5)
            .unwrap();
        assert!(matches!(feasible_start(&body), Err(Error::InfeasibleStart)));
    }

    #[test]
    fn chain_is_deterministic() {
        let body = StripPolytope::cube(3).unwrap();
        let budget = SamplerBudget {
            burn_in: 10,
            thinning: 2,
            samples: 40,
        };
        let source = RandomSource::new(4);
        let a = hit_and_run_chain(&body, &budget, &[0.0; 3], &source).unwrap();
        let b = hit_and_run_chain(&body, &budget, &[0.0; 3], &source).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 40);
        for sample in &a {
            assert!(body.membership(sample).unwrap());
        }
    }

    #[test]
    fn restricted_coordinates_stay_put() {
        let body = StripPolytope::cube(3).unwrap().restrict(1, 0.25).unwrap();
        let start = feasible_start(&body).unwrap();
        let budget = SamplerBudget {
            burn_in: 20,
            thinning: 1,
            samples: 50,
        };
        let samples = hit_and_run_chain(&body, &budget, &start, &RandomSource::new(2)).unwrap();
        assert!(samples.iter().all(|s| s[1] == 0.25));
    }

    #[test]
    fn infeasible_start_is_rejected() {
        let body = StripPolytope::cube(2).unwrap();
        assert!(matches!(
            hit_and_run_chain(
                &body,
                &SamplerBudget::for_dim(2),
                &[3.0, 0.0],
                &RandomSource::new(0)
            ),
            Err(Error::InfeasibleStart)
        ));
    }

    #[test]
    fn collapsed_interior_errors() {
        // Zero-bound strips on both axes leave only the origin.
        let body = StripPolytope::new(2)
            .unwrap()
            .with_strip(vec![1.0, 0.0], 0.0)
            .unwrap()
            .with_strip(vec![0.0, 1.0], 0.0)
            .unwrap();
        assert!(matches!(
            hit_and_run_chain(
                &body,
                &SamplerBudget::for_dim(2),
                &[0.0, 0.0],
                &RandomSource::new(0)
            ),
            Err(Error::DegenerateChord)
        ));
    }

    #[test]
    fn unconstrained_chain_matches_standard_normal() {
        let body = StripPolytope::new(4).unwrap();
        let budget = SamplerBudget::for_dim(4);
        let samples =
            hit_and_run_chain(&body, &budget, &[0.0; 4], &RandomSource::new(8)).unwrap();
        let stats = marginal_stats(&samples).unwrap();
        for i in 0..4 {
            assert!(
                stats.mean[i].abs() <= 4.0 * stats.half_width[i],
                "coordinate {i} mean {} exceeds band {}",
                stats.mean[i],
                4.0 * stats.half_width[i]
            );
            assert!((stats.variance[i] - 1.0).abs() < 0.15, "v = {}", stats.variance[i]);
        }
    }

    #[test]
    fn marginal_stats_contract() {
        assert!(matches!(
            marginal_stats(&vec![vec![0.0]; 10]),
            Err(Error::TooFewSamples { got: 10, min: 30 })
        ));
        let constant = vec![vec![1.5, -0.5]; 64];
        let stats = marginal_stats(&constant).unwrap();
        assert_eq!(stats.mean, vec![1.5, -0.5]);
        assert_eq!(stats.variance, vec![0.0, 0.0]);
        assert_eq!(stats.half_width, vec![0.0, 0.0]);
    }

    #[test]
    fn truncated_draws_stay_in_window() {
        for (a, b) in [(-1.0, 2.0), (2.0, 3.0), (-5.0, -4.0), (4.0, f64::INFINITY)] {
            for k in 0..100 {
                let u = (k as f64 + 0.5) / 100.0;
                let t = truncated_standard_normal(a, b, u);
                assert!(t >= a && t <= b, "draw {t} outside [{a}, {b}]");
            }
        }
    }

    #[test]
    fn extreme_window_falls_back_to_endpoint() {
        let t = truncated_standard_normal(40.0, 41.0, 0.5);
        assert!((40.0..=41.0).contains(&t));
    }

    #[test]
    fn moment_diagnostics_on_centered_stats() {
        let samples = vec![vec![0.1, -0.1], vec![-0.1, 0.1]]
            .into_iter()
            .cycle()
            .take(100)
            .collect::<Vec<_>>();
        let stats = marginal_stats(&samples).unwrap();
        let measure = MeasureEstimate {
            estimate: 1.0,
            sample_count: 1000,
            half_width: 0.0,
        };
        let report = moment_diagnostics(&stats, &measure).unwrap();
        // γ = 1: the mean bound is 4√(ln 2) ≈ 3.33, trivially satisfied.
        assert!(report.mean_ok);
        assert!((report.mean_norm_bound - 3.3302).abs() < 1e-3);

        let vanished = MeasureEstimate {
            estimate: 0.0,
            sample_count: 1000,
            half_width: 0.0,
        };
        assert!(matches!(
            moment_diagnostics(&stats, &vanished),
            Err(Error::MeasureVanished { .. })
        ));
    }
}
