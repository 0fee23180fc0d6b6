//! Coordinate-by-coordinate partial coloring for general convex bodies.
//!
//! Unlike the LP route, which needs a symmetric body, this walk only needs
//! the restricted Gaussian on the body to stay well spread. One coordinate
//! at a time it estimates the marginal mean and variance by hit-and-run
//! sampling, picks a coordinate whose conditional distribution is still
//! close to a standard Gaussian (small mean, healthy variance), and pins it
//! to `±α`, choosing the sign that the sampled marginal density favours.
//! Repeating on the restricted body fixes a positive fraction of the
//! coordinates while the body keeps enough Gaussian mass to continue.
//!
//! Two parameter profiles are provided. [`derive_constants`] follows the
//! theory: it finds the largest admissible slack `ε` for the requested
//! level `α`, then derives the step budget and the acceptance thresholds
//! from it. Those constants are astronomically conservative at desk scale
//! (the step count rounds to zero for any reasonable dimension), so
//! [`WalkConfig::practical`] keeps the same `ε`/`τ` bookkeeping but swaps
//! in thresholds loose enough to make progress on real instances.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::gaussian::{
    gaussian_cdf, gaussian_point_in, MeasureEstimate, RandomSource, MIN_MEASURE_SAMPLES,
};
use crate::geometry::{PartialColoring, StripPolytope};
use crate::sampler::{feasible_start, hit_and_run_chain, marginal_stats, MarginalStats, SamplerBudget};

/// Default half-width of the density bins used to choose the sign of a
/// pinned coordinate.
pub const DENSITY_BIN: f64 = 0.1;

/// Multiplier on a marginal's 95% half-width when comparing it against the
/// acceptance thresholds.
const THRESHOLD_SLACK: f64 = 3.0;

/// Parameters steering one run of the coordinate walk.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkConfig {
    /// Level at which coordinates are pinned (`±alpha`).
    pub alpha: f64,
    /// Per-step measure-loss budget; controls `delta_steps` in the
    /// theoretical profile.
    pub eta: f64,
    /// Admissibility slack for `alpha`, found by [`derive_constants`].
    pub epsilon: f64,
    /// Guaranteed lower bound on the measure retained by one pinning step.
    pub tau: f64,
    /// Number of coordinates the walk attempts to pin.
    pub delta_steps: usize,
    /// A coordinate qualifies only if its squared marginal mean stays below
    /// this.
    pub mean_sq_threshold: f64,
    /// A coordinate qualifies only if its marginal variance stays above
    /// this.
    pub variance_threshold: f64,
    /// Half-width of the histogram bins around `±alpha` used for the sign
    /// choice.
    pub density_bin: f64,
    /// Chain budget for the per-step marginal estimates.
    pub budget: SamplerBudget,
    /// Extra attempts (with a doubled budget) after a step fails to find a
    /// qualifying coordinate.
    pub max_coordinate_retries: usize,
}

impl WalkConfig {
    /// Desk-scale profile: same `epsilon`/`tau` bookkeeping as
    /// [`derive_constants`], but with thresholds and step count loose
    /// enough to pin coordinates in practice (`η = 0.01`,
    /// `u² < 0.5`, `v > 0.6`, `⌊n/10⌋` steps).
    pub fn practical(alpha: f64, n: usize) -> Result<WalkConfig> {
        let mut config = derive_constants(alpha, n)?;
        config.eta = 0.01;
        config.mean_sq_threshold = 0.5;
        config.variance_threshold = 0.6;
        config.delta_steps = n / 10;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "pinning level must be positive and finite, got {}",
                self.alpha
            )));
        }
        if !(self.epsilon > 0.0) || self.epsilon >= 1.0 {
            return Err(Error::InvalidConfig(format!(
                "slack must lie in (0, 1), got {}",
                self.epsilon
            )));
        }
        if !(self.tau > 0.0) || self.tau >= 1.0 {
            return Err(Error::InvalidConfig(format!(
                "per-step measure bound must lie in (0, 1), got {}",
                self.tau
            )));
        }
        if !(self.density_bin > 0.0) || !self.density_bin.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "density bin half-width must be positive, got {}",
                self.density_bin
            )));
        }
        if !self.eta.is_finite()
            || self.eta < 0.0
            || !self.mean_sq_threshold.is_finite()
            || !self.variance_threshold.is_finite()
        {
            return Err(Error::InvalidConfig(
                "walk thresholds must be finite".into(),
            ));
        }
        self.budget.validate()
    }
}

/// One pinning step of the walk, for reporting.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkStep {
    pub step: usize,
    /// Coordinate that was pinned.
    pub coordinate: usize,
    /// Sign it was pinned to.
    pub sign: i8,
    /// Sampled marginal mean of the coordinate before pinning.
    pub mean: f64,
    /// Sampled marginal variance of the coordinate before pinning.
    pub variance: f64,
    /// Fraction of chain samples within the bin around `+alpha`.
    pub plus_fraction: f64,
    /// Fraction of chain samples within the bin around `-alpha`.
    pub minus_fraction: f64,
}

/// Theoretical parameter profile for pinning level `alpha` in dimension `n`.
///
/// The level is admissible when some slack `ε ∈ (0, 1)` satisfies both
/// `4ε^{2/3} < α` and `α < (1/6)·√(ln(1/ε) − ln 2π)`. Both constraints
/// relax monotonically as `ε` shrinks, so the feasible slacks form an
/// interval `(0, ε*)`; bisection finds its upper end. From the chosen `ε`:
///
/// * `η = ε²/2000` — per-step measure-loss budget,
/// * `τ = (2π)^{−1/2}·exp(−(2α + 4ε^{2/3})²/2)` — guaranteed per-step
///   retained-measure factor,
/// * `delta_steps = ⌊η·n / (2·ln(1/τ))⌋`,
/// * thresholds `u² < 50η` and `v > 1 − 30√η − 60η`.
///
/// Levels so large that no representable slack fits (numerically: around
/// `α ≳ 4.5`, where the second constraint forces `ε` below the smallest
/// positive float) are rejected with [`Error::AlphaOutOfRange`].
pub fn derive_constants(alpha: f64, n: usize) -> Result<WalkConfig> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::AlphaOutOfRange { alpha });
    }
    let feasible = |eps: f64| -> bool {
        if !(eps > 0.0) || eps >= 1.0 {
            return false;
        }
        if 4.0 * eps.powf(2.0 / 3.0) >= alpha {
            return false;
        }
        // ln(1/ε) as −ln ε: the reciprocal itself overflows for subnormal ε.
        let log_term = -eps.ln() - (2.0 * std::f64::consts::PI).ln();
        log_term > 0.0 && alpha < log_term.sqrt() / 6.0
    };
    // Feasibility is monotone: if it holds at ε it holds at every smaller
    // slack. Bisect down from 1 until either a feasible slack appears or the
    // midpoint leaves the representable range (then no float works).
    let mut lo = 0.0_f64;
    let mut hi = 1.0_f64;
    for _ in 0..1200 {
        let mid = 0.5 * (lo + hi);
        if mid <= 0.0 || mid == hi {
            break;
        }
        if feasible(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if lo <= 0.0 {
        return Err(Error::AlphaOutOfRange { alpha });
    }
    let epsilon = lo;
    let eta = epsilon * epsilon / 2000.0;
    let shift = 2.0 * alpha + 4.0 * epsilon.powf(2.0 / 3.0);
    let tau = (-0.5 * shift * shift).exp() / (2.0 * std::f64::consts::PI).sqrt();
    if !(tau > 0.0) {
        // exp underflow: the retained-measure guarantee is vacuous.
        return Err(Error::AlphaOutOfRange { alpha });
    }
    let delta_steps = (eta * n as f64 / (2.0 * (1.0 / tau).ln())).floor() as usize;
    Ok(WalkConfig {
        alpha,
        eta,
        epsilon,
        tau,
        delta_steps,
        mean_sq_threshold: 50.0 * eta,
        variance_threshold: 1.0 - 30.0 * eta.sqrt() - 60.0 * eta,
        density_bin: DENSITY_BIN,
        budget: SamplerBudget::for_dim(n),
        max_coordinate_retries: 1,
    })
}

/// Fractions of the samples whose coordinate `i` lands within
/// `density_bin` of `+alpha` and of `-alpha`.
fn density_fractions(samples: &[Vec<f64>], i: usize, alpha: f64, bin: f64) -> (f64, f64) {
    let mut plus = 0usize;
    let mut minus = 0usize;
    for x in samples {
        if (x[i] - alpha).abs() <= bin {
            plus += 1;
        }
        if (x[i] + alpha).abs() <= bin {
            minus += 1;
        }
    }
    let total = samples.len() as f64;
    (plus as f64 / total, minus as f64 / total)
}

/// Picks the coordinate to pin next and the sign to pin it to.
///
/// The chosen coordinate is the smallest-index one outside `excluded` whose
/// marginal still looks Gaussian enough: squared mean below
/// `mean_sq_threshold` and variance above `variance_threshold`, each
/// relaxed by three of the marginal's 95% half-widths to keep the decision
/// stable under sampling noise. The sign is `+1` exactly when at least as
/// many samples fall in the bin around `+alpha` as in the bin around
/// `-alpha`.
///
/// Fails with [`Error::NoGoodCoordinate`] when no coordinate qualifies —
/// in particular when every marginal has collapsed (zero variance).
pub fn select_coordinate(
    stats: &MarginalStats,
    samples: &[Vec<f64>],
    config: &WalkConfig,
    excluded: &BTreeSet<usize>,
) -> Result<(usize, i8)> {
    for i in 0..stats.mean.len() {
        if excluded.contains(&i) {
            continue;
        }
        let slack = THRESHOLD_SLACK * stats.half_width[i];
        let mean_ok = stats.mean[i] * stats.mean[i] < config.mean_sq_threshold + slack;
        let variance_ok = stats.variance[i] > config.variance_threshold - slack;
        if mean_ok && variance_ok {
            let (plus, minus) = density_fractions(samples, i, config.alpha, config.density_bin);
            let sign = if plus >= minus { 1 } else { -1 };
            return Ok((i, sign));
        }
    }
    Err(Error::NoGoodCoordinate)
}

/// Runs the coordinate walk and returns the resulting partial coloring.
///
/// See [`walk_with_trace`] for the variant that also reports what happened
/// at each step.
pub fn walk(
    body: &StripPolytope,
    config: &WalkConfig,
    source: &RandomSource,
) -> Result<PartialColoring> {
    walk_with_trace(body, config, source).map(|(coloring, _)| coloring)
}

/// Runs the coordinate walk, also returning a per-step trace.
///
/// Each of the `delta_steps` rounds samples the Gaussian restricted to the
/// current body by hit-and-run, estimates all marginal means and
/// variances, selects a qualifying coordinate and pins it to `±alpha` by
/// restricting the body. When no coordinate qualifies the chain budget is
/// doubled for another `max_coordinate_retries` attempts before the walk
/// gives up with [`Error::WalkStalled`], reporting the coordinates pinned
/// so far. After the last round one more chain supplies the returned
/// point, which lies in the original body (the restrictions only ever
/// shrink it).
///
/// Every step draws its chains from its own substream of `source`, so a
/// run is a pure function of `(body, config, source)`.
pub fn walk_with_trace(
    body: &StripPolytope,
    config: &WalkConfig,
    source: &RandomSource,
) -> Result<(PartialColoring, Vec<WalkStep>)> {
    config.validate()?;
    let mut current = body.clone();
    let mut excluded: BTreeSet<usize> = body.fixed().keys().copied().collect();
    let mut pinned: Vec<(usize, f64)> = Vec::new();
    let mut trace: Vec<WalkStep> = Vec::new();
    for step in 0..config.delta_steps {
        let step_source = source.substream(step as u64);
        let mut budget = config.budget;
        let mut attempt = 0u64;
        let (coordinate, sign, mean, variance, plus, minus) = loop {
            let chain_source = step_source.substream(attempt);
            let start = feasible_start(&current)?;
            let samples = hit_and_run_chain(&current, &budget, &start, &chain_source)?;
            let stats = marginal_stats(&samples)?;
            match select_coordinate(&stats, &samples, config, &excluded) {
                Ok((i, sign)) => {
                    let (plus, minus) =
                        density_fractions(&samples, i, config.alpha, config.density_bin);
                    break (i, sign, stats.mean[i], stats.variance[i], plus, minus);
                }
                Err(Error::NoGoodCoordinate)
                    if attempt < config.max_coordinate_retries as u64 =>
                {
                    budget = budget.doubled();
                    attempt += 1;
                }
                Err(Error::NoGoodCoordinate) => {
                    return Err(Error::WalkStalled {
                        step,
                        target: config.delta_steps,
                        fixed: pinned,
                    });
                }
                Err(other) => return Err(other),
            }
        };
        let value = config.alpha * f64::from(sign);
        current = current.restrict(coordinate, value)?;
        excluded.insert(coordinate);
        pinned.push((coordinate, value));
        trace.push(WalkStep {
            step,
            coordinate,
            sign,
            mean,
            variance,
            plus_fraction: plus,
            minus_fraction: minus,
        });
    }
    // One more chain on the final restricted body supplies the point.
    let final_budget = SamplerBudget {
        burn_in: config.budget.burn_in,
        thinning: config.budget.thinning,
        samples: 1,
    };
    let start = feasible_start(&current)?;
    let point = hit_and_run_chain(
        &current,
        &final_budget,
        &start,
        &source.substream(config.delta_steps as u64),
    )?
    .pop()
    .expect("chain was asked for one sample");
    debug_assert_eq!(body.membership(&point), Ok(true));
    let coloring = PartialColoring {
        point,
        fixed_set: pinned.iter().map(|&(i, _)| i).collect(),
        level: config.alpha,
    };
    Ok((coloring, trace))
}

/// Monte-Carlo estimate of the Gaussian measure of the slice
/// `{x ∈ K : x_i = a}`, via the thickened slab `{|x_i − a| ≤ h}`:
/// the slab's measure inside the body divided by the slab's own Gaussian
/// mass `Φ(a+h) − Φ(a−h)`. Used to watch the measure decay of the walk's
/// restricted bodies.
pub fn thickened_slice_measure(
    body: &StripPolytope,
    i: usize,
    a: f64,
    h: f64,
    samples: usize,
    source: &RandomSource,
) -> Result<MeasureEstimate> {
    if i >= body.dim() {
        return Err(Error::IndexOutOfRange {
            index: i,
            dim: body.dim(),
        });
    }
    if !(h > 0.0) || !h.is_finite() || !a.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "slab location and half-width must be finite with h > 0, got a = {a}, h = {h}"
        )));
    }
    if samples < MIN_MEASURE_SAMPLES {
        return Err(Error::TooFewSamples {
            got: samples,
            min: MIN_MEASURE_SAMPLES,
        });
    }
    let normalizer = gaussian_cdf(a + h) - gaussian_cdf(a - h);
    if !(normalizer > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "slab at {a} carries no Gaussian mass to normalize by"
        )));
    }
    let mut rng = source.rng();
    let mut hits = 0usize;
    for _ in 0..samples {
        let x = gaussian_point_in(body, &mut rng);
        if (x[i] - a).abs() <= h && body.membership(&x)? {
            hits += 1;
        }
    }
    let raw = MeasureEstimate::from_hits(hits, samples);
    Ok(MeasureEstimate {
        estimate: raw.estimate / normalizer,
        sample_count: samples,
        half_width: raw.half_width / normalizer,
    })
}
