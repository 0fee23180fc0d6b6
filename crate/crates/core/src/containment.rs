//! Monte-Carlo check that a body, suitably rescaled, captures random
//! colorings.
//!
//! For a symmetric convex body `K` of non-negligible Gaussian measure, a
//! uniformly random sign vector `Ψ ∈ {−1,1}ⁿ` lands in `cK` with
//! probability at least `1/2` once `c = 2·√(E‖Ψ‖²_K)` — the second moment
//! of the gauge norm over sign vectors calibrates the dilation. This
//! module estimates that moment (and its Gaussian counterpart, which
//! comparison inequalities tie to it within a factor `π/2`), picks the
//! dilation from the estimate plus three standard errors, and measures the
//! containment frequency empirically. Small dimensions admit exhaustive
//! enumeration over all `2ⁿ` sign vectors, used by the tests as an exact
//! oracle.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gaussian::{estimate_gaussian_measure, MeasureEstimate, RandomSource};
use crate::geometry::StripPolytope;

/// Largest dimension the exhaustive sign-vector routines will enumerate
/// (`2¹⁶` vectors).
pub const EXHAUSTIVE_MAX_DIM: usize = 16;

/// Minimum draws for the moment estimators (a standard error needs two).
pub const MIN_MOMENT_SAMPLES: usize = 2;

/// A sampled second moment of the gauge norm, with its standard error.
#[derive(Debug, Clone, PartialEq)]
pub struct NormSqEstimate {
    pub estimate: f64,
    pub sample_count: usize,
    /// Standard error of the mean, `s/√N`.
    pub std_error: f64,
}

/// One uniformly random sign vector in `{−1, 1}ⁿ`.
pub fn sample_sign_vector(n: usize, source: &RandomSource) -> Vec<f64> {
    let mut rng = source.rng();
    sign_vector(n, &mut rng)
}

fn sign_vector(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..n)
        .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
        .collect()
}

fn moment_of(draws: impl Iterator<Item = Result<f64>>, count: usize) -> Result<NormSqEstimate> {
    if count < MIN_MOMENT_SAMPLES {
        return Err(Error::TooFewSamples {
            got: count,
            min: MIN_MOMENT_SAMPLES,
        });
    }
    let mut values = Vec::with_capacity(count);
    for draw in draws {
        values.push(draw?);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    Ok(NormSqEstimate {
        estimate: mean,
        sample_count: values.len(),
        std_error: (var / n).sqrt(),
    })
}

/// Monte-Carlo estimate of `E‖Ψ‖²_K` over uniform sign vectors `Ψ`.
///
/// Requires a symmetric body with at least one norm-defining constraint;
/// a zero-bound constraint that some sign vector projects onto makes the
/// norm infinite and fails the estimate.
pub fn estimate_sign_norm_sq(
    body: &StripPolytope,
    samples: usize,
    source: &RandomSource,
) -> Result<NormSqEstimate> {
    let mut rng = source.rng();
    let draws = (0..samples).map(|_| {
        let psi = sign_vector(body.dim(), &mut rng);
        body.minkowski_norm(&psi).map(|norm| norm * norm)
    });
    moment_of(draws, samples)
}

/// Monte-Carlo estimate of `E‖Γ‖²_K` over standard Gaussian vectors `Γ`.
pub fn estimate_gaussian_norm_sq(
    body: &StripPolytope,
    samples: usize,
    source: &RandomSource,
) -> Result<NormSqEstimate> {
    let mut rng = source.rng();
    let draws = (0..samples).map(|_| {
        let g: Vec<f64> = (0..body.dim())
            .map(|_| rng.sample(rand_distr::StandardNormal))
            .collect();
        body.minkowski_norm(&g).map(|norm| norm * norm)
    });
    moment_of(draws, samples)
}

/// Exact `E‖Ψ‖²_K` by enumerating all `2ⁿ` sign vectors (`n ≤ 16`).
pub fn sign_norm_sq_exhaustive(body: &StripPolytope) -> Result<f64> {
    let mut total = 0.0;
    for_each_sign_vector(body, |norm| {
        total += norm * norm;
        Ok(())
    })?;
    Ok(total / (1u64 << body.dim()) as f64)
}

/// Exact `Pr[Ψ ∈ cK]` by enumerating all `2ⁿ` sign vectors (`n ≤ 16`).
pub fn containment_prob_exhaustive(body: &StripPolytope, c: f64) -> Result<f64> {
    if !c.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "dilation factor must be finite, got {c}"
        )));
    }
    let mut hits = 0u64;
    for_each_sign_vector(body, |norm| {
        if norm <= c {
            hits += 1;
        }
        Ok(())
    })?;
    Ok(hits as f64 / (1u64 << body.dim()) as f64)
}

fn for_each_sign_vector(
    body: &StripPolytope,
    mut visit: impl FnMut(f64) -> Result<()>,
) -> Result<()> {
    let n = body.dim();
    if n > EXHAUSTIVE_MAX_DIM {
        return Err(Error::EnumerationDimension {
            max: EXHAUSTIVE_MAX_DIM,
            got: n,
        });
    }
    let mut psi = vec![0.0; n];
    for mask in 0u64..(1u64 << n) {
        for (i, slot) in psi.iter_mut().enumerate() {
            *slot = if mask & (1 << i) != 0 { 1.0 } else { -1.0 };
        }
        visit(body.minkowski_norm(&psi)?)?;
    }
    Ok(())
}

/// Radius of the largest centered ball inside a symmetric body: the
/// minimum of `b_j/‖v_j‖` over strips and of the interval half-widths.
/// A body with no norm constraints contains every ball.
pub fn inscribed_radius(body: &StripPolytope) -> Result<f64> {
    if !body.is_symmetric() {
        return Err(Error::AsymmetricBody(
            "inscribed radius needs a symmetric body",
        ));
    }
    let mut radius = f64::INFINITY;
    for strip in body.strips() {
        let norm = crate::vecmath::norm(&strip.normal);
        radius = radius.min(strip.bound / norm);
    }
    for i in 0..body.dim() {
        if let Some((_, hi)) = body.interval(i) {
            radius = radius.min(hi);
        }
    }
    Ok(radius)
}

/// Everything the containment check measured.
#[derive(Debug, Clone, PartialEq)]
pub struct ContainmentReport {
    /// Estimated `E‖Ψ‖²_K` over sign vectors.
    pub sign_norm_sq: NormSqEstimate,
    /// Estimated `E‖Γ‖²_K` over Gaussian vectors, for cross-checks.
    pub gaussian_norm_sq: NormSqEstimate,
    /// Radius of the largest centered ball inside the body.
    pub inscribed_radius: f64,
    /// Dilation `c = 2·√(Ê + 3·se)` applied to the body.
    pub scale: f64,
    /// Estimated Gaussian measure of the body itself.
    pub measure: MeasureEstimate,
    /// Estimated `Pr[Ψ ∈ cK]`.
    pub containment: MeasureEstimate,
    /// Whether the containment frequency clears `1/2` within noise.
    pub passes: bool,
}

/// Checks that the dilated body captures at least half of all random
/// colorings.
///
/// The body must be symmetric with Gaussian measure at least `delta`
/// (estimated; failing the gate is [`Error::MeasureBelowThreshold`]).
/// Each estimate draws `samples` points from its own substream of
/// `source`: the measure from substream 0, the sign moment from 1, the
/// Gaussian moment from 2 and the containment frequency from 3. The check
/// passes when the observed containment frequency is at least
/// `1/2 − 3·half_width`.
pub fn check_containment(
    body: &StripPolytope,
    delta: f64,
    samples: usize,
    source: &RandomSource,
) -> Result<ContainmentReport> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "measure threshold must lie in (0, 1], got {delta}"
        )));
    }
    let measure = estimate_gaussian_measure(body, samples, &source.substream(0))?;
    if measure.estimate < delta {
        return Err(Error::MeasureBelowThreshold {
            measured: measure.estimate,
            required: delta,
        });
    }
    let sign_norm_sq = estimate_sign_norm_sq(body, samples, &source.substream(1))?;
    let gaussian_norm_sq = estimate_gaussian_norm_sq(body, samples, &source.substream(2))?;
    let scale = 2.0 * (sign_norm_sq.estimate + 3.0 * sign_norm_sq.std_error).sqrt();
    let mut rng = source.substream(3).rng();
    let mut hits = 0usize;
    for _ in 0..samples {
        let psi = sign_vector(body.dim(), &mut rng);
        if body.minkowski_norm(&psi)? <= scale {
            hits += 1;
        }
    }
    let containment = MeasureEstimate::from_hits(hits, samples);
    let passes = containment.estimate >= 0.5 - 3.0 * containment.half_width;
    Ok(ContainmentReport {
        sign_norm_sq,
        gaussian_norm_sq,
        inscribed_radius: inscribed_radius(body)?,
        scale,
        measure,
        containment,
        passes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::gaussian_quantile;
    use approx::assert_relative_eq;

    #[test]
    fn sign_vectors_are_signs() {
        let source = RandomSource::new(5);
        let psi = sample_sign_vector(16, &source);
        assert_eq!(psi.len(), 16);
        assert!(psi.iter().all(|&v| v == 1.0 || v == -1.0));
        let norm_sq: f64 = psi.iter().map(|v| v * v).sum();
        assert_eq!(norm_sq, 16.0);
        assert_eq!(psi, sample_sign_vector(16, &source));
        assert_ne!(psi, sample_sign_vector(16, &source.substream(1)));
    }

    #[test]
    fn sign_draws_are_balanced() {
        let mut rng = RandomSource::new(17).rng();
        let n = 4000;
        let mean: f64 = (0..n).map(|_| sign_vector(1, &mut rng)[0]).sum::<f64>() / n as f64;
        // 3σ band for a mean of n independent signs.
        assert!(mean.abs() < 3.0 / (n as f64).sqrt(), "mean {mean}");
    }

    #[test]
    fn cube_moment_is_exact() {
        // Every sign vector sits on the cube's boundary: ‖Ψ‖ = 1 with no
        // variance at all, so Monte Carlo and enumeration agree exactly.
        let body = StripPolytope::cube(8).unwrap();
        let est = estimate_sign_norm_sq(&body, 500, &RandomSource::new(1)).unwrap();
        assert_eq!(est.estimate, 1.0);
        assert_eq!(est.std_error, 0.0);
        assert_eq!(sign_norm_sq_exhaustive(&body).unwrap(), 1.0);
    }

    #[test]
    fn unit_strip_cap_keeps_moment_one() {
        // {|x₁ + x₂| ≤ 2} ∩ box: the strip term is 0 or 1, the box term
        // always 1, so the gauge is identically 1 on sign vectors.
        let body = StripPolytope::cube(2)
            .unwrap()
            .with_strip(vec![1.0, 1.0], 2.0)
            .unwrap();
        assert_eq!(sign_norm_sq_exhaustive(&body).unwrap(), 1.0);
        let est = estimate_sign_norm_sq(&body, 200, &RandomSource::new(2)).unwrap();
        assert_eq!(est.estimate, 1.0);
    }

    #[test]
    fn exhaustive_matches_hand_computation() {
        // cube(3) ∩ {|x₁ + x₂| ≤ 1.5}: half the sign vectors have
        // |ψ₁ + ψ₂| = 2, gauge 4/3; the rest have gauge 1.
        let body = StripPolytope::cube(3)
            .unwrap()
            .with_strip(vec![1.0, 1.0, 0.0], 1.5)
            .unwrap();
        let exact = sign_norm_sq_exhaustive(&body).unwrap();
        assert_relative_eq!(exact, 25.0 / 18.0, max_relative = 1e-14);
        let est = estimate_sign_norm_sq(&body, 4000, &RandomSource::new(3)).unwrap();
        assert!(
            (est.estimate - exact).abs() <= 3.0 * est.std_error,
            "estimate {} ± {} vs {exact}",
            est.estimate,
            est.std_error
        );
    }

    #[test]
    fn containment_prob_steps_at_the_gauge_values() {
        let body = StripPolytope::cube(3)
            .unwrap()
            .with_strip(vec![1.0, 1.0, 0.0], 1.5)
            .unwrap();
        assert_eq!(containment_prob_exhaustive(&body, 0.5).unwrap(), 0.0);
        assert_eq!(containment_prob_exhaustive(&body, 1.2).unwrap(), 0.5);
        assert_eq!(containment_prob_exhaustive(&body, 1.5).unwrap(), 1.0);
        assert!(matches!(
            containment_prob_exhaustive(&body, f64::NAN),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn enumeration_dimension_is_capped() {
        let body = StripPolytope::cube(17).unwrap();
        assert!(matches!(
            sign_norm_sq_exhaustive(&body),
            Err(Error::EnumerationDimension { max: 16, got: 17 })
        ));
    }

    #[test]
    fn scaling_divides_the_moment_exactly() {
        // Doubling the body halves the gauge; with power-of-two factors
        // every intermediate rounding commutes, so equality is exact.
        let body = StripPolytope::cube(6)
            .unwrap()
            .with_strip(vec![1.0, -1.0, 2.0, 0.0, 1.0, 0.5], 1.25)
            .unwrap();
        let doubled = body.scale(2.0).unwrap();
        let base = estimate_sign_norm_sq(&body, 300, &RandomSource::new(4)).unwrap();
        let scaled = estimate_sign_norm_sq(&doubled, 300, &RandomSource::new(4)).unwrap();
        assert_eq!(scaled.estimate, base.estimate / 4.0);
        assert_eq!(
            sign_norm_sq_exhaustive(&doubled).unwrap(),
            sign_norm_sq_exhaustive(&body).unwrap() / 4.0
        );
    }

    #[test]
    fn gaussian_moment_of_the_cube() {
        // ‖Γ‖² over the unit cube is max(Γ₁², Γ₂²); E = 1 + 2/π.
        let body = StripPolytope::cube(2).unwrap();
        let est = estimate_gaussian_norm_sq(&body, 40_000, &RandomSource::new(6)).unwrap();
        let exact = 1.0 + 2.0 / std::f64::consts::PI;
        assert!(
            (est.estimate - exact).abs() <= 3.0 * est.std_error,
            "estimate {} ± {} vs {exact}",
            est.estimate,
            est.std_error
        );
    }

    #[test]
    fn gaussian_and_sign_moments_are_comparable() {
        // E‖Ψ‖² ≤ (π/2)·E‖Γ‖² for symmetric bodies (sign vectors are the
        // extreme case of the comparison between the two averages).
        for (seed, body) in [
            (10, StripPolytope::cube(4).unwrap()),
            (
                11,
                StripPolytope::cube(4)
                    .unwrap()
                    .with_strip(vec![1.0, 1.0, 1.0, 1.0], 2.0)
                    .unwrap(),
            ),
            (
                12,
                StripPolytope::cube(5)
                    .unwrap()
                    .with_strip(vec![1.0, -1.0, 0.0, 2.0, 1.0], 1.0)
                    .unwrap(),
            ),
        ] {
            let source = RandomSource::new(seed);
            let sign = estimate_sign_norm_sq(&body, 4000, &source.substream(0)).unwrap();
            let gauss = estimate_gaussian_norm_sq(&body, 4000, &source.substream(1)).unwrap();
            let half_pi = std::f64::consts::FRAC_PI_2;
            let combined =
                (sign.std_error.powi(2) + (half_pi * gauss.std_error).powi(2)).sqrt();
            assert!(
                sign.estimate <= half_pi * gauss.estimate + 3.0 * combined,
                "sign {} vs π/2·gauss {}",
                sign.estimate,
                half_pi * gauss.estimate
            );
        }
    }

    #[test]
    fn moment_estimators_validate_input() {
        let body = StripPolytope::cube(3).unwrap();
        assert!(matches!(
            estimate_sign_norm_sq(&body, 1, &RandomSource::new(1)),
            Err(Error::TooFewSamples { got: 1, min: 2 })
        ));
        let asymmetric = StripPolytope::new(2)
            .unwrap()
            .with_halfspace(vec![1.0, 0.0], 0.0)
            .unwrap();
        assert!(matches!(
            estimate_sign_norm_sq(&asymmetric, 10, &RandomSource::new(1)),
            Err(Error::AsymmetricBody(_))
        ));
        let pinched = StripPolytope::new(2)
            .unwrap()
            .with_strip(vec![1.0, 0.0], 0.0)
            .unwrap();
        assert!(matches!(
            estimate_sign_norm_sq(&pinched, 10, &RandomSource::new(1)),
            Err(Error::InfiniteNorm)
        ));
    }

    #[test]
    fn inscribed_radius_takes_the_tightest_constraint() {
        assert_eq!(
            inscribed_radius(&StripPolytope::cube(2).unwrap()).unwrap(),
            1.0
        );
        let cut = StripPolytope::cube(2)
            .unwrap()
            .with_strip(vec![1.0, 1.0], 1.0)
            .unwrap();
        assert_relative_eq!(
            inscribed_radius(&cut).unwrap(),
            std::f64::consts::FRAC_1_SQRT_2,
            max_relative = 1e-15
        );
        assert_eq!(
            inscribed_radius(&StripPolytope::scaled_cube(3, 0.25).unwrap()).unwrap(),
            0.25
        );
        assert_eq!(
            inscribed_radius(&StripPolytope::new(2).unwrap()).unwrap(),
            f64::INFINITY
        );
        let asymmetric = StripPolytope::new(2)
            .unwrap()
            .with_halfspace(vec![1.0, 0.0], 0.0)
            .unwrap();
        assert!(matches!(
            inscribed_radius(&asymmetric),
            Err(Error::AsymmetricBody(_))
        ));
    }

    /// Cube scaled so its Gaussian measure is 1/2 in dimension `n`.
    fn half_measure_cube(n: usize) -> StripPolytope {
        let per_coordinate = 0.5f64.powf(1.0 / n as f64);
        let t = gaussian_quantile(0.5 * (1.0 + per_coordinate)).unwrap();
        StripPolytope::scaled_cube(n, t).unwrap()
    }

    #[test]
    fn half_measure_cube_is_contained_exactly() {
        // On a cube every sign vector has the same gauge 1/t: the moment
        // estimate has zero variance, the dilation is exactly 2/t, and
        // every draw lands inside — Monte Carlo agrees with enumeration
        // exactly, not just within noise.
        let body = half_measure_cube(8);
        let t = body.interval(0).unwrap().1;
        let report = check_containment(&body, 0.25, 2000, &RandomSource::new(21)).unwrap();
        assert!(report.passes);
        assert_eq!(report.containment.estimate, 1.0);
        // The draws are all the identical value 1/t²; only the summation's
        // own rounding is left in the standard error.
        assert!(report.sign_norm_sq.std_error < 1e-15);
        assert_relative_eq!(report.scale, 2.0 / t, max_relative = 1e-12);
        assert_eq!(
            containment_prob_exhaustive(&body, report.scale).unwrap(),
            report.containment.estimate
        );
        assert!(
            (report.measure.estimate - 0.5).abs() <= 3.0 * report.measure.half_width,
            "measure {} ± {}",
            report.measure.estimate,
            report.measure.half_width
        );
        assert_eq!(report.inscribed_radius, t);
    }

    #[test]
    fn report_is_deterministic() {
        let body = half_measure_cube(8);
        let a = check_containment(&body, 0.25, 500, &RandomSource::new(33)).unwrap();
        let b = check_containment(&body, 0.25, 500, &RandomSource::new(33)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn thin_bodies_fail_the_measure_gate() {
        let body = StripPolytope::scaled_cube(4, 0.1).unwrap();
        match check_containment(&body, 0.5, 2000, &RandomSource::new(8)) {
            Err(Error::MeasureBelowThreshold { measured, required }) => {
                assert!(measured < 0.01, "measured {measured}");
                assert_eq!(required, 0.5);
            }
            other => panic!("expected MeasureBelowThreshold, got {other:?}"),
        }
    }

    #[test]
    fn threshold_must_be_a_probability() {
        let body = StripPolytope::cube(4).unwrap();
        for delta in [0.0, -0.5, 1.5] {
            assert!(matches!(
                check_containment(&body, delta, 500, &RandomSource::new(1)),
                Err(Error::InvalidConfig(_))
            ));
        }
    }
}
