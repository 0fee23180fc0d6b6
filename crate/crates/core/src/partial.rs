//! Partial coloring of a symmetric convex body by linear programming.
//!
//! The algorithm is a one-liner with a good lawyer: draw a standard Gaussian
//! objective Γ, maximize ⟨Γ, y⟩ over the body intersected with the cube
//! [−1,1]ⁿ, and read the optimum off a vertex. At a vertex many constraints
//! are tight, and when the body's Gaussian measure is not too small, a
//! constant fraction of the tight constraints are cube facets — coordinates
//! pinned at exactly ±1. Those become the partial coloring.
//!
//! The theory guarantees a tight fraction δn with probability ≥ 1/2 per draw
//! only for asymptotically tiny δ; at desk scale vertices are empirically far
//! tighter, so the fraction threshold is configuration
//! ([`LpColoringConfig::min_tight_fraction`]) and failures retry with a fresh
//! Gaussian, each retry on its own substream so results are independent of
//! any retry-level parallelism.

use std::collections::BTreeSet;

use log::warn;

use crate::error::{Error, Result};
use crate::gaussian::{sample_gaussian, RandomSource};
use crate::geometry::{PartialColoring, StripPolytope};
use crate::lp;

/// Tuning for [`partial_coloring`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpColoringConfig {
    /// A coordinate counts as tight when `|x_i| ≥ 1 − tight_tol`. An order of
    /// magnitude above the LP feasibility tolerance.
    pub tight_tol: f64,
    /// Minimum fraction of tight coordinates for a draw to count as success.
    pub min_tight_fraction: f64,
    /// Fresh Gaussian draws before giving up.
    pub max_retries: usize,
}

impl Default for LpColoringConfig {
    fn default() -> Self {
        LpColoringConfig {
            tight_tol: 1e-9,
            min_tight_fraction: 0.05,
            max_retries: 20,
        }
    }
}

impl LpColoringConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tight_tol > 0.0 && self.tight_tol.is_finite()) {
            return Err(Error::InvalidConfig(
                "tight_tol must be positive and finite".into(),
            ));
        }
        if !(self.min_tight_fraction > 0.0 && self.min_tight_fraction < 1.0) {
            return Err(Error::InvalidConfig(
                "min_tight_fraction must lie strictly between 0 and 1".into(),
            ));
        }
        if self.max_retries == 0 {
            return Err(Error::InvalidConfig(
                "max_retries must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Supporting point of `y` in the body intersected with the unit cube: the
/// vertex maximizing `⟨x, y⟩`. Deterministic, and invariant under positive
/// rescaling of `y`.
pub fn support_point(body: &StripPolytope, y: &[f64]) -> Result<Vec<f64>> {
    Ok(lp::solve_max(y, &body.intersect_unit_box())?.point)
}

/// Fraction of coordinates with `|x_i| ≥ 1 − tol`. Empty input counts as 0.
pub fn tight_fraction(x: &[f64], tol: f64) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    let tight = x.iter().filter(|&&v| v.abs() >= 1.0 - tol).count();
    tight as f64 / x.len() as f64
}

/// Extracts a partial coloring from a symmetric body: the first Gaussian draw
/// (by retry index) whose supporting vertex pins at least
/// `min_tight_fraction` of the coordinates at ±1.
///
/// Retry `k` draws its objective from `source.substream(k)`, so the result is
/// a pure function of the source. When the strip-only Šidák product drops
/// below `e^{−0.1·n}` the measure hypothesis behind the success guarantee is
/// in doubt; that logs a warning rather than failing, since Šidák is only a
/// lower bound. Exhausting the retries reports the best fraction seen, which
/// distinguishes "δ slightly too ambitious" from "no tight coordinate is
/// possible".
pub fn partial_coloring(
    body: &StripPolytope,
    config: &LpColoringConfig,
    source: &RandomSource,
) -> Result<PartialColoring> {
    config.validate()?;
    if !body.is_symmetric() {
        return Err(Error::AsymmetricBody(
            "partial coloring requires a symmetric body",
        ));
    }
    let n = body.dim();
    let sidak = body.strip_measure_product();
    if sidak < (-0.1 * n as f64).exp() {
        warn!(
            "strip measure product {sidak:.3e} is below e^(-0.1 n) = {:.3e}; \
             the tightness guarantee may not apply",
            (-0.1 * n as f64).exp()
        );
    }
    let mut best_fraction: f64 = 0.0;
    for attempt in 0..config.max_retries {
        let objective = sample_gaussian(n, &source.substream(attempt as u64));
        let point = support_point(body, &objective)?;
        let fraction = tight_fraction(&point, config.tight_tol);
        best_fraction = best_fraction.max(fraction);
        if fraction >= config.min_tight_fraction {
            let fixed_set: BTreeSet<usize> = (0..n)
                .filter(|&i| point[i].abs() >= 1.0 - config.tight_tol)
                .collect();
            return Ok(PartialColoring {
                point,
                fixed_set,
                level: 1.0,
            });
        }
    }
    Err(Error::RetriesExhausted {
        attempts: config.max_retries,
        best_fraction,
    })
}
