//! Convex bodies as intersections of strips, halfspaces, and coordinate boxes.
//!
//! The central type is [`StripPolytope`]: a body in `ℝⁿ` cut out by
//!
//! * symmetric strips `{x : |v·x| ≤ b}`,
//! * one-sided halfspaces `{x : v·x ≥ c}` (these break central symmetry),
//! * optional per-coordinate interval bounds (the "box"; `[-1,1]` per
//!   coordinate unless stated otherwise), and
//! * a record of coordinates fixed at exact values.
//!
//! Fixed coordinates realize a slice of the body over the remaining
//! coordinates. They are stored on the full-dimensional body rather than
//! physically projecting to a smaller space: strip normals stay unmodified and
//! coordinate indices stay stable across repeated restriction, which is what
//! the coordinate walk needs.
//!
//! A [`PartialColoring`] is the common output format of the coloring
//! algorithms: a point together with the set of coordinates pinned at `±level`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::gaussian::gaussian_cdf;
use crate::vecmath::{dot, norm};

/// Absolute feasibility tolerance for all constraint checks. Double-precision
/// LP vertices land within ~1e-10 of their constraints, so 1e-8 gives two
/// orders of magnitude of headroom without admitting genuinely infeasible
/// points.
pub const MEMBERSHIP_TOL: f64 = 1e-8;

/// Dot products below this magnitude are treated as exactly zero when judging
/// whether a zero-bound constraint makes a gauge norm infinite.
const DEGENERATE_DOT_TOL: f64 = 1e-12;

/// A symmetric slab `{x : |normal·x| ≤ bound}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Strip {
    pub normal: Vec<f64>,
    pub bound: f64,
}

/// A one-sided constraint `{x : normal·x ≥ offset}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Halfspace {
    pub normal: Vec<f64>,
    pub offset: f64,
}

/// Intersection of strips, halfspaces, per-coordinate intervals, and fixed
/// coordinates. Immutable after construction; all operations return new
/// bodies.
#[derive(Debug, Clone, PartialEq)]
pub struct StripPolytope {
    dim: usize,
    strips: Vec<Strip>,
    halfspaces: Vec<Halfspace>,
    /// Per-coordinate interval bounds; `None` leaves the coordinate free.
    intervals: Vec<Option<(f64, f64)>>,
    /// Coordinates pinned at exact values. BTreeMap keeps iteration (and
    /// therefore all downstream output) deterministic.
    fixed: BTreeMap<usize, f64>,
}

fn validate_normal(dim: usize, normal: &[f64]) -> Result<()> {
    if normal.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: normal.len(),
        });
    }
    if normal.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidConstraint("non-finite normal entry".into()));
    }
    if normal.iter().all(|&v| v == 0.0) {
        return Err(Error::InvalidConstraint("all-zero normal".into()));
    }
    Ok(())
}

impl StripPolytope {
    /// The unconstrained body `ℝ^dim`.
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidConstraint("dimension must be positive".into()));
        }
        Ok(StripPolytope {
            dim,
            strips: Vec::new(),
            halfspaces: Vec::new(),
            intervals: vec![None; dim],
            fixed: BTreeMap::new(),
        })
    }

    /// The unit cube `[-1,1]^dim`.
    pub fn cube(dim: usize) -> Result<Self> {
        Ok(Self::new(dim)?.with_unit_box())
    }

    /// The scaled cube `[-t,t]^dim`.
    pub fn scaled_cube(dim: usize, t: f64) -> Result<Self> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::InvalidConstraint(format!(
                "cube half-width must be positive and finite, got {t}"
            )));
        }
        let mut body = Self::new(dim)?;
        for i in 0..dim {
            body.intervals[i] = Some((-t, t));
        }
        Ok(body)
    }

    /// Activates the interval `[-1,1]` on every coordinate.
    pub fn with_unit_box(mut self) -> Self {
        for slot in &mut self.intervals {
            *slot = Some((-1.0, 1.0));
        }
        self
    }

    /// Sets the interval bound of one coordinate.
    pub fn with_interval(mut self, i: usize, lo: f64, hi: f64) -> Result<Self> {
        if i >= self.dim {
            return Err(Error::IndexOutOfRange {
                index: i,
                dim: self.dim,
            });
        }
        if !lo.is_finite() || !hi.is_finite() || lo > hi {
            return Err(Error::InvalidConstraint(format!(
                "invalid interval [{lo}, {hi}] on coordinate {i}"
            )));
        }
        self.intervals[i] = Some((lo, hi));
        Ok(self)
    }

    /// Adds the strip `{x : |normal·x| ≤ bound}`.
    pub fn with_strip(mut self, normal: Vec<f64>, bound: f64) -> Result<Self> {
        validate_normal(self.dim, &normal)?;
        if !(bound >= 0.0) || !bound.is_finite() {
            return Err(Error::InvalidConstraint(format!(
                "strip bound must be nonnegative and finite, got {bound}"
            )));
        }
        self.strips.push(Strip { normal, bound });
        Ok(self)
    }

    /// Adds the halfspace `{x : normal·x ≥ offset}`.
    pub fn with_halfspace(mut self, normal: Vec<f64>, offset: f64) -> Result<Self> {
        validate_normal(self.dim, &normal)?;
        if !offset.is_finite() {
            return Err(Error::InvalidConstraint("non-finite halfspace offset".into()));
        }
        self.halfspaces.push(Halfspace { normal, offset });
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn strips(&self) -> &[Strip] {
        &self.strips
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    /// Interval bound of coordinate `i`, if one is active.
    pub fn interval(&self, i: usize) -> Option<(f64, f64)> {
        self.intervals.get(i).copied().flatten()
    }

    pub fn fixed(&self) -> &BTreeMap<usize, f64> {
        &self.fixed
    }

    pub fn is_fixed(&self, i: usize) -> bool {
        self.fixed.contains_key(&i)
    }

    /// Coordinates not pinned by `restrict`, in increasing order.
    pub fn unfixed_indices(&self) -> Vec<usize> {
        (0..self.dim).filter(|i| !self.fixed.contains_key(i)).collect()
    }

    /// True when the body is centrally symmetric: no halfspaces, no fixed
    /// coordinates, and every active interval of the form `[-a, a]`.
    pub fn is_symmetric(&self) -> bool {
        self.halfspaces.is_empty()
            && self.fixed.is_empty()
            && self
                .intervals
                .iter()
                .flatten()
                .all(|&(lo, hi)| lo == -hi)
    }

    /// True when there is nothing to cut the space with (gauge undefined).
    fn has_norm_constraints(&self) -> bool {
        !self.strips.is_empty() || self.intervals.iter().any(Option::is_some)
    }

    /// Constraint satisfaction within [`MEMBERSHIP_TOL`].
    pub fn membership(&self, x: &[f64]) -> Result<bool> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        for (&i, &value) in &self.fixed {
            if (x[i] - value).abs() > MEMBERSHIP_TOL {
                return Ok(false);
            }
        }
        for (i, slot) in self.intervals.iter().enumerate() {
            if let Some((lo, hi)) = slot {
                if x[i] < lo - MEMBERSHIP_TOL || x[i] > hi + MEMBERSHIP_TOL {
                    return Ok(false);
                }
            }
        }
        for strip in &self.strips {
            if dot(&strip.normal, x).abs() > strip.bound + MEMBERSHIP_TOL {
                return Ok(false);
            }
        }
        for half in &self.halfspaces {
            if dot(&half.normal, x) < half.offset - MEMBERSHIP_TOL {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Gauge (Minkowski) norm `inf{λ > 0 : x ∈ λK}` for symmetric bodies.
    ///
    /// For strip/box bodies this is the exact maximum of `|v·x|/b` over
    /// strips, with each interval `[-a, a]` contributing `|x_i|/a` as a
    /// unit-normal strip.
    pub fn minkowski_norm(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        if !self.halfspaces.is_empty() {
            return Err(Error::AsymmetricBody("halfspace cuts present"));
        }
        if !self.fixed.is_empty() {
            return Err(Error::AsymmetricBody("fixed coordinates present"));
        }
        if self.intervals.iter().flatten().any(|&(lo, hi)| lo != -hi) {
            return Err(Error::AsymmetricBody("asymmetric interval bound"));
        }
        if !self.has_norm_constraints() {
            return Err(Error::EmptyBody);
        }
        let mut best: f64 = 0.0;
        for strip in &self.strips {
            let d = dot(&strip.normal, x).abs();
            if strip.bound == 0.0 {
                if d > DEGENERATE_DOT_TOL {
                    return Err(Error::InfiniteNorm);
                }
                continue;
            }
            best = best.max(d / strip.bound);
        }
        for (i, slot) in self.intervals.iter().enumerate() {
            if let Some((_, hi)) = slot {
                let d = x[i].abs();
                if *hi == 0.0 {
                    if d > DEGENERATE_DOT_TOL {
                        return Err(Error::InfiniteNorm);
                    }
                    continue;
                }
                best = best.max(d / hi);
            }
        }
        Ok(best)
    }

    /// Pins coordinate `i` at `value`, realizing the slice of the body over
    /// the remaining coordinates.
    pub fn restrict(&self, i: usize, value: f64) -> Result<StripPolytope> {
        if i >= self.dim {
            return Err(Error::IndexOutOfRange {
                index: i,
                dim: self.dim,
            });
        }
        if self.fixed.contains_key(&i) {
            return Err(Error::AlreadyFixed { index: i });
        }
        if !value.is_finite() {
            return Err(Error::InvalidConstraint("non-finite fixed value".into()));
        }
        let mut out = self.clone();
        out.fixed.insert(i, value);
        Ok(out)
    }

    /// Product lower bound on the Gaussian measure of a strip-only body:
    /// `∏_j (2Φ(b_j/‖v_j‖) − 1)` over strips, with symmetric interval rows
    /// contributing as unit-normal strips. This is the Šidák inequality
    /// applied strip by strip; it never exceeds the true measure.
    pub fn sidak_lower_bound(&self) -> Result<f64> {
        if !self.halfspaces.is_empty() {
            return Err(Error::AsymmetricBody("halfspace cuts present"));
        }
        if !self.fixed.is_empty() {
            return Err(Error::AsymmetricBody("fixed coordinates present"));
        }
        if self.intervals.iter().flatten().any(|&(lo, hi)| lo != -hi) {
            return Err(Error::AsymmetricBody("asymmetric interval bound"));
        }
        Ok(self.strip_measure_product() * self.box_measure_product())
    }

    /// Šidák factor of the strip rows alone (intervals excluded).
    pub(crate) fn strip_measure_product(&self) -> f64 {
        self.strips
            .iter()
            .map(|s| 2.0 * gaussian_cdf(s.bound / norm(&s.normal)) - 1.0)
            .product()
    }

    fn box_measure_product(&self) -> f64 {
        self.intervals
            .iter()
            .flatten()
            .map(|&(_, hi)| 2.0 * gaussian_cdf(hi) - 1.0)
            .product()
    }

    /// Intersects every coordinate with `[-1,1]`: free coordinates get the
    /// unit interval, existing intervals are clipped. Fixed coordinates are
    /// left untouched.
    pub fn intersect_unit_box(&self) -> StripPolytope {
        let mut out = self.clone();
        for (i, slot) in out.intervals.iter_mut().enumerate() {
            if out.fixed.contains_key(&i) {
                continue;
            }
            *slot = match *slot {
                None => Some((-1.0, 1.0)),
                Some((lo, hi)) => Some((lo.max(-1.0), hi.min(1.0))),
            };
        }
        out
    }

    /// The dilate `tK = {t·x : x ∈ K}` for `t > 0`.
    pub fn scale(&self, t: f64) -> Result<StripPolytope> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::InvalidConstraint(format!(
                "scale factor must be positive and finite, got {t}"
            )));
        }
        let mut out = self.clone();
        for strip in &mut out.strips {
            strip.bound *= t;
        }
        for half in &mut out.halfspaces {
            half.offset *= t;
        }
        for slot in out.intervals.iter_mut().flatten() {
            slot.0 *= t;
            slot.1 *= t;
        }
        for value in out.fixed.values_mut() {
            *value *= t;
        }
        Ok(out)
    }
}

/// A point together with the coordinates pinned at `±level`.
///
/// `level` is 1 in the LP setting (coordinates land on the unit box) and α in
/// the coordinate walk.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialColoring {
    pub point: Vec<f64>,
    pub fixed_set: std::collections::BTreeSet<usize>,
    pub level: f64,
}

impl PartialColoring {
    pub fn fixed_count(&self) -> usize {
        self.fixed_set.len()
    }

    /// Checks that every fixed coordinate sits within `tol` of `±level`.
    pub fn verify(&self, tol: f64) -> bool {
        self.fixed_set
            .iter()
            .all(|&i| (self.point[i].abs() - self.level).abs() <= tol)
    }

    /// Signs of the fixed coordinates, as `(index, ±1)` pairs in index order.
    pub fn fixed_signs(&self) -> Vec<(usize, i8)> {
        self.fixed_set
            .iter()
            .map(|&i| (i, if self.point[i] >= 0.0 { 1 } else { -1 }))
            .collect()
    }
}

// ---------------------------------------------------------------------------
// Body file format
// ---------------------------------------------------------------------------
//
// Line-oriented text. `#` starts a comment; blank lines are skipped.
//
//   dim 3                  header, required first
//   box                    activate [-1,1] on every coordinate
//   interval 0 -0.5 0.5    interval bound on one coordinate (overrides box)
//   strip 1 1 0 2          |x_0 + x_1| <= 2
//   half 1 0 0 2           x_0 >= 2
//   fixed 2 -1             coordinate 2 pinned at -1
//
// Records apply in file order. Numbers parse at full double precision.

/// Parses the line-oriented body format described in the module docs.
pub fn parse_body(text: &str) -> Result<StripPolytope> {
    let mut body: Option<StripPolytope> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let keyword = tokens.next().expect("nonempty line has a token");
        let rest: Vec<&str> = tokens.collect();
        let context = |msg: String| Error::Parse(format!("line {}: {msg}", lineno + 1));
        let parse_f64 = |tok: &str| -> Result<f64> {
            tok.parse::<f64>()
                .map_err(|_| context(format!("expected a number, got {tok:?}")))
        };
        let parse_usize = |tok: &str| -> Result<usize> {
            tok.parse::<usize>()
                .map_err(|_| context(format!("expected an index, got {tok:?}")))
        };

        if keyword == "dim" {
            if body.is_some() {
                return Err(context("duplicate dim header".into()));
            }
            let [d] = rest[..] else {
                return Err(context("dim takes exactly one argument".into()));
            };
            body = Some(StripPolytope::new(parse_usize(d)?)?);
            continue;
        }

        let current = body
            .take()
            .ok_or_else(|| context("file must start with a dim header".into()))?;
        let dim = current.dim();
        body = Some(match keyword {
            "box" => {
                if !rest.is_empty() {
                    return Err(context("box takes no arguments".into()));
                }
                current.with_unit_box()
            }
            "interval" => {
                let [i, lo, hi] = rest[..] else {
                    return Err(context("interval takes: index lo hi".into()));
                };
                current.with_interval(parse_usize(i)?, parse_f64(lo)?, parse_f64(hi)?)?
            }
            "strip" | "half" => {
                if rest.len() != dim + 1 {
                    return Err(context(format!(
                        "{keyword} takes {dim} normal entries and one scalar"
                    )));
                }
                let normal = rest[..dim]
                    .iter()
                    .map(|t| parse_f64(t))
                    .collect::<Result<Vec<f64>>>()?;
                let scalar = parse_f64(rest[dim])?;
                if keyword == "strip" {
                    current.with_strip(normal, scalar)?
                } else {
                    current.with_halfspace(normal, scalar)?
                }
            }
            "fixed" => {
                let [i, v] = rest[..] else {
                    return Err(context("fixed takes: index value".into()));
                };
                current.restrict(parse_usize(i)?, parse_f64(v)?)?
            }
            other => return Err(context(format!("unknown record {other:?}"))),
        });
    }
    body.ok_or_else(|| Error::Parse("empty body file".into()))
}

/// Serializes a body in the format accepted by [`parse_body`].
pub fn format_body(body: &StripPolytope) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "dim {}", body.dim);
    for (i, slot) in body.intervals.iter().enumerate() {
        if let Some((lo, hi)) = slot {
            let _ = writeln!(out, "interval {i} {lo} {hi}");
        }
    }
    for strip in &body.strips {
        let entries: Vec<String> = strip.normal.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "strip {} {}", entries.join(" "), strip.bound);
    }
    for half in &body.halfspaces {
        let entries: Vec<String> = half.normal.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "half {} {}", entries.join(" "), half.offset);
    }
    for (i, value) in &body.fixed {
        let _ = writeln!(out, "fixed {i} {value}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube2() -> StripPolytope {
        StripPolytope::cube(2).unwrap()
    }

    #[test]
    fn membership_cube_boundary_inclusive() {
        assert!(cube2().membership(&[0.5, -1.0]).unwrap());
    }

    #[test]
    fn membership_strip_violated() {
        let body = StripPolytope::new(2)
            .unwrap()
            .with_strip(vec![1.0, 1.0], 1.0)
            .unwrap();
        assert!(!body.membership(&[1.0, 1.0]).unwrap());
    }

    #[test]
    fn membership_halfspace_satisfied() {
        let mut normal = vec![0.0; 8];
        normal[0] = 1.0;
        let body = StripPolytope::new(8)
            .unwrap()
            .with_halfspace(normal, 2.0)
            .unwrap();
        let mut x = vec![0.0; 8];
        x[0] = 2.5;
        assert!(body.membership(&x).unwrap());
    }

    #[test]
    fn membership_dimension_mismatch() {
        assert!(matches!(
            cube2().membership(&[0.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn norm_cube_is_max_abs_coordinate() {
        assert_eq!(cube2().minkowski_norm(&[0.5, -0.25]).unwrap(), 0.5);
    }

    #[test]
    fn norm_of_origin_is_zero() {
        let body = StripPolytope::new(2)
            .unwrap()
            .with_strip(vec![1.0, 1.0], 1.0)
            .unwrap();
        assert_eq!(body.minkowski_norm(&[0.0, 0.0]).unwrap(), 0.0);
    }

    #[test]
    fn norm_takes_max_over_strips() {
        let body = StripPolytope::new(2)
            .unwrap()
            .with_strip(vec![1.0, 0.0], 2.0)
            .unwrap()
            .with_strip(vec![0.0, 1.0], 1.0)
            .unwrap();
        assert_eq!(body.minkowski_norm(&[2.0, 2.0]).unwrap(), 2.0);
    }

    #[test]
    fn norm_rejects_asymmetric_bodies() {
        let body = StripPolytope::new(2)
            .unwrap()
            .with_halfspace(vec![1.0, 0.0], 0.0)
            .unwrap();
        assert!(matches!(
            body.minkowski_norm(&[0.0, 0.0]),
            Err(Error::AsymmetricBody(_))
        ));
    }

    #[test]
    fn norm_zero_bound_strip_is_infinite_off_kernel() {
        let body = StripPolytope::new(2)
            .unwrap()
            .with_strip(vec![1.0, 0.0], 0.0)
            .unwrap();
        assert!(matches!(
            body.minkowski_norm(&[1.0, 0.0]),
            Err(Error::InfiniteNorm)
        ));
        // On the kernel the strip contributes nothing.
        let boxed = body.clone().with_interval(1, -1.0, 1.0).unwrap();
        assert_eq!(boxed.minkowski_norm(&[0.0, 0.5]).unwrap(), 0.5);
    }

    #[test]
    fn norm_scales_linearly() {
        let body = StripPolytope::new(3)
            .unwrap()
            .with_strip(vec![1.0, 2.0, -1.0], 1.5)
            .unwrap()
            .with_unit_box();
        let x = [0.3, -0.7, 0.2];
        let n1 = body.minkowski_norm(&x).unwrap();
        let scaled: Vec<f64> = x.iter().map(|v| v * 2.0).collect();
        let n2 = body.minkowski_norm(&scaled).unwrap();
        assert!((n2 - 2.0 * n1).abs() < 1e-15);
    }

    #[test]
    fn restrict_cube_slice() {
        let body = StripPolytope::cube(3).unwrap().restrict(1, 1.0).unwrap();
        assert!(body.membership(&[0.2, 1.0, -0.9]).unwrap());
        assert!(!body.membership(&[0.2, 0.5, -0.9]).unwrap());
    }

    #[test]
    fn restrict_strip_substitution() {
        let body = StripPolytope::new(2)
            .unwrap()
            .with_strip(vec![1.0, 1.0], 1.0)
            .unwrap()
            .restrict(1, 0.5)
            .unwrap();
        // Effective constraint on x_0 is [-1.5, 0.5].
        assert!(body.membership(&[-1.5, 0.5]).unwrap());
        assert!(body.membership(&[0.5, 0.5]).unwrap());
        assert!(!body.membership(&[0.6, 0.5]).unwrap());
    }

    #[test]
    fn restrict_twice_errors() {
        let body = StripPolytope::cube(3).unwrap().restrict(1, 1.0).unwrap();
        assert!(matches!(
            body.restrict(1, 0.0),
            Err(Error::AlreadyFixed { index: 1 })
        ));
    }

    #[test]
    fn sidak_empty_product_is_one() {
        assert_eq!(StripPolytope::new(5).unwrap().sidak_lower_bound().unwrap(), 1.0);
    }

    #[test]
    fn sidak_rejects_halfspaces() {
        let body = StripPolytope::new(2)
            .unwrap()
            .with_halfspace(vec![1.0, 0.0], 0.0)
            .unwrap();
        assert!(body.sidak_lower_bound().is_err());
    }

    #[test]
    fn symmetric_detection() {
        assert!(cube2().is_symmetric());
        let asym = StripPolytope::new(2)
            .unwrap()
            .with_interval(0, -0.5, 1.0)
            .unwrap();
        assert!(!asym.is_symmetric());
    }

    #[test]
    fn intersect_unit_box_clips_existing_intervals() {
        let body = StripPolytope::new(2)
            .unwrap()
            .with_interval(0, -3.0, 0.5)
            .unwrap()
            .intersect_unit_box();
        assert_eq!(body.interval(0), Some((-1.0, 0.5)));
        assert_eq!(body.interval(1), Some((-1.0, 1.0)));
    }

    #[test]
    fn body_format_round_trip() {
        let body = StripPolytope::new(3)
            .unwrap()
            .with_unit_box()
            .with_interval(2, -0.25, 0.25)
            .unwrap()
            .with_strip(vec![1.0, 1.0, 0.0], 2.0)
            .unwrap()
            .with_halfspace(vec![1.0, 0.0, 0.0], -0.5)
            .unwrap()
            .restrict(0, 1.0)
            .unwrap();
        let text = format_body(&body);
        let parsed = parse_body(&text).unwrap();
        assert_eq!(parsed, body);
    }

    #[test]
    fn parse_rejects_malformed_input() {
        assert!(parse_body("").is_err());
        assert!(parse_body("strip 1 1 2").is_err()); // constraint before header
        assert!(parse_body("dim 2\nstrip 1 2").is_err()); // wrong arity
        assert!(parse_body("dim 2\nstrip 1 x 2").is_err()); // bad number
        assert!(parse_body("dim 2\nwobble 1").is_err()); // unknown record
    }

    #[test]
    fn parse_accepts_comments_and_blanks() {
        let body = parse_body("# cube\ndim 2\n\nbox # unit box\n").unwrap();
        assert_eq!(body, cube2());
    }

    #[test]
    fn partial_coloring_verify() {
        let pc = PartialColoring {
            point: vec![1.0, -1.0 + 1e-12, 0.3],
            fixed_set: [0usize, 1].into_iter().collect(),
            level: 1.0,
        };
        assert!(pc.verify(1e-9));
        assert_eq!(pc.fixed_signs(), vec![(0, 1), (1, -1)]);
    }
}
