//! Deterministic dense-tableau simplex for maximizing linear objectives over
//! strip polytopes, plus a brute-force vertex enumerator used to cross-check
//! it in low dimension.
//!
//! The solver always lands on a basic feasible solution. That is the point of
//! using a vertex method: downstream partial coloring counts coordinates
//! pinned at the box boundary, and only vertices pin many of them. Bland's
//! smallest-index pivot rule makes every solve deterministic — identical
//! inputs replay the identical pivot path — at a modest speed cost over
//! steepest-edge rules, which is the right trade for reproducible colorings.
//!
//! Internally the problem is put in standard form: a coordinate with a box
//! interval is shifted to `x = lo + s`, `s ≥ 0` (its upper bound becomes an
//! explicit row), a free coordinate is split into `x = s⁺ − s⁻`. Phase one
//! adds artificial variables only on rows whose shifted right-hand side is
//! negative; phase two optimizes the real objective with artificial columns
//! banned. With a box on every coordinate the standard form is an affine
//! relabeling of the body, so the returned point is a genuine vertex; with
//! free coordinates it is a vertex of the split-variable lift.

use crate::error::{Error, Result};
use crate::geometry::{StripPolytope, MEMBERSHIP_TOL};
use crate::vecmath::dot;

/// Tableau entries with absolute value at or below this are treated as zero
/// when picking pivots.
pub const PIVOT_TOL: f64 = 1e-10;

/// Phase-one residual above this declares the program infeasible.
const RESIDUAL_TOL: f64 = 1e-7;

/// Feasibility slack for the vertex enumerator.
const ENUM_FEAS_TOL: f64 = 1e-7;

/// Two enumerated vertices closer than this in L∞ are the same vertex.
const ENUM_DEDUP_TOL: f64 = 1e-7;

/// Rank decisions in the enumerator treat pivots at or below this as zero.
const ENUM_RANK_TOL: f64 = 1e-9;

/// Largest active dimension the enumerator accepts.
pub const ENUMERATION_MAX_DIM: usize = 6;

/// Identifies one face-defining inequality of a [`StripPolytope`].
///
/// Strip `j` contributes two rows (`v·x ≤ b` and `v·x ≥ −b`); each interval
/// contributes its two ends. Indices refer to the body's own strip, halfspace,
/// and coordinate numbering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ConstraintId {
    /// `vⱼ·x = bⱼ` for strip `j`.
    StripUpper(usize),
    /// `vⱼ·x = −bⱼ` for strip `j`.
    StripLower(usize),
    /// `normal·x = offset` for halfspace `j`.
    Halfspace(usize),
    /// `xᵢ = loᵢ` for coordinate `i`.
    BoxLower(usize),
    /// `xᵢ = hiᵢ` for coordinate `i`.
    BoxUpper(usize),
}

/// Termination classification of a solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// An optimal vertex returned by [`solve_max`].
///
/// `point` satisfies every constraint within 1e-8 and `value` equals
/// `objective·point`. Infeasible and unbounded programs surface as errors, so
/// a returned solution always carries [`LpStatus::Optimal`]; the field exists
/// so reports can serialize the classification alongside the data.
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub point: Vec<f64>,
    pub value: f64,
    /// Constraints active at `point` (|residual| ≤ 1e-8), in a fixed order:
    /// strips by index (upper before lower), halfspaces, then box ends by
    /// coordinate. At a vertex of a boxed body this has at least
    /// `dim − #fixed` entries.
    pub tight_constraints: Vec<ConstraintId>,
    pub status: LpStatus,
}

// ---------------------------------------------------------------------------
// Internal standard-form solver
// ---------------------------------------------------------------------------

/// Maximize `objective·x` subject to `rows` (`a·x ≤ rhs`) and per-variable
/// lower bounds (`None` = free). Upper bounds, if any, must arrive as rows.
pub(crate) struct LinearProgram {
    pub objective: Vec<f64>,
    pub lower: Vec<Option<f64>>,
    pub rows: Vec<(Vec<f64>, f64)>,
}

pub(crate) enum SimplexOutcome {
    Optimal { point: Vec<f64> },
    Infeasible,
    Unbounded,
}

/// Column span of one original variable in the standard form.
enum VarCols {
    /// `x = lo + s[col]`.
    Shift { col: usize, lo: f64 },
    /// `x = s[plus] − s[minus]`.
    Split { plus: usize, minus: usize },
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    basis: Vec<usize>,
    active: Vec<bool>,
    allowed: Vec<bool>,
    /// Reduced-cost rows: `objs[0]` drives phase one, `objs[1]` phase two.
    /// Both are updated by every pivot so the phase hand-off is free.
    objs: [Vec<f64>; 2],
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, k: usize) {
        let piv = self.rows[r][k];
        for value in &mut self.rows[r] {
            *value /= piv;
        }
        self.rows[r][k] = 1.0;
        self.rhs[r] /= piv;
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r];
        for i in 0..self.rows.len() {
            if i == r || !self.active[i] {
                continue;
            }
            let factor = self.rows[i][k];
            if factor != 0.0 {
                let row = &mut self.rows[i];
                for c in 0..self.ncols {
                    row[c] -= factor * pivot_row[c];
                }
                row[k] = 0.0;
                self.rhs[i] -= factor * pivot_rhs;
            }
        }
        for obj in &mut self.objs {
            let factor = obj[k];
            if factor != 0.0 {
                for c in 0..self.ncols {
                    obj[c] -= factor * pivot_row[c];
                }
                obj[k] = 0.0;
            }
        }
        self.basis[r] = k;
    }

    /// Bland entering rule: smallest-index allowed column with positive
    /// reduced cost.
    fn entering(&self, phase: usize) -> Option<usize> {
        (0..self.ncols).find(|&k| self.allowed[k] && self.objs[phase][k] > PIVOT_TOL)
    }

    /// Bland leaving rule: minimum ratio, ties broken by smallest basic
    /// variable index. `None` means the column is unbounded.
    fn leaving(&self, k: usize) -> Option<usize> {
        let mut best: Option<(f64, usize, usize)> = None;
        for r in 0..self.rows.len() {
            if !self.active[r] || self.rows[r][k] <= PIVOT_TOL {
                continue;
            }
            let ratio = self.rhs[r].max(0.0) / self.rows[r][k];
            let candidate = (ratio, self.basis[r], r);
            best = match best {
                None => Some(candidate),
                Some(current) => {
                    if ratio < current.0 - 1e-12
                        || (ratio <= current.0 + 1e-12 && candidate.1 < current.1)
                    {
                        Some(candidate)
                    } else {
                        Some(current)
                    }
                }
            };
        }
        best.map(|(_, _, r)| r)
    }

    /// Pivots until the phase objective has no improving column. Returns
    /// false on an unbounded column.
    fn run(&mut self, phase: usize, max_iter: usize) -> Result<bool> {
        for _ in 0..max_iter {
            let Some(k) = self.entering(phase) else {
                return Ok(true);
            };
            let Some(r) = self.leaving(k) else {
                return Ok(false);
            };
            self.pivot(r, k);
        }
        Err(Error::LpIterationLimit)
    }
}

pub(crate) fn simplex(lp: &LinearProgram) -> Result<SimplexOutcome> {
    let nx = lp.objective.len();
    debug_assert_eq!(lp.lower.len(), nx);

    // Standard-form column layout: structural columns first.
    let mut var_cols = Vec::with_capacity(nx);
    let mut nv = 0usize;
    for bound in &lp.lower {
        match *bound {
            Some(lo) => {
                var_cols.push(VarCols::Shift { col: nv, lo });
                nv += 1;
            }
            None => {
                var_cols.push(VarCols::Split {
                    plus: nv,
                    minus: nv + 1,
                });
                nv += 2;
            }
        }
    }

    let nrows = lp.rows.len();
    let expand = |coeffs: &[f64], out: &mut [f64]| {
        for (j, var) in var_cols.iter().enumerate() {
            match *var {
                VarCols::Shift { col, .. } => out[col] = coeffs[j],
                VarCols::Split { plus, minus } => {
                    out[plus] = coeffs[j];
                    out[minus] = -coeffs[j];
                }
            }
        }
    };

    // Shift the right-hand sides, then decide per row whether an artificial
    // variable is needed. Columns: structural, slacks, artificials.
    let shift_of = |coeffs: &[f64]| -> f64 {
        var_cols
            .iter()
            .enumerate()
            .map(|(j, var)| match var {
                VarCols::Shift { lo, .. } => coeffs[j] * lo,
                VarCols::Split { .. } => 0.0,
            })
            .sum()
    };
    let shifted: Vec<f64> = lp
        .rows
        .iter()
        .map(|(coeffs, rhs)| rhs - shift_of(coeffs))
        .collect();
    let na = shifted.iter().filter(|&&rhs| rhs < 0.0).count();
    let ncols = nv + nrows + na;

    let mut tableau = Tableau {
        rows: Vec::with_capacity(nrows),
        rhs: Vec::with_capacity(nrows),
        basis: Vec::with_capacity(nrows),
        active: vec![true; nrows],
        allowed: vec![true; ncols],
        objs: [vec![0.0; ncols], vec![0.0; ncols]],
        ncols,
    };

    let mut next_artificial = nv + nrows;
    for (i, (coeffs, _)) in lp.rows.iter().enumerate() {
        let mut row = vec![0.0; ncols];
        expand(coeffs, &mut row);
        let mut rhs = shifted[i];
        if rhs < 0.0 {
            for value in &mut row[..nv] {
                *value = -*value;
            }
            rhs = -rhs;
            row[nv + i] = -1.0;
            row[next_artificial] = 1.0;
            tableau.basis.push(next_artificial);
            next_artificial += 1;
        } else {
            row[nv + i] = 1.0;
            tableau.basis.push(nv + i);
        }
        tableau.rows.push(row);
        tableau.rhs.push(rhs);
    }

    // Phase-one reduced costs, priced out against the artificial basis:
    // maximizing −Σ artificials leaves c̄ₖ = Σ over artificial rows of the
    // tableau entry.
    let art_start = nv + nrows;
    for r in 0..nrows {
        if tableau.basis[r] >= art_start {
            for c in 0..ncols {
                tableau.objs[0][c] += tableau.rows[r][c];
            }
        }
    }
    for obj in &mut tableau.objs[0][art_start..] {
        *obj = 0.0;
    }
    // Phase-two reduced costs: the initial basis carries zero objective, so
    // the raw costs are already priced out.
    expand(&lp.objective, &mut tableau.objs[1]);

    let max_iter = 1000 + 200 * (nrows + ncols);

    if na > 0 {
        if !tableau.run(0, max_iter)? {
            // Phase one maximizes a bounded function; an unbounded column
            // cannot legitimately appear.
            return Err(Error::LpIterationLimit);
        }
        let residual: f64 = (0..nrows)
            .filter(|&r| tableau.active[r] && tableau.basis[r] >= art_start)
            .map(|r| tableau.rhs[r])
            .sum();
        if residual > RESIDUAL_TOL {
            return Ok(SimplexOutcome::Infeasible);
        }
        // Drive leftover zero-level artificials out of the basis so they can
        // never re-enter through a negative entry; rows with no real support
        // are redundant and retire.
        for r in 0..nrows {
            if !tableau.active[r] || tableau.basis[r] < art_start {
                continue;
            }
            let mut best: Option<(usize, f64)> = None;
            for (k, &entry) in tableau.rows[r][..art_start].iter().enumerate() {
                let mag = entry.abs();
                if mag > PIVOT_TOL && best.map_or(true, |(_, m)| mag > m) {
                    best = Some((k, mag));
                }
            }
            match best {
                Some((k, _)) => tableau.pivot(r, k),
                None => tableau.active[r] = false,
            }
        }
        for allowed in &mut tableau.allowed[art_start..] {
            *allowed = false;
        }
    }

    if !tableau.run(1, max_iter)? {
        return Ok(SimplexOutcome::Unbounded);
    }

    let mut standard = vec![0.0; ncols];
    for r in 0..nrows {
        if tableau.active[r] {
            standard[tableau.basis[r]] = tableau.rhs[r];
        }
    }
    let point = var_cols
        .iter()
        .map(|var| match *var {
            VarCols::Shift { col, lo } => lo + standard[col],
            VarCols::Split { plus, minus } => standard[plus] - standard[minus],
        })
        .collect();
    Ok(SimplexOutcome::Optimal { point })
}

// ---------------------------------------------------------------------------
// Public solver over strip polytopes
// ---------------------------------------------------------------------------

/// Restriction of a full-dimensional normal to the active coordinates plus
/// the constant absorbed by fixed ones.
fn restrict_normal(normal: &[f64], active: &[usize], body: &StripPolytope) -> (Vec<f64>, f64) {
    let w = active.iter().map(|&i| normal[i]).collect();
    let f = body.fixed().iter().map(|(&i, &v)| normal[i] * v).sum();
    (w, f)
}

fn fixed_value_conflicts(body: &StripPolytope) -> bool {
    body.fixed().iter().any(|(&i, &v)| {
        body.interval(i)
            .is_some_and(|(lo, hi)| v < lo - MEMBERSHIP_TOL || v > hi + MEMBERSHIP_TOL)
    })
}

/// Inequality rows `a·x ≤ rhs` of the body over its active coordinates.
/// `box_lowers` controls whether interval lower ends appear as rows (the
/// simplex handles them as variable bounds instead; the enumerator and the
/// sampler's start-point program want them explicit).
pub(crate) fn body_rows(
    body: &StripPolytope,
    active: &[usize],
    box_lowers: bool,
) -> Vec<(Vec<f64>, f64)> {
    let mut rows = Vec::new();
    for strip in body.strips() {
        let (w, f) = restrict_normal(&strip.normal, active, body);
        let negated = w.iter().map(|c| -c).collect();
        rows.push((w, strip.bound - f));
        rows.push((negated, strip.bound + f));
    }
    for half in body.halfspaces() {
        let (w, f) = restrict_normal(&half.normal, active, body);
        rows.push((w.iter().map(|c| -c).collect(), -(half.offset - f)));
    }
    for (j, &i) in active.iter().enumerate() {
        if let Some((lo, hi)) = body.interval(i) {
            let mut upper = vec![0.0; active.len()];
            upper[j] = 1.0;
            rows.push((upper, hi));
            if box_lowers {
                let mut lower = vec![0.0; active.len()];
                lower[j] = -1.0;
                rows.push((lower, -lo));
            }
        }
    }
    rows
}

fn embed(body: &StripPolytope, active: &[usize], point: &[f64]) -> Vec<f64> {
    let mut full = vec![0.0; body.dim()];
    for (&i, &v) in body.fixed() {
        full[i] = v;
    }
    for (j, &i) in active.iter().enumerate() {
        full[i] = point[j];
    }
    full
}

/// Constraints active at `x`, residuals measured with [`MEMBERSHIP_TOL`].
fn tight_at(body: &StripPolytope, x: &[f64]) -> Vec<ConstraintId> {
    let mut tight = Vec::new();
    for (j, strip) in body.strips().iter().enumerate() {
        let value = dot(&strip.normal, x);
        if (value - strip.bound).abs() <= MEMBERSHIP_TOL {
            tight.push(ConstraintId::StripUpper(j));
        }
        if (value + strip.bound).abs() <= MEMBERSHIP_TOL {
            tight.push(ConstraintId::StripLower(j));
        }
    }
    for (j, half) in body.halfspaces().iter().enumerate() {
        if (dot(&half.normal, x) - half.offset).abs() <= MEMBERSHIP_TOL {
            tight.push(ConstraintId::Halfspace(j));
        }
    }
    for i in 0..body.dim() {
        if body.is_fixed(i) {
            continue;
        }
        if let Some((lo, hi)) = body.interval(i) {
            if (x[i] - lo).abs() <= MEMBERSHIP_TOL {
                tight.push(ConstraintId::BoxLower(i));
            }
            if (x[i] - hi).abs() <= MEMBERSHIP_TOL {
                tight.push(ConstraintId::BoxUpper(i));
            }
        }
    }
    tight
}

/// Maximizes `objective·x` over the body, returning an optimal vertex.
///
/// Fixed coordinates are substituted out before solving and reappear in the
/// returned point; `value` is the full-dimensional inner product including
/// their contribution. The pivot rule is deterministic, so identical inputs
/// return the identical vertex — including under positive rescaling of the
/// objective. A zero objective returns the phase-one vertex, which is
/// arbitrary but deterministic.
pub fn solve_max(objective: &[f64], body: &StripPolytope) -> Result<LpSolution> {
    if objective.len() != body.dim() {
        return Err(Error::DimensionMismatch {
            expected: body.dim(),
            got: objective.len(),
        });
    }
    if objective.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidConstraint(
            "objective entries must be finite".into(),
        ));
    }
    if fixed_value_conflicts(body) {
        return Err(Error::LpInfeasible);
    }
    let active = body.unfixed_indices();
    let lp = LinearProgram {
        objective: active.iter().map(|&i| objective[i]).collect(),
        lower: active
            .iter()
            .map(|&i| body.interval(i).map(|(lo, _)| lo))
            .collect(),
        rows: body_rows(body, &active, false),
    };
    match simplex(&lp)? {
        SimplexOutcome::Infeasible => Err(Error::LpInfeasible),
        SimplexOutcome::Unbounded => Err(Error::LpUnbounded),
        SimplexOutcome::Optimal { point } => {
            let full = embed(body, &active, &point);
            Ok(LpSolution {
                value: dot(objective, &full),
                tight_constraints: tight_at(body, &full),
                status: LpStatus::Optimal,
                point: full,
            })
        }
    }
}

// ---------------------------------------------------------------------------
// Vertex enumeration oracle
// ---------------------------------------------------------------------------

/// Every vertex of a bounded body with at most [`ENUMERATION_MAX_DIM`] active
/// coordinates, lexicographically sorted. Exhaustive: solves each d-subset of
/// face equations and keeps the feasible, distinct solutions. Test oracle —
/// cost grows as (rows choose d).
///
/// Unbounded bodies (recession direction exists) report
/// [`Error::UnboundedBody`]. A body that is simultaneously empty and missing
/// constraint directions is reported unbounded as well; distinguishing the
/// two would need a feasibility solve, which this oracle deliberately avoids
/// depending on.
pub fn enumerate_vertices(body: &StripPolytope) -> Result<Vec<Vec<f64>>> {
    let active = body.unfixed_indices();
    let d = active.len();
    if d > ENUMERATION_MAX_DIM {
        return Err(Error::EnumerationDimension {
            max: ENUMERATION_MAX_DIM,
            got: d,
        });
    }
    if fixed_value_conflicts(body) {
        return Ok(Vec::new());
    }
    if d == 0 {
        let full = embed(body, &active, &[]);
        return Ok(if body.membership(&full)? {
            vec![full]
        } else {
            Vec::new()
        });
    }
    let rows = body_rows(body, &active, true);
    let matrix: Vec<Vec<f64>> = rows.iter().map(|(a, _)| a.clone()).collect();
    let (_, pivots) = echelon(matrix.clone(), ENUM_RANK_TOL);
    if pivots.len() < d {
        return Err(Error::UnboundedBody);
    }
    if has_recession_ray(&matrix, d) {
        return Err(Error::UnboundedBody);
    }

    let mut vertices: Vec<Vec<f64>> = Vec::new();
    let mut subset = vec![0usize; d];
    each_combination(rows.len(), d, &mut subset, 0, 0, &mut |subset| {
        let a: Vec<Vec<f64>> = subset.iter().map(|&r| rows[r].0.clone()).collect();
        let b: Vec<f64> = subset.iter().map(|&r| rows[r].1).collect();
        let Some(x) = solve_square(&a, &b, ENUM_RANK_TOL) else {
            return;
        };
        let feasible = rows
            .iter()
            .all(|(coeffs, rhs)| dot(coeffs, &x) <= rhs + ENUM_FEAS_TOL);
        if !feasible {
            return;
        }
        let distinct = vertices.iter().all(|kept| {
            kept.iter()
                .zip(&x)
                .any(|(p, q)| (p - q).abs() > ENUM_DEDUP_TOL)
        });
        if distinct {
            vertices.push(x);
        }
    });

    let mut full: Vec<Vec<f64>> = vertices
        .iter()
        .map(|v| embed(body, &active, v))
        .collect();
    full.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(full)
}

fn each_combination(
    n: usize,
    k: usize,
    subset: &mut Vec<usize>,
    depth: usize,
    start: usize,
    visit: &mut impl FnMut(&[usize]),
) {
    if depth == k {
        visit(subset);
        return;
    }
    for i in start..n {
        if n - i < k - depth {
            break;
        }
        subset[depth] = i;
        each_combination(n, k, subset, depth + 1, i + 1, visit);
    }
}

/// Row-echelon reduction with partial pivoting; returns the reduced matrix
/// and the pivot columns (their count is the rank).
fn echelon(mut m: Vec<Vec<f64>>, tol: f64) -> (Vec<Vec<f64>>, Vec<usize>) {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row >= nrows {
            break;
        }
        let Some((best, magnitude)) = (row..nrows)
            .map(|r| (r, m[r][col].abs()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
        else {
            break;
        };
        if magnitude <= tol {
            continue;
        }
        m.swap(row, best);
        for r in row + 1..nrows {
            let factor = m[r][col] / m[row][col];
            if factor != 0.0 {
                for c in col..ncols {
                    m[r][c] -= factor * m[row][c];
                }
                m[r][col] = 0.0;
            }
        }
        pivots.push(col);
        row += 1;
    }
    (m, pivots)
}

/// Solves a square system by Gaussian elimination; `None` when singular.
fn solve_square(a: &[Vec<f64>], b: &[f64], tol: f64) -> Option<Vec<f64>> {
    let d = b.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            let mut augmented = row.clone();
            augmented.push(rhs);
            augmented
        })
        .collect();
    for col in 0..d {
        let (best, magnitude) = (col..d)
            .map(|r| (r, m[r][col].abs()))
            .max_by(|a, b| a.1.total_cmp(&b.1))?;
        if magnitude <= tol {
            return None;
        }
        m.swap(col, best);
        for r in col + 1..d {
            let factor = m[r][col] / m[col][col];
            if factor != 0.0 {
                for c in col..=d {
                    m[r][c] -= factor * m[col][c];
                }
            }
        }
    }
    let mut x = vec![0.0; d];
    for i in (0..d).rev() {
        let partial: f64 = (i + 1..d).map(|c| m[i][c] * x[c]).sum();
        x[i] = (m[i][d] - partial) / m[i][i];
    }
    Some(x)
}

/// True when the cone `{u : a·u ≤ 0 for every row}` contains a nonzero
/// direction. With full-rank rows the cone is pointed, so any nonzero
/// direction implies an extreme ray lying on d−1 independent tight rows —
/// scan those.
fn has_recession_ray(rows: &[Vec<f64>], d: usize) -> bool {
    let mut subset = vec![0usize; d - 1];
    let mut found = false;
    each_combination(rows.len(), d - 1, &mut subset, 0, 0, &mut |subset| {
        if found {
            return;
        }
        let chosen: Vec<Vec<f64>> = subset.iter().map(|&r| rows[r].clone()).collect();
        let Some(u) = nullspace_direction(&chosen, d) else {
            return;
        };
        let escapes = |direction: &[f64]| {
            rows.iter()
                .all(|row| dot(row, direction) <= ENUM_RANK_TOL)
        };
        let negated: Vec<f64> = u.iter().map(|v| -v).collect();
        if escapes(&u) || escapes(&negated) {
            found = true;
        }
    });
    found
}

/// One-dimensional nullspace of a rank-(d−1) row set; `None` when the rank
/// is anything else.
fn nullspace_direction(rows: &[Vec<f64>], d: usize) -> Option<Vec<f64>> {
    let (m, pivots) = echelon(rows.to_vec(), ENUM_RANK_TOL);
    if pivots.len() + 1 != d {
        return None;
    }
    let free = (0..d).find(|c| !pivots.contains(c))?;
    let mut u = vec![0.0; d];
    u[free] = 1.0;
    for (i, &p) in pivots.iter().enumerate().rev() {
        let partial: f64 = (p + 1..d).map(|c| m[i][c] * u[c]).sum();
        u[p] = -partial / m[i][p];
    }
    Some(u)
}
