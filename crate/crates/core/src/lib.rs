//! Discrepancy-minimization toolkit for strip polytopes and convex bodies.
//!
//! The crate has three pillars:
//!
//! 1. **LP partial coloring** ([`partial`], [`coloring`]): maximize a random
//!    Gaussian objective over a symmetric body intersected with the unit cube.
//!    The optimum is a vertex, so many coordinates land exactly on ±1; freezing
//!    them and recursing over the uncolored elements yields full ±1 colorings
//!    of set systems with Spencer-type discrepancy.
//! 2. **Coordinate walk** ([`sampler`], [`walk`]): for convex bodies that are
//!    not symmetric, sample the Gaussian measure restricted to the body by
//!    hit-and-run, find a coordinate whose restricted marginal is nearly
//!    centered with near-unit variance, fix it at ±α (sign chosen by comparing
//!    the marginal density at the two candidates), and repeat on the slice.
//! 3. **Containment verification** ([`containment`]): estimate the mean
//!    squared gauge norm of uniform sign vectors and of Gaussians, derive a
//!    scale `c` from the sign-vector moment, and certify by Monte Carlo that a
//!    random sign vector lands in `cK` with probability at least 1/2.
//!
//! Geometry ([`geometry`]), a deterministic simplex solver ([`lp`]), and
//! seedable Gaussian utilities ([`gaussian`]) support all three. Every
//! randomized routine takes a [`gaussian::RandomSource`] and is byte-for-byte
//! reproducible under a fixed seed.

pub mod coloring;
pub mod containment;
pub mod error;
pub mod gaussian;
pub mod geometry;
pub mod lp;
pub mod partial;
pub mod sampler;
pub mod walk;

pub use error::{Error, Result};
pub use gaussian::RandomSource;
pub use geometry::{PartialColoring, StripPolytope};

pub(crate) mod vecmath {
    //! Tiny dense-vector helpers shared across modules.

    pub fn dot(a: &[f64], b: &[f64]) -> f64 {
        debug_assert_eq!(a.len(), b.len());
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    pub fn norm(a: &[f64]) -> f64 {
        dot(a, a).sqrt()
    }
}
