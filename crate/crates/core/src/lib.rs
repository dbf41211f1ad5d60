//! Exact solvers for geometric point-cover problems.
//!
//! Points in the plane are covered by curves from a family with bounded
//! pairwise intersections (lines, circles, vertical parabolas); points in
//! three-space are covered by planes. Everything is computed over exact
//! rationals.
//!
//! The crate is `no_std` and only needs `alloc`:
//!
//! - [`geometry`]: points, curves, planes, flats and their predicates.
//! - [`kernel`]: polynomial kernels for curve cover and plane cover.
//! - [`ie`]: the inclusion-exclusion deciders, counting coverable sets via
//!   representatives, plus witness extraction.
//! - [`curve_branch`] and [`plane_branch`]: richness-driven branching
//!   solvers that bottom out in inclusion-exclusion.
//! - [`oracle`]: an exhaustive branch-and-bound set-cover solver used as
//!   ground truth.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod combinatorics;
pub mod curve_branch;
pub mod error;
pub mod geometry;
pub mod ie;
pub mod kernel;
pub mod oracle;
pub mod plane_branch;
pub mod stats;

pub use error::{Error, Result};
pub use geometry::{CoverObject, Curve, CurveFamily, Family, Flat, Plane3, Point, Rational};
