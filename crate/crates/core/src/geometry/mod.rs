//! Exact rational geometry.
//!
//! No floating point is used anywhere: every predicate is an exact
//! substitution or an exact linear solve over [`Rational`].

mod candidates;
mod curve;
pub(crate) mod fast;
mod space;

pub use candidates::{
    candidates_with_coverage, collinear_groups, coverage, enumerate_candidates, enumerate_curve_candidates, enumerate_plane_candidates,
    family_covers_all, object_through, richness, small_coverable_sets,
};
pub use curve::{curve_through, curves_intersect, is_coverable, Curve, Intersection};
pub use space::{
    affine_hull, line_through, max_collinear, plane_through, plane_through_line_point, Flat,
    Plane3, Vec3,
};

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact arbitrary-precision fraction, always in lowest terms.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `x^e` for a non-negative integer exponent.
pub fn rat_pow(x: &Rational, e: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

/// Exact square root of a rational, if it is rational.
pub fn rational_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer();
    let d = x.denom();
    let rn = n.sqrt();
    let rd = d.sqrt();
    if &(&rn * &rn) == n && &(&rd * &rd) == d {
        Some(Rational::new(rn, rd))
    } else {
        None
    }
}

/// A point with two or three exact coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    coords: Vec<Rational>,
}

impl Point {
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        match coords.len() {
            2 | 3 => Ok(Point { coords }),
            n => Err(Error::UnsupportedDimension(n)),
        }
    }

    pub fn xy(x: Rational, y: Rational) -> Self {
        Point { coords: alloc::vec![x, y] }
    }

    pub fn xyz(x: Rational, y: Rational, z: Rational) -> Self {
        Point { coords: alloc::vec![x, y, z] }
    }

    /// Integer-coordinate point; panics unless `c` has length 2 or 3.
    pub fn int(c: &[i64]) -> Self {
        Point::new(c.iter().map(|&v| rat(v)).collect()).expect("2 or 3 coordinates")
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn x(&self) -> &Rational {
        &self.coords[0]
    }

    pub fn y(&self) -> &Rational {
        &self.coords[1]
    }

    pub fn z(&self) -> &Rational {
        &self.coords[2]
    }

    pub(crate) fn to_vec3(&self) -> Vec3 {
        [self.coords[0].clone(), self.coords[1].clone(), self.coords[2].clone()]
    }

    pub(crate) fn from_vec3(v: Vec3) -> Self {
        let [x, y, z] = v;
        Point::xyz(x, y, z)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

pub(crate) fn check_dim(pts: &[Point], dim: usize) -> Result<()> {
    for p in pts {
        if p.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: p.dim() });
        }
    }
    Ok(())
}

pub(crate) fn check_distinct(pts: &[Point]) -> Result<()> {
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if pts[i] == pts[j] {
                return Err(Error::DuplicatePoints);
            }
        }
    }
    Ok(())
}

/// Drops repeated points, keeping the first occurrence of each.
pub fn dedup_points(pts: &[Point]) -> Vec<Point> {
    let mut seen = alloc::collections::BTreeSet::new();
    pts.iter().filter(|p| seen.insert((*p).clone())).cloned().collect()
}

/// Planar curve families with bounded pairwise intersections.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CurveFamily {
    /// Lines `ax + by + c = 0`; d = 2, s = 1.
    Line,
    /// Circles with positive radius; d = 3, s = 2.
    Circle,
    /// Graphs `y = ax^2 + bx + c` with `a != 0`; d = 3, s = 2.
    VParabola,
}

impl CurveFamily {
    /// Degrees of freedom: points needed to pin down finitely many curves.
    pub fn d(self) -> usize {
        match self {
            CurveFamily::Line => 2,
            CurveFamily::Circle | CurveFamily::VParabola => 3,
        }
    }

    /// Bound on pairwise intersections.
    pub fn s(self) -> usize {
        match self {
            CurveFamily::Line => 1,
            CurveFamily::Circle | CurveFamily::VParabola => 2,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            CurveFamily::Line => "line2",
            CurveFamily::Circle => "circle2",
            CurveFamily::VParabola => "vparabola2",
        }
    }
}

/// Every covering family the solvers understand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Curve(CurveFamily),
    /// Planes in three-space. Their intersection bound `s` is only fixed by
    /// the plane kernel (it becomes `k + 1`).
    Plane,
}

impl Family {
    pub fn dim(self) -> usize {
        match self {
            Family::Curve(_) => 2,
            Family::Plane => 3,
        }
    }

    pub fn d(self) -> usize {
        match self {
            Family::Curve(c) => c.d(),
            Family::Plane => 3,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Family::Curve(c) => c.tag(),
            Family::Plane => "plane3",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Family> {
        Some(match tag {
            "line2" => Family::Curve(CurveFamily::Line),
            "circle2" => Family::Curve(CurveFamily::Circle),
            "vparabola2" => Family::Curve(CurveFamily::VParabola),
            "plane3" => Family::Plane,
            _ => return None,
        })
    }
}

/// A single covering object: a planar curve or a plane in three-space.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CoverObject {
    Curve(Curve),
    Plane(Plane3),
}

impl CoverObject {
    pub fn covers(&self, p: &Point) -> bool {
        match self {
            CoverObject::Curve(c) => c.covers(p),
            CoverObject::Plane(h) => h.covers(p),
        }
    }

    pub fn kind_tag(&self) -> &'static str {
        match self {
            CoverObject::Curve(c) => c.family().tag(),
            CoverObject::Plane(_) => "plane3",
        }
    }

    /// Canonical coefficient vector (see [`Curve::coefficients`] and
    /// [`Plane3::coefficients`]).
    pub fn coefficients(&self) -> Vec<Rational> {
        match self {
            CoverObject::Curve(c) => c.coefficients(),
            CoverObject::Plane(h) => h.coefficients().to_vec(),
        }
    }
}

pub(crate) fn is_zero3(v: &Vec3) -> bool {
    v.iter().all(Zero::is_zero)
}
