use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use super::{check_dim, check_distinct, rat, rational_sqrt, CurveFamily, Point, Rational};
use crate::error::{Error, Result};

/// A planar curve in canonical form.
///
/// Canonical forms are unique per geometric object, so structural equality
/// is geometric equality:
/// - lines `ax + by + c = 0` with the first nonzero of `(a, b)` equal to 1;
/// - circles by center and squared radius (`r2 > 0`);
/// - vertical parabolas `y = ax^2 + bx + c` with `a != 0`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Curve {
    Line { a: Rational, b: Rational, c: Rational },
    Circle { cx: Rational, cy: Rational, r2: Rational },
    VParabola { a: Rational, b: Rational, c: Rational },
}

impl Curve {
    pub fn line(a: Rational, b: Rational, c: Rational) -> Result<Curve> {
        let lead = if !a.is_zero() {
            a.clone()
        } else if !b.is_zero() {
            b.clone()
        } else {
            return Err(Error::InvalidArgument("line with a = b = 0".into()));
        };
        Ok(Curve::Line { a: a / &lead, b: b / &lead, c: c / &lead })
    }

    pub fn circle(cx: Rational, cy: Rational, r2: Rational) -> Result<Curve> {
        if !r2.is_positive() {
            return Err(Error::InvalidArgument("circle needs r^2 > 0".into()));
        }
        Ok(Curve::Circle { cx, cy, r2 })
    }

    pub fn vparabola(a: Rational, b: Rational, c: Rational) -> Result<Curve> {
        if a.is_zero() {
            return Err(Error::InvalidArgument("parabola needs a != 0".into()));
        }
        Ok(Curve::VParabola { a, b, c })
    }

    /// Rebuilds a curve from its canonical coefficient vector.
    pub fn from_coefficients(family: CurveFamily, coeffs: &[Rational]) -> Result<Curve> {
        let [x, y, z] = <[Rational; 3]>::try_from(coeffs.to_vec())
            .map_err(|_| Error::InvalidArgument("curves have three coefficients".into()))?;
        match family {
            CurveFamily::Line => Curve::line(x, y, z),
            CurveFamily::Circle => Curve::circle(x, y, z),
            CurveFamily::VParabola => Curve::vparabola(x, y, z),
        }
    }

    pub fn family(&self) -> CurveFamily {
        match self {
            Curve::Line { .. } => CurveFamily::Line,
            Curve::Circle { .. } => CurveFamily::Circle,
            Curve::VParabola { .. } => CurveFamily::VParabola,
        }
    }

    pub fn coefficients(&self) -> Vec<Rational> {
        match self {
            Curve::Line { a, b, c } | Curve::VParabola { a, b, c } => {
                vec![a.clone(), b.clone(), c.clone()]
            }
            Curve::Circle { cx, cy, r2 } => vec![cx.clone(), cy.clone(), r2.clone()],
        }
    }

    /// Exact membership by substitution. Points of the wrong dimension are
    /// never covered.
    pub fn covers(&self, p: &Point) -> bool {
        if p.dim() != 2 {
            return false;
        }
        let (x, y) = (p.x(), p.y());
        match self {
            Curve::Line { a, b, c } => (a * x + b * y + c).is_zero(),
            Curve::Circle { cx, cy, r2 } => {
                let dx = x - cx;
                let dy = y - cy;
                &(&dx * &dx + &dy * &dy) == r2
            }
            Curve::VParabola { a, b, c } => &(a * x * x + b * x + c) == y,
        }
    }
}

fn line_through_two(p: &Point, q: &Point) -> Curve {
    let a = p.y() - q.y();
    let b = q.x() - p.x();
    let c = p.x() * q.y() - q.x() * p.y();
    Curve::line(a, b, c).expect("distinct points span a line")
}

fn circumcircle(p: &Point, q: &Point, r: &Point) -> Option<Curve> {
    let (x1, y1) = (p.x(), p.y());
    let (x2, y2) = (q.x(), q.y());
    let (x3, y3) = (r.x(), r.y());
    // 2(x2-x1) cx + 2(y2-y1) cy = |q|^2 - |p|^2, and likewise for r.
    let a11 = rat(2) * (x2 - x1);
    let a12 = rat(2) * (y2 - y1);
    let a21 = rat(2) * (x3 - x1);
    let a22 = rat(2) * (y3 - y1);
    let n1 = x1 * x1 + y1 * y1;
    let b1 = x2 * x2 + y2 * y2 - &n1;
    let b2 = x3 * x3 + y3 * y3 - &n1;
    let det = &a11 * &a22 - &a12 * &a21;
    if det.is_zero() {
        return None;
    }
    let cx = (&b1 * &a22 - &a12 * &b2) / &det;
    let cy = (&a11 * &b2 - &b1 * &a21) / &det;
    let dx = x1 - &cx;
    let dy = y1 - &cy;
    let r2 = &dx * &dx + &dy * &dy;
    Curve::circle(cx, cy, r2).ok()
}

fn parabola_through_three(p: &Point, q: &Point, r: &Point) -> Option<Curve> {
    let (x1, y1) = (p.x(), p.y());
    let (x2, y2) = (q.x(), q.y());
    let (x3, y3) = (r.x(), r.y());
    if x1 == x2 || x1 == x3 || x2 == x3 {
        return None;
    }
    // Newton divided differences.
    let d12 = (y2 - y1) / (x2 - x1);
    let d23 = (y3 - y2) / (x3 - x2);
    let a = (&d23 - &d12) / (x3 - x1);
    if a.is_zero() {
        return None;
    }
    let b = &d12 - &a * (x1 + x2);
    let c = y1 - &a * x1 * x1 - &b * x1;
    Curve::vparabola(a, b, c).ok()
}

/// Curves of `family` passing through all of `pts`.
///
/// With at least `d` points this returns every such curve (possibly none).
/// With fewer than `d` points it returns one canonical completion, which is
/// only meant to witness that the small set is coverable: one point gets a
/// horizontal line, a unit circle to its left, or `y = x^2 + c`; two points
/// get the circle on their diameter or the parabola with `a = 1`.
pub fn curve_through(family: CurveFamily, pts: &[Point]) -> Result<Vec<Curve>> {
    check_dim(pts, 2)?;
    check_distinct(pts)?;
    if pts.len() > family.s() + 1 {
        return Err(Error::InvalidArgument("too many points for curve_through".into()));
    }
    let curves = match (family, pts) {
        (CurveFamily::Line, []) => vec![Curve::line(rat(0), rat(1), rat(0))?],
        (CurveFamily::Line, [p]) => vec![Curve::line(rat(0), rat(1), -p.y())?],
        (CurveFamily::Line, [p, q]) => vec![line_through_two(p, q)],
        (CurveFamily::Circle, []) => vec![Curve::circle(rat(0), rat(0), rat(1))?],
        (CurveFamily::Circle, [p]) => vec![Curve::circle(p.x() + rat(1), p.y().clone(), rat(1))?],
        (CurveFamily::Circle, [p, q]) => {
            let half = Rational::new(1.into(), 2.into());
            let cx = (p.x() + q.x()) * &half;
            let cy = (p.y() + q.y()) * &half;
            let dx = p.x() - &cx;
            let dy = p.y() - &cy;
            vec![Curve::circle(cx, cy, &dx * &dx + &dy * &dy)?]
        }
        (CurveFamily::Circle, [p, q, r]) => circumcircle(p, q, r).into_iter().collect(),
        (CurveFamily::VParabola, []) => vec![Curve::vparabola(rat(1), rat(0), rat(0))?],
        (CurveFamily::VParabola, [p]) => {
            vec![Curve::vparabola(rat(1), rat(0), p.y() - p.x() * p.x())?]
        }
        (CurveFamily::VParabola, [p, q]) => {
            if p.x() == q.x() {
                vec![]
            } else {
                // y - x^2 is linear through both points.
                let u1 = p.y() - p.x() * p.x();
                let u2 = q.y() - q.x() * q.x();
                let b = (&u2 - &u1) / (q.x() - p.x());
                let c = &u1 - &b * p.x();
                vec![Curve::vparabola(rat(1), b, c)?]
            }
        }
        (CurveFamily::VParabola, [p, q, r]) => {
            parabola_through_three(p, q, r).into_iter().collect()
        }
        _ => unreachable!("length checked above"),
    };
    Ok(curves)
}

/// Whether a single curve of `family` covers all of `pts` (distinct points).
pub fn is_coverable(family: CurveFamily, pts: &[Point]) -> bool {
    let head = pts.len().min(family.s() + 1);
    let Ok(curves) = curve_through(family, &pts[..head]) else {
        return false;
    };
    curves.iter().any(|c| pts[head..].iter().all(|p| c.covers(p)))
}

/// Intersection of two distinct curves of one family.
///
/// Circles can meet in points with irrational coordinates; those are
/// counted in `irrational` but not materialized, so
/// `points.len() + irrational` is always the exact intersection size.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Intersection {
    pub points: Vec<Point>,
    pub irrational: usize,
}

impl Intersection {
    pub fn len(&self) -> usize {
        self.points.len() + self.irrational
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Roots of `a t^2 + b t + c` (not all coefficients zero): rational roots
/// and the number of real irrational ones.
fn quadratic_roots(a: &Rational, b: &Rational, c: &Rational) -> (Vec<Rational>, usize) {
    if a.is_zero() {
        if b.is_zero() {
            return (vec![], 0);
        }
        return (vec![-c / b], 0);
    }
    let disc = b * b - rat(4) * a * c;
    if disc.is_negative() {
        return (vec![], 0);
    }
    let two_a = rat(2) * a;
    if disc.is_zero() {
        return (vec![-b / &two_a], 0);
    }
    match rational_sqrt(&disc) {
        Some(root) => {
            let mut roots = vec![(-b - &root) / &two_a, (-b + &root) / &two_a];
            roots.sort();
            (roots, 0)
        }
        None => (vec![], 2),
    }
}

/// All intersection points of two distinct curves of the same family.
pub fn curves_intersect(c1: &Curve, c2: &Curve) -> Result<Intersection> {
    if c1.family() != c2.family() {
        return Err(Error::FamilyMismatch);
    }
    if c1 == c2 {
        return Err(Error::IdenticalCurves);
    }
    let mut out = Intersection::default();
    match (c1, c2) {
        (Curve::Line { a: a1, b: b1, c: cc1 }, Curve::Line { a: a2, b: b2, c: cc2 }) => {
            let det = a1 * b2 - a2 * b1;
            if !det.is_zero() {
                let x = (b1 * cc2 - b2 * cc1) / &det;
                let y = (a2 * cc1 - a1 * cc2) / &det;
                out.points.push(Point::xy(x, y));
            }
        }
        (
            Curve::Circle { cx: a1, cy: b1, r2: r1 },
            Curve::Circle { cx: a2, cy: b2, r2: rr2 },
        ) => {
            // Radical axis A x + B y = C.
            let la = rat(2) * (a2 - a1);
            let lb = rat(2) * (b2 - b1);
            let lc = r1 - rr2 - a1 * a1 - b1 * b1 + a2 * a2 + b2 * b2;
            if la.is_zero() && lb.is_zero() {
                return Ok(out);
            }
            if !lb.is_zero() {
                let m = -&la / &lb;
                let q = &lc / &lb;
                let qb = &q - b1;
                let qa = Rational::one() + &m * &m;
                let qb_lin = rat(-2) * a1 + rat(2) * &m * &qb;
                let qc = a1 * a1 + &qb * &qb - r1;
                let (roots, irr) = quadratic_roots(&qa, &qb_lin, &qc);
                out.irrational = irr;
                for x in roots {
                    let y = &m * &x + &q;
                    out.points.push(Point::xy(x, y));
                }
            } else {
                let x = &lc / &la;
                let dx = &x - a1;
                let qc = b1 * b1 + &dx * &dx - r1;
                let (roots, irr) = quadratic_roots(&rat(1), &(rat(-2) * b1), &qc);
                out.irrational = irr;
                for y in roots {
                    out.points.push(Point::xy(x.clone(), y));
                }
            }
        }
        (
            Curve::VParabola { a: a1, b: b1, c: cc1 },
            Curve::VParabola { a: a2, b: b2, c: cc2 },
        ) => {
            let (roots, irr) = quadratic_roots(&(a1 - a2), &(b1 - b2), &(cc1 - cc2));
            out.irrational = irr;
            for x in roots {
                let y = a1 * &x * &x + b1 * &x + cc1;
                out.points.push(Point::xy(x, y));
            }
        }
        _ => unreachable!("families checked above"),
    }
    Ok(out)
}
