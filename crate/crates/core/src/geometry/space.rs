use alloc::vec::Vec;

use num_traits::Zero;

use super::{is_zero3, rat, Point, Rational};
use crate::error::{Error, Result};

/// A vector in three-space.
pub type Vec3 = [Rational; 3];

fn sub3(a: &Vec3, b: &Vec3) -> Vec3 {
    [&a[0] - &b[0], &a[1] - &b[1], &a[2] - &b[2]]
}

fn dot3(a: &Vec3, b: &Vec3) -> Rational {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}

fn cross3(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

fn unit(axis: usize) -> Vec3 {
    let mut v = [rat(0), rat(0), rat(0)];
    v[axis] = rat(1);
    v
}

fn pivot(v: &Vec3) -> Option<usize> {
    v.iter().position(|x| !x.is_zero())
}

/// Subtracts the reduced rows from `v` so that `v` vanishes on their pivots.
fn reduce(rows: &[Vec3], v: &mut Vec3) {
    for row in rows {
        let p = pivot(row).expect("rows are nonzero");
        if !v[p].is_zero() {
            let f = v[p].clone();
            for c in 0..3 {
                let t = &f * &row[c];
                v[c] -= t;
            }
        }
    }
}

/// Reduced row echelon form of the span of `vecs`, zero rows dropped.
fn rref(vecs: impl IntoIterator<Item = Vec3>) -> Vec<Vec3> {
    let mut rows: Vec<Vec3> = Vec::new();
    for mut v in vecs {
        reduce(&rows, &mut v);
        let Some(p) = pivot(&v) else { continue };
        let lead = v[p].clone();
        for x in v.iter_mut() {
            *x /= &lead;
        }
        for row in rows.iter_mut() {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for c in 0..3 {
                    let t = &f * &v[c];
                    row[c] -= t;
                }
            }
        }
        rows.push(v);
    }
    rows.sort_by_key(|r| pivot(r));
    rows
}

/// An affine subspace of three-space in canonical form.
///
/// The direction space is kept in reduced row echelon form and the base
/// point is reduced against it (zero on every pivot coordinate), so two
/// flats are equal exactly when they describe the same subspace. A flat of
/// dimension 3 is the whole space.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Flat {
    basis: Vec<Vec3>,
    base: Vec3,
}

impl Flat {
    fn from_parts(base: Vec3, dirs: impl IntoIterator<Item = Vec3>) -> Flat {
        let basis = rref(dirs);
        let mut base = base;
        reduce(&basis, &mut base);
        Flat { basis, base }
    }

    /// The 0-flat at `p` (which must be three-dimensional).
    pub fn point(p: &Point) -> Flat {
        Flat { basis: Vec::new(), base: p.to_vec3() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn base(&self) -> Point {
        Point::from_vec3(self.base.clone())
    }

    pub fn basis(&self) -> &[Vec3] {
        &self.basis
    }

    fn contains_vec(&self, v: &Vec3) -> bool {
        let mut v = v.clone();
        reduce(&self.basis, &mut v);
        is_zero3(&v)
    }

    pub fn contains_point(&self, p: &Point) -> bool {
        p.dim() == 3 && self.contains_vec(&sub3(&p.to_vec3(), &self.base))
    }

    pub fn contains_flat(&self, other: &Flat) -> bool {
        self.contains_vec(&sub3(&other.base, &self.base))
            && other.basis.iter().all(|b| self.contains_vec(b))
    }

    /// Smallest flat containing both `self` and `other`.
    pub fn join(&self, other: &Flat) -> Flat {
        let mut dirs = self.basis.clone();
        dirs.push(sub3(&other.base, &self.base));
        dirs.extend(other.basis.iter().cloned());
        Flat::from_parts(self.base.clone(), dirs)
    }

    pub fn join_point(&self, p: &Point) -> Flat {
        self.join(&Flat::point(p))
    }

    /// The plane spanned by a 2-flat, or a canonical plane containing a
    /// smaller flat (its direction space padded with coordinate axes).
    /// `None` for the whole space.
    pub fn completion_plane(&self) -> Option<Plane3> {
        if self.dim() > 2 {
            return None;
        }
        let mut rows = self.basis.clone();
        for axis in 0..3 {
            if rows.len() == 2 {
                break;
            }
            let e = unit(axis);
            let mut probe = e.clone();
            reduce(&rows, &mut probe);
            if !is_zero3(&probe) {
                rows = rref(rows.into_iter().chain(core::iter::once(e)));
            }
        }
        let n = cross3(&rows[0], &rows[1]);
        let e = -dot3(&n, &self.base);
        let [a, b, c] = n;
        Some(Plane3::new(a, b, c, e).expect("independent directions"))
    }
}

/// A plane `ax + by + cz + e = 0` with the first nonzero of `(a, b, c)`
/// scaled to 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Plane3 {
    coeffs: [Rational; 4],
}

impl Plane3 {
    pub fn new(a: Rational, b: Rational, c: Rational, e: Rational) -> Result<Plane3> {
        let lead = [&a, &b, &c]
            .into_iter()
            .find(|x| !x.is_zero())
            .cloned()
            .ok_or_else(|| Error::InvalidArgument("plane normal is zero".into()))?;
        Ok(Plane3 { coeffs: [a / &lead, b / &lead, c / &lead, e / &lead] })
    }

    pub fn coefficients(&self) -> &[Rational; 4] {
        &self.coeffs
    }

    fn normal(&self) -> Vec3 {
        [self.coeffs[0].clone(), self.coeffs[1].clone(), self.coeffs[2].clone()]
    }

    fn eval(&self, v: &Vec3) -> Rational {
        dot3(&self.normal(), v) + &self.coeffs[3]
    }

    pub fn covers(&self, p: &Point) -> bool {
        p.dim() == 3 && self.eval(&p.to_vec3()).is_zero()
    }

    pub fn covers_flat(&self, f: &Flat) -> bool {
        let n = self.normal();
        self.eval(&f.base).is_zero() && f.basis.iter().all(|b| dot3(&n, b).is_zero())
    }

    /// The plane as a 2-flat.
    pub fn as_flat(&self) -> Flat {
        let n = self.normal();
        let p = pivot(&n).expect("nonzero normal");
        let mut base = [rat(0), rat(0), rat(0)];
        base[p] = -&self.coeffs[3];
        let dirs = (0..3).filter(|&c| c != p).map(|c| {
            let mut v = unit(c);
            v[p] = -&n[c];
            v
        });
        Flat::from_parts(base, dirs.collect::<Vec<_>>())
    }
}

/// Smallest flat containing every input flat.
pub fn affine_hull(objs: &[Flat]) -> Result<Flat> {
    let (first, rest) = objs
        .split_first()
        .ok_or_else(|| Error::InvalidArgument("affine hull of nothing".into()))?;
    let mut dirs = first.basis.clone();
    for f in rest {
        dirs.push(sub3(&f.base, &first.base));
        dirs.extend(f.basis.iter().cloned());
    }
    Ok(Flat::from_parts(first.base.clone(), dirs))
}

fn check3(pts: &[&Point]) -> Result<()> {
    for p in pts {
        if p.dim() != 3 {
            return Err(Error::DimensionMismatch { expected: 3, found: p.dim() });
        }
    }
    Ok(())
}

pub fn line_through(p: &Point, q: &Point) -> Result<Flat> {
    check3(&[p, q])?;
    if p == q {
        return Err(Error::DependentInput);
    }
    Ok(Flat::point(p).join_point(q))
}

pub fn plane_through(p: &Point, q: &Point, r: &Point) -> Result<Plane3> {
    check3(&[p, q, r])?;
    let (a, b, c) = (p.to_vec3(), q.to_vec3(), r.to_vec3());
    let n = cross3(&sub3(&b, &a), &sub3(&c, &a));
    if is_zero3(&n) {
        return Err(Error::DependentInput);
    }
    let e = -dot3(&n, &a);
    let [x, y, z] = n;
    Plane3::new(x, y, z, e)
}

pub fn plane_through_line_point(line: &Flat, p: &Point) -> Result<Plane3> {
    check3(&[p])?;
    if line.dim() != 1 {
        return Err(Error::InvalidArgument("expected a 1-flat".into()));
    }
    if line.contains_point(p) {
        return Err(Error::DependentInput);
    }
    Ok(line.join_point(p).completion_plane().expect("2-flat"))
}

/// Largest number of points of `pts` on one line, with a witness line when
/// that number is at least 2.
pub fn max_collinear(pts: &[Point]) -> (usize, Option<Flat>) {
    if pts.len() <= 1 {
        return (pts.len(), None);
    }
    let mut best = (0usize, None);
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if pts[i] == pts[j] {
                continue;
            }
            let Ok(line) = line_through(&pts[i], &pts[j]) else { continue };
            let count = pts.iter().filter(|p| line.contains_point(p)).count();
            if count > best.0 {
                best = (count, Some(line));
            }
        }
    }
    if best.1.is_none() {
        // all points coincide
        return (1, None);
    }
    best
}

impl Flat {
    /// Unit-free direction of a line; `None` unless `dim() == 1`.
    pub fn direction(&self) -> Option<&Vec3> {
        (self.dim() == 1).then(|| &self.basis[0])
    }

    /// The point `base + t * direction` on a line.
    pub fn point_at(&self, t: &Rational) -> Option<Point> {
        let d = self.direction()?;
        Some(Point::from_vec3([
            &self.base[0] + t * &d[0],
            &self.base[1] + t * &d[1],
            &self.base[2] + t * &d[2],
        ]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64, z: i64) -> Point {
        Point::int(&[x, y, z])
    }

    fn plane(a: i64, b: i64, c: i64, e: i64) -> Plane3 {
        Plane3::new(rat(a), rat(b), rat(c), rat(e)).unwrap()
    }

    #[test]
    fn planes_through_points() {
        assert_eq!(plane_through(&p(0, 0, 0), &p(1, 0, 0), &p(0, 1, 0)).unwrap(), plane(0, 0, 1, 0));
        assert_eq!(
            plane_through(&p(0, 0, 0), &p(1, 1, 1), &p(2, 2, 2)),
            Err(Error::DependentInput)
        );
        let x_axis = line_through(&p(0, 0, 0), &p(1, 0, 0)).unwrap();
        assert_eq!(plane_through_line_point(&x_axis, &p(0, 0, 1)).unwrap(), plane(0, 1, 0, 0));
        assert_eq!(plane_through_line_point(&x_axis, &p(7, 0, 0)), Err(Error::DependentInput));
    }

    #[test]
    fn plane_canonical_form() {
        assert_eq!(plane(0, -2, 4, 6), plane(0, 1, -2, -3));
        assert_eq!(plane(0, -2, 4, 6).coefficients()[3], rat(-3));
    }

    #[test]
    fn hulls() {
        let o = Flat::point(&p(0, 0, 0));
        let x_axis = affine_hull(&[o.clone(), Flat::point(&p(1, 0, 0))]).unwrap();
        assert_eq!(x_axis, line_through(&p(5, 0, 0), &p(-3, 0, 0)).unwrap());
        assert_eq!(x_axis.dim(), 1);
        let h = affine_hull(&[x_axis.clone(), Flat::point(&p(0, 1, 0))]).unwrap();
        assert_eq!(h, plane(0, 0, 1, 0).as_flat());
        assert_eq!(affine_hull(&[o.clone()]).unwrap().dim(), 0);
        let full = h.join_point(&p(0, 0, 1));
        assert_eq!(full.dim(), 3);
        assert!(full.completion_plane().is_none());
        assert!(affine_hull(&[]).is_err());
    }

    #[test]
    fn containment() {
        let x_axis = line_through(&p(0, 0, 0), &p(1, 0, 0)).unwrap();
        let z0 = plane(0, 0, 1, 0);
        assert!(z0.covers_flat(&x_axis));
        assert!(!z0.covers(&p(1, 1, 1)));
        assert!(x_axis.contains_flat(&Flat::point(&p(0, 0, 0))));
        assert!(z0.as_flat().contains_flat(&x_axis));
        assert!(!x_axis.contains_flat(&z0.as_flat()));
    }

    #[test]
    fn completion_contains_flat() {
        let l = line_through(&p(1, 2, 3), &p(4, 6, 3)).unwrap();
        let h = l.completion_plane().unwrap();
        assert!(h.covers_flat(&l));
        let pt = Flat::point(&p(2, -1, 5));
        assert!(pt.completion_plane().unwrap().covers(&p(2, -1, 5)));
    }

    #[test]
    fn collinear_counts() {
        let pts = [p(0, 0, 0), p(1, 1, 1), p(2, 2, 2), p(0, 1, 0)];
        let (m, w) = max_collinear(&pts);
        assert_eq!(m, 3);
        assert!(w.unwrap().contains_point(&p(3, 3, 3)));
        let general = [p(0, 0, 0), p(1, 0, 0), p(0, 1, 0), p(0, 0, 1)];
        let (m, w) = max_collinear(&general);
        assert_eq!(m, 2);
        assert!(w.is_some());
        assert_eq!(max_collinear(&[]), (0, None));
        assert_eq!(max_collinear(&[p(1, 1, 1)]), (1, None));
    }

    #[test]
    fn points_on_lines() {
        let l = line_through(&p(1, 1, 0), &p(3, 2, 1)).unwrap();
        for t in -3..4 {
            assert!(l.contains_point(&l.point_at(&rat(t)).unwrap()));
        }
    }
}
