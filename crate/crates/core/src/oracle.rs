//! Exhaustive ground truth.
//!
//! [`oracle_min_cover`] is a plain branch-and-bound set cover over the
//! maximal coverable subsets of the input. It shares only the candidate
//! enumeration with the rest of the crate. [`check_cover`] re-evaluates
//! the defining equations from coefficient vectors and shares nothing.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::geometry::{
    check_dim, check_distinct, coverage, enumerate_candidates, object_through,
    small_coverable_sets, CoverObject, Family, Point, Rational,
};

/// Default limit on the number of points.
pub const ORACLE_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleCover {
    pub opt: usize,
    pub witness: Vec<CoverObject>,
}

/// Maximal coverable sets as `(mask, object)`, largest first.
fn maximal_sets(family: Family, pts: &[Point]) -> Vec<(u64, CoverObject)> {
    let mut by_mask: BTreeMap<u64, CoverObject> = BTreeMap::new();
    let mut sets = Vec::new();
    for obj in enumerate_candidates(family, pts) {
        let cov = coverage(&obj, pts);
        let mask = cov.iter().fold(0u64, |m, &i| m | 1 << i);
        sets.push(cov);
        by_mask.entry(mask).or_insert(obj);
    }
    for small in small_coverable_sets(family, pts, &sets) {
        let sub: Vec<Point> = small.iter().map(|&i| pts[i].clone()).collect();
        let obj = object_through(family, &sub).expect("small sets are coverable");
        let mask = small.iter().fold(0u64, |m, &i| m | 1 << i);
        by_mask.entry(mask).or_insert(obj);
    }
    // a set one object covers without passing through d of its points,
    // e.g. collinear points and planes
    if let Some(obj) = object_through(family, pts) {
        by_mask.insert((1u64 << pts.len()) - 1, obj);
    }
    let mut out: Vec<(u64, CoverObject)> = by_mask.into_iter().collect();
    out.sort_by(|a, b| b.0.count_ones().cmp(&a.0.count_ones()).then(a.0.cmp(&b.0)));
    out
}

struct Search<'a> {
    sets: &'a [(u64, CoverObject)],
    largest: u32,
    best: usize,
    best_pick: Option<Vec<usize>>,
    stop_at: usize,
}

impl Search<'_> {
    fn run(&mut self, uncovered: u64, pick: &mut Vec<usize>) {
        if uncovered == 0 {
            if pick.len() < self.best {
                self.best = pick.len();
                self.best_pick = Some(pick.clone());
            }
            return;
        }
        if self.best <= self.stop_at {
            return;
        }
        let lower = uncovered.count_ones().div_ceil(self.largest) as usize;
        if pick.len() + lower >= self.best {
            return;
        }
        let e = uncovered.trailing_zeros();
        for (i, (mask, _)) in self.sets.iter().enumerate() {
            if mask >> e & 1 == 1 {
                pick.push(i);
                self.run(uncovered & !mask, pick);
                pick.pop();
            }
        }
    }
}

fn validate(family: Family, pts: &[Point], cap: usize) -> Result<()> {
    check_dim(pts, family.dim())?;
    check_distinct(pts)?;
    let cap = cap.min(63);
    if pts.len() > cap {
        return Err(Error::CapExceeded { size: pts.len(), cap });
    }
    Ok(())
}

/// Best cover found with at most `limit` objects, stopping early once one
/// of size `stop_at` or less turns up.
fn search(family: Family, pts: &[Point], limit: usize, stop_at: usize) -> Option<Vec<CoverObject>> {
    if pts.is_empty() {
        return Some(Vec::new());
    }
    let sets = maximal_sets(family, pts);
    let largest = sets.iter().map(|s| s.0.count_ones()).max().unwrap_or(1).max(1);
    let mut s = Search { sets: &sets, largest, best: limit + 1, best_pick: None, stop_at };
    s.run((1u64 << pts.len()) - 1, &mut Vec::new());
    s.best_pick.map(|p| p.into_iter().map(|i| sets[i].1.clone()).collect())
}

/// Minimum number of objects covering `pts`, with a witness.
pub fn oracle_min_cover(family: Family, pts: &[Point], cap: usize) -> Result<OracleCover> {
    validate(family, pts, cap)?;
    let witness = search(family, pts, pts.len(), 0).expect("singletons always cover");
    Ok(OracleCover { opt: witness.len(), witness })
}

/// Whether at most `k` objects cover `pts`.
pub fn oracle_decide(family: Family, pts: &[Point], k: usize, cap: usize) -> Result<bool> {
    validate(family, pts, cap)?;
    Ok(search(family, pts, k, k).is_some())
}

/// Count of candidates covering at least `gamma` points, next to the
/// dominant term `n^d / gamma^(2d-1)` of the known upper bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RichCount {
    pub count: usize,
    pub dominant_term: Rational,
}

pub fn count_rich(family: Family, pts: &[Point], gamma: usize) -> Result<RichCount> {
    let d = family.d();
    if gamma < d {
        return Err(Error::InvalidArgument("gamma must be at least d".into()));
    }
    check_dim(pts, family.dim())?;
    check_distinct(pts)?;
    let count = enumerate_candidates(family, pts)
        .iter()
        .filter(|c| coverage(c, pts).len() >= gamma)
        .count();
    let num = num_traits::pow(BigInt::from(pts.len()), d);
    let den = num_traits::pow(BigInt::from(gamma), 2 * d - 1);
    Ok(RichCount { count, dominant_term: Rational::new(num, den) })
}

/// Whether `obj` covers `p`, by substitution into its coefficient vector.
fn on_object(obj: &CoverObject, p: &Point) -> bool {
    let c = obj.coefficients();
    let x = p.coords();
    match (obj.kind_tag(), x.len()) {
        ("line2", 2) => (&c[0] * &x[0] + &c[1] * &x[1] + &c[2]).is_zero(),
        ("circle2", 2) => {
            let dx = &x[0] - &c[0];
            let dy = &x[1] - &c[1];
            &dx * &dx + &dy * &dy == c[2]
        }
        ("vparabola2", 2) => &c[0] * &x[0] * &x[0] + &c[1] * &x[0] + &c[2] == x[1],
        ("plane3", 3) => (&c[0] * &x[0] + &c[1] * &x[1] + &c[2] * &x[2] + &c[3]).is_zero(),
        _ => false,
    }
}

fn well_formed(obj: &CoverObject) -> bool {
    let c = obj.coefficients();
    let lead_is_one = |xs: &[Rational]| {
        xs.iter().find(|v| !v.is_zero()).is_some_and(|v| v.is_one())
    };
    match obj.kind_tag() {
        "line2" => c.len() == 3 && lead_is_one(&c[..2]),
        "circle2" => c.len() == 3 && c[2] > Rational::zero(),
        "vparabola2" => c.len() == 3 && !c[0].is_zero(),
        "plane3" => c.len() == 4 && lead_is_one(&c[..3]),
        _ => false,
    }
}

/// Independent cover check: at most `k` well-formed objects of `family`
/// that together contain every point.
pub fn check_cover(family: Family, pts: &[Point], cover: &[CoverObject], k: usize) -> bool {
    cover.len() <= k
        && cover.iter().all(|o| well_formed(o) && o.kind_tag() == family.tag())
        && pts.iter().all(|p| cover.iter().any(|o| on_object(o, p)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{rat, Curve, CurveFamily};

    const LINES: Family = Family::Curve(CurveFamily::Line);

    fn p(x: i64, y: i64) -> Point {
        Point::int(&[x, y])
    }

    fn grid(n: i64) -> Vec<Point> {
        (0..n).flat_map(|x| (0..n).map(move |y| p(x, y))).collect()
    }

    #[test]
    fn grid_minimum() {
        let r = oracle_min_cover(LINES, &grid(3), ORACLE_CAP).unwrap();
        assert_eq!(r.opt, 3);
        assert!(check_cover(LINES, &grid(3), &r.witness, 3));
        assert!(!oracle_decide(LINES, &grid(3), 2, ORACLE_CAP).unwrap());
        assert!(oracle_decide(LINES, &grid(3), 3, ORACLE_CAP).unwrap());
    }

    #[test]
    fn small_minimums() {
        let circle = [p(5, 0), p(0, 5), p(3, 4), p(-4, 3), p(-3, -4), p(4, -3)];
        let fam = Family::Curve(CurveFamily::Circle);
        assert_eq!(oracle_min_cover(fam, &circle, ORACLE_CAP).unwrap().opt, 1);
        let general = [p(0, 0), p(1, 0), p(0, 1), p(3, 7)];
        assert_eq!(oracle_min_cover(LINES, &general, ORACLE_CAP).unwrap().opt, 2);
        assert_eq!(oracle_min_cover(LINES, &[], ORACLE_CAP).unwrap().opt, 0);
        let same_x = [p(0, 0), p(0, 1), p(0, 2)];
        let fam = Family::Curve(CurveFamily::VParabola);
        let r = oracle_min_cover(fam, &same_x, ORACLE_CAP).unwrap();
        assert_eq!(r.opt, 3);
        assert!(check_cover(fam, &same_x, &r.witness, 3));
    }

    #[test]
    fn collinear_points_need_one_plane() {
        let pts: Vec<Point> = (0..4).map(|t| Point::int(&[t, 2 * t + 1, 0])).collect();
        let r = oracle_min_cover(Family::Plane, &pts, ORACLE_CAP).unwrap();
        assert_eq!(r.opt, 1);
        assert!(check_cover(Family::Plane, &pts, &r.witness, 1));
        let pair = [p(0, 0), p(1, 1)];
        assert_eq!(oracle_min_cover(Family::Curve(CurveFamily::Circle), &pair, ORACLE_CAP).unwrap().opt, 1);
    }

    #[test]
    fn cap() {
        let pts: Vec<Point> = (0..17).map(|i| p(i, i * i)).collect();
        assert_eq!(
            oracle_min_cover(LINES, &pts, ORACLE_CAP),
            Err(Error::CapExceeded { size: 17, cap: 16 })
        );
    }

    #[test]
    fn rich_counts() {
        assert_eq!(count_rich(LINES, &grid(3), 3).unwrap().count, 8);
        assert_eq!(count_rich(LINES, &grid(3), 10).unwrap().count, 0);
        let line: Vec<Point> = (0..5).map(|i| p(i, 2 * i)).collect();
        let r = count_rich(LINES, &line, 5).unwrap();
        assert_eq!(r.count, 1);
        assert_eq!(r.dominant_term, Rational::new(25.into(), 125.into()));
    }

    #[test]
    fn checker_rejects_bad_covers() {
        let y0 = CoverObject::Curve(Curve::line(rat(0), rat(1), rat(0)).unwrap());
        assert!(check_cover(LINES, &[p(1, 0), p(7, 0)], &[y0.clone()], 1));
        assert!(!check_cover(LINES, &[p(1, 0), p(7, 1)], &[y0.clone()], 1));
        assert!(!check_cover(LINES, &[p(1, 0)], &[y0.clone(), y0.clone()], 1));
        let circle = CoverObject::Curve(Curve::circle(rat(0), rat(0), rat(1)).unwrap());
        assert!(!check_cover(LINES, &[p(1, 0)], &[circle], 1));
        assert!(check_cover(LINES, &[], &[], 0));
    }
}
