use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use super::{
    fast, affine_hull, curve_through, is_coverable, line_through, plane_through, rat, CoverObject, Curve, CurveFamily,
    Family, Flat, Plane3, Point,
};
use crate::combinatorics::Combinations;

/// Number of points of `pts` covered by `obj`.
pub fn richness(obj: &CoverObject, pts: &[Point]) -> usize {
    pts.iter().filter(|p| obj.covers(p)).count()
}

/// Indices of the points of `pts` covered by `obj`.
pub fn coverage(obj: &CoverObject, pts: &[Point]) -> Vec<usize> {
    (0..pts.len()).filter(|&i| obj.covers(&pts[i])).collect()
}

/// Every curve of `family` through at least `d` points of `pts`, each once,
/// in canonical order.
pub fn enumerate_curve_candidates(family: CurveFamily, pts: &[Point]) -> Vec<Curve> {
    let d = family.d();
    let mut out = BTreeSet::new();
    let mut comb = Combinations::new(pts.len(), d);
    while let Some(idx) = comb.next_combination() {
        let subset: Vec<Point> = idx.iter().map(|&i| pts[i].clone()).collect();
        if let Ok(curves) = curve_through(family, &subset) {
            out.extend(curves);
        }
    }
    out.into_iter().collect()
}

/// Every plane through three affinely independent points of `pts`, each
/// once, in canonical order.
pub fn enumerate_plane_candidates(pts: &[Point]) -> Vec<Plane3> {
    let mut out = BTreeSet::new();
    let n = pts.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if let Ok(h) = plane_through(&pts[i], &pts[j], &pts[k]) {
                    out.insert(h);
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Candidates of either kind, through at least `d` points.
pub fn enumerate_candidates(family: Family, pts: &[Point]) -> Vec<CoverObject> {
    match family {
        Family::Curve(f) => {
            enumerate_curve_candidates(f, pts).into_iter().map(CoverObject::Curve).collect()
        }
        Family::Plane => {
            enumerate_plane_candidates(pts).into_iter().map(CoverObject::Plane).collect()
        }
    }
}

/// [`enumerate_candidates`] paired with each candidate's [`coverage`].
pub fn candidates_with_coverage(family: Family, pts: &[Point]) -> Vec<(CoverObject, Vec<usize>)> {
    let fast = match family {
        Family::Curve(CurveFamily::Line) | Family::Plane => fast::int_coords(pts),
        _ => None,
    };
    let Some(v) = fast else {
        return enumerate_candidates(family, pts)
            .into_iter()
            .map(|c| {
                let cov = coverage(&c, pts);
                (c, cov)
            })
            .collect();
    };
    let mut out: Vec<(CoverObject, Vec<usize>)> = match family {
        Family::Plane => fast::plane_groups(&v)
            .into_iter()
            .map(|([a, b, c], on)| {
                let h = plane_through(&pts[a], &pts[b], &pts[c]).expect("non-collinear");
                (CoverObject::Plane(h), on)
            })
            .collect(),
        _ => fast::line_groups(&v)
            .into_iter()
            .map(|on| {
                let pair = [pts[on[0]].clone(), pts[on[1]].clone()];
                let line = curve_through(CurveFamily::Line, &pair).expect("distinct points");
                (CoverObject::Curve(line[0].clone()), on)
            })
            .collect(),
    };
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Every line in three-space through two or more of `pts`, as sorted index
/// lists, one per line.
pub fn collinear_groups(pts: &[Point]) -> Vec<Vec<usize>> {
    if let Some(v) = fast::int_coords(pts) {
        return fast::line_groups(&v);
    }
    let n = pts.len();
    let mut out = Vec::new();
    let mut done = vec![vec![false; n]; n];
    for a in 0..n {
        for b in a + 1..n {
            if done[a][b] {
                continue;
            }
            let line = line_through(&pts[a], &pts[b]).expect("distinct points");
            let on: Vec<usize> = (0..n).filter(|&i| line.contains_point(&pts[i])).collect();
            for (x, &i) in on.iter().enumerate() {
                for &j in &on[x + 1..] {
                    done[i][j] = true;
                }
            }
            out.push(on);
        }
    }
    out
}

/// Whether one object of `family` covers all of `pts`.
pub fn family_covers_all(family: Family, pts: &[Point]) -> bool {
    match family {
        Family::Curve(f) => is_coverable(f, pts),
        Family::Plane => object_through(family, pts).is_some(),
    }
}

/// Some object of `family` covering every point of `pts`, if one exists.
/// For sets smaller than `d` this is a canonical completion.
pub fn object_through(family: Family, pts: &[Point]) -> Option<CoverObject> {
    match family {
        Family::Curve(f) => {
            let head = pts.len().min(f.s() + 1);
            let curves = curve_through(f, &pts[..head]).ok()?;
            curves
                .into_iter()
                .find(|c| pts[head..].iter().all(|p| c.covers(p)))
                .map(CoverObject::Curve)
        }
        Family::Plane => {
            if pts.is_empty() {
                let z0 = Plane3::new(rat(0), rat(0), rat(1), rat(0)).ok()?;
                return Some(CoverObject::Plane(z0));
            }
            let flats: Vec<Flat> = pts.iter().map(Flat::point).collect();
            let hull = affine_hull(&flats).ok()?;
            hull.completion_plane().map(CoverObject::Plane)
        }
    }
}

/// Coverable index sets with fewer than `d` points that no larger
/// coverable set of `pts` contains.
///
/// `candidate_sets` must hold the coverage of every candidate through at
/// least `d` points. Together with those, the result lists every maximal
/// coverable subset of `pts`.
pub fn small_coverable_sets(
    family: Family,
    pts: &[Point],
    candidate_sets: &[Vec<usize>],
) -> Vec<Vec<usize>> {
    let n = pts.len();
    let d = family.d();
    let mut in_candidate = vec![false; n];
    let mut pair_in_candidate = vec![vec![false; n]; n];
    for set in candidate_sets {
        for (a, &i) in set.iter().enumerate() {
            in_candidate[i] = true;
            for &j in &set[a + 1..] {
                pair_in_candidate[i][j] = true;
                pair_in_candidate[j][i] = true;
            }
        }
    }
    let mut out = Vec::new();
    let mut in_pair = vec![false; n];
    if d >= 3 {
        for i in 0..n {
            for j in i + 1..n {
                if family_covers_all(family, &[pts[i].clone(), pts[j].clone()]) {
                    in_pair[i] = true;
                    in_pair[j] = true;
                    if !pair_in_candidate[i][j] {
                        out.push(vec![i, j]);
                    }
                }
            }
        }
    }
    for i in 0..n {
        if !in_candidate[i] && !in_pair[i] {
            out.push(vec![i]);
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{dedup_points, ratio};

    fn p(x: i64, y: i64) -> Point {
        Point::int(&[x, y])
    }

    fn slow_route(family: Family, pts: &[Point]) -> Vec<(CoverObject, Vec<usize>)> {
        enumerate_candidates(family, pts)
            .into_iter()
            .map(|c| {
                let cov = coverage(&c, pts);
                (c, cov)
            })
            .collect()
    }

    #[test]
    fn integer_route_agrees() {
        let planar: Vec<Point> = (0..16).map(|i| Point::xy(ratio(i % 4, 3), ratio(i / 4 + (i % 3), 2))).collect();
        let planar = dedup_points(&planar);
        let fam = Family::Curve(CurveFamily::Line);
        assert_eq!(candidates_with_coverage(fam, &planar), slow_route(fam, &planar));
        let space: Vec<Point> = (0..14)
            .map(|i| Point::xyz(ratio(i % 3, 2), ratio(i % 5, 1), ratio((i * i) % 7, 3)))
            .collect();
        assert_eq!(candidates_with_coverage(Family::Plane, &space), slow_route(Family::Plane, &space));
        let groups = collinear_groups(&space);
        for a in 0..space.len() {
            for b in a + 1..space.len() {
                let l = line_through(&space[a], &space[b]).unwrap();
                let on: Vec<usize> = (0..space.len()).filter(|&i| l.contains_point(&space[i])).collect();
                assert!(groups.contains(&on));
            }
        }
    }

    #[test]
    fn richness_examples() {
        let y0 = CoverObject::Curve(Curve::line(rat(0), rat(1), rat(0)).unwrap());
        assert_eq!(richness(&y0, &[p(0, 0), p(1, 0), p(1, 1)]), 2);
        assert_eq!(richness(&y0, &[]), 0);
        let c = CoverObject::Curve(Curve::circle(rat(0), rat(0), rat(25)).unwrap());
        assert_eq!(richness(&c, &[p(3, 4), p(5, 0), p(0, 5), p(1, 1)]), 3);
    }

    #[test]
    fn line_candidate_counts() {
        let line = CurveFamily::Line;
        assert_eq!(enumerate_curve_candidates(line, &[p(0, 0), p(1, 0), p(0, 1)]).len(), 3);
        assert_eq!(enumerate_curve_candidates(line, &[p(0, 0), p(1, 1), p(2, 2)]).len(), 1);
        let grid = [p(0, 0), p(0, 1), p(1, 0), p(1, 1)];
        assert_eq!(enumerate_curve_candidates(line, &grid).len(), 6);
    }

    #[test]
    fn grid_candidates_match_pair_loop() {
        // independent count: distinct lines through pairs, keyed by the
        // pair's full point set
        let grid: Vec<Point> = (0..3).flat_map(|x| (0..3).map(move |y| p(x, y))).collect();
        let mut sets = BTreeSet::new();
        for i in 0..9 {
            for j in i + 1..9 {
                let (a, b) = (&grid[i], &grid[j]);
                let on: Vec<usize> = (0..9)
                    .filter(|&t| {
                        let c = &grid[t];
                        (b.x() - a.x()) * (c.y() - a.y()) == (b.y() - a.y()) * (c.x() - a.x())
                    })
                    .collect();
                sets.insert(on);
            }
        }
        assert_eq!(enumerate_curve_candidates(CurveFamily::Line, &grid).len(), sets.len());
        assert_eq!(sets.len(), 20);
    }

    #[test]
    fn small_sets_for_lines_and_circles() {
        let fam = Family::Curve(CurveFamily::Line);
        assert_eq!(small_coverable_sets(fam, &[p(0, 0)], &[]), vec![vec![0]]);
        // collinear triple: every pair lies on the one circle-free line,
        // so for circles the pairs are maximal
        let pts = [p(0, 0), p(1, 1), p(2, 2)];
        let fam = Family::Curve(CurveFamily::Circle);
        assert_eq!(
            small_coverable_sets(fam, &pts, &[]),
            vec![vec![0, 1], vec![0, 2], vec![1, 2]]
        );
        // parabola: points sharing x are never together
        let pts = [p(0, 0), p(0, 1)];
        let fam = Family::Curve(CurveFamily::VParabola);
        assert_eq!(small_coverable_sets(fam, &pts, &[]), vec![vec![0], vec![1]]);
    }

    #[test]
    fn objects_through_small_sets() {
        let fam = Family::Plane;
        let pts = [Point::int(&[1, 2, 3]), Point::int(&[2, 2, 3])];
        let h = object_through(fam, &pts).unwrap();
        assert!(pts.iter().all(|q| h.covers(q)));
        assert!(object_through(fam, &[]).is_some());
        let fam = Family::Curve(CurveFamily::VParabola);
        assert!(object_through(fam, &[p(0, 0), p(0, 1)]).is_none());
        assert!(object_through(fam, &[p(0, 0), p(1, 1), p(2, 4), p(3, 9)]).is_some());
    }
}
