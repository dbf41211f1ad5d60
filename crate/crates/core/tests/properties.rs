use pointcover_core::combinatorics::Combinations;
use pointcover_core::curve_branch::{curve_cover, BranchConfig};
use pointcover_core::geometry::{
    candidates_with_coverage, coverage, curve_through, curves_intersect, dedup_points, enumerate_candidates,
    is_coverable, max_collinear,
};
use pointcover_core::ie::{c_count, ie_decide, Ground, DEFAULT_CAP};
use pointcover_core::kernel::{curve_kernel, plane_kernel_r3};
use pointcover_core::oracle::{oracle_decide, ORACLE_CAP};
use pointcover_core::plane_branch::plane_cover;
use pointcover_core::{CoverObject, CurveFamily, Family, Point};
use proptest::prelude::*;
use std::collections::BTreeSet;

const FAMILIES: [CurveFamily; 3] = [CurveFamily::Line, CurveFamily::Circle, CurveFamily::VParabola];

fn family() -> impl Strategy<Value = CurveFamily> {
    prop::sample::select(FAMILIES.to_vec())
}

/// Distinct planar points, biased toward collinear and cocircular clumps.
fn planar(max: usize) -> impl Strategy<Value = Vec<Point>> {
    let grid = prop::collection::vec((-3i64..=3, -3i64..=3), 0..=max);
    let circle = prop::collection::vec(0usize..8, 0..=4);
    (grid, circle).prop_map(move |(g, c)| {
        // integer points on x^2 + y^2 = 25
        const RING: [(i64, i64); 8] = [(5, 0), (0, 5), (-5, 0), (0, -5), (3, 4), (-4, 3), (-3, -4), (4, -3)];
        let mut pts: Vec<Point> = g.into_iter().map(|(x, y)| Point::int(&[x, y])).collect();
        pts.extend(c.into_iter().map(|i| Point::int(&[RING[i].0, RING[i].1])));
        let mut pts = dedup_points(&pts);
        pts.truncate(max);
        pts
    })
}

fn spatial(max: usize) -> impl Strategy<Value = Vec<Point>> {
    let free = prop::collection::vec((-2i64..=2, -2i64..=2, -2i64..=2), 0..=max);
    let line = 0usize..6;
    (free, line).prop_map(move |(f, l)| {
        let mut pts: Vec<Point> = (0..l as i64).map(|t| Point::int(&[t, 2 * t - 1, 3])).collect();
        pts.extend(f.into_iter().map(|(x, y, z)| Point::int(&[x, y, z])));
        let mut pts = dedup_points(&pts);
        pts.truncate(max);
        pts
    })
}

fn subset(pts: &[Point], mask: u64) -> Vec<Point> {
    (0..pts.len()).filter(|i| mask >> i & 1 == 1).map(|i| pts[i].clone()).collect()
}

/// Coverable subsets of `mask` (the empty set included), by brute force.
fn brute_c(family: Family, pts: &[Point], mask: u64) -> u64 {
    let mut count = 0;
    let mut s = mask;
    loop {
        let sub = subset(pts, s);
        let ok = match family {
            Family::Curve(f) => is_coverable(f, &sub),
            Family::Plane => sub.len() <= 3 || pointcover_core::geometry::object_through(Family::Plane, &sub).is_some(),
        };
        count += ok as u64;
        if s == 0 {
            break;
        }
        s = (s - 1) & mask;
    }
    count
}

fn ground(family: Family, pts: &[Point]) -> Ground {
    match family {
        Family::Curve(f) => Ground::curve_points(f, pts.to_vec()),
        Family::Plane => Ground::space_points(pts),
    }
}

fn orderings(pts: &[Point], shift: usize) -> Vec<Vec<Point>> {
    let mut rev = pts.to_vec();
    rev.reverse();
    let mut rot = pts.to_vec();
    if !rot.is_empty() {
        let by = shift % rot.len();
        rot.rotate_left(by);
    }
    vec![pts.to_vec(), rev, rot]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn curves_through_points_cover_them(fam in family(), pts in planar(3)) {
        let head = &pts[..pts.len().min(fam.s() + 1)];
        for c in curve_through(fam, head).unwrap() {
            prop_assert!(head.iter().all(|p| c.covers(p)));
        }
    }

    #[test]
    fn distinct_candidates_meet_in_at_most_s_points(fam in family(), pts in planar(7)) {
        let cands = enumerate_candidates(Family::Curve(fam), &pts);
        for (i, a) in cands.iter().enumerate() {
            for b in &cands[i + 1..] {
                let (CoverObject::Curve(a), CoverObject::Curve(b)) = (a, b) else { unreachable!() };
                let x = curves_intersect(a, b).unwrap();
                prop_assert!(x.len() <= fam.s());
                prop_assert!(x.points.iter().all(|p| a.covers(p) && b.covers(p)));
            }
        }
    }

    #[test]
    fn enumeration_matches_naive(fam in family(), pts in planar(8)) {
        // naive: the curve through every d-subset that has one
        let d = fam.d();
        let mut naive = BTreeSet::new();
        let mut comb = Combinations::new(pts.len(), d);
        while let Some(idx) = comb.next_combination() {
            let sub: Vec<Point> = idx.iter().map(|&i| pts[i].clone()).collect();
            for c in curve_through(fam, &sub[..d.min(fam.s() + 1)]).unwrap() {
                if sub.iter().all(|p| c.covers(p)) {
                    naive.insert(CoverObject::Curve(c));
                }
            }
        }
        let got: BTreeSet<CoverObject> = enumerate_candidates(Family::Curve(fam), &pts).into_iter().collect();
        prop_assert_eq!(&got, &naive);
        let with_cov = candidates_with_coverage(Family::Curve(fam), &pts);
        prop_assert_eq!(with_cov.len(), got.len());
        for (obj, cov) in with_cov {
            prop_assert_eq!(cov, coverage(&obj, &pts));
        }
    }

    #[test]
    fn coverable_counts_match_brute_force(fam in family(), pts in planar(9), shift in 0usize..9, mask in any::<u64>()) {
        for order in orderings(&pts, shift) {
            let x = mask & ((1u64 << order.len()) - 1);
            let f = Family::Curve(fam);
            prop_assert_eq!(c_count(&ground(f, &order), x).unwrap(), brute_c(f, &order, x));
        }
    }

    #[test]
    fn flat_counts_match_brute_force(pts in spatial(9), shift in 0usize..9, mask in any::<u64>()) {
        for order in orderings(&pts, shift) {
            let x = mask & ((1u64 << order.len()) - 1);
            prop_assert_eq!(c_count(&ground(Family::Plane, &order), x).unwrap(), brute_c(Family::Plane, &order, x));
        }
    }

    #[test]
    fn coverable_count_is_monotone(fam in family(), pts in planar(9), a in any::<u64>(), b in any::<u64>()) {
        let full = (1u64 << pts.len()) - 1;
        let (small, big) = (a & b & full, (a | b) & full);
        let g = ground(Family::Curve(fam), &pts);
        prop_assert!(c_count(&g, small).unwrap() <= c_count(&g, big).unwrap());
    }

    #[test]
    fn signed_sum_is_nonnegative_and_grows(fam in family(), pts in planar(9)) {
        let g = ground(Family::Curve(fam), &pts);
        let sums: Vec<_> = (0..=4).map(|k| ie_decide(&g, k, DEFAULT_CAP).unwrap().sum).collect();
        for w in sums.windows(2) {
            prop_assert!(w[0] >= 0.into());
            prop_assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn curve_kernel_bounds(fam in family(), pts in planar(12), k in 0usize..=4) {
        let kr = curve_kernel(&pts, fam, k).unwrap();
        prop_assert_eq!(kr.forced.len() + kr.k, k);
        if !kr.is_rejected() {
            let s = fam.s();
            prop_assert!(kr.points.len() <= s * kr.k * kr.k);
            for obj in enumerate_candidates(Family::Curve(fam), &kr.points) {
                prop_assert!(coverage(&obj, &kr.points).len() <= s * kr.k.max(1));
            }
        }
        let direct = oracle_decide(Family::Curve(fam), &pts, k, ORACLE_CAP).unwrap();
        let reduced = !kr.is_rejected() && oracle_decide(Family::Curve(fam), &kr.points, kr.k, ORACLE_CAP).unwrap();
        prop_assert_eq!(direct, reduced);
    }

    #[test]
    fn plane_kernel_bounds(pts in spatial(10), k in 1usize..=3, seed in 0u64..4) {
        let kr = plane_kernel_r3(&pts, k, seed).unwrap();
        prop_assert_eq!(kr.forced.len() + kr.k, k);
        if !kr.is_rejected() {
            prop_assert!(kr.points.len() <= k * k * k + k * k);
            prop_assert!(max_collinear(&kr.points).0 <= k + 1);
        }
        let direct = oracle_decide(Family::Plane, &pts, k, ORACLE_CAP).unwrap();
        let reduced = !kr.is_rejected() && oracle_decide(Family::Plane, &kr.points, kr.k, ORACLE_CAP).unwrap();
        prop_assert_eq!(direct, reduced);
    }

    #[test]
    fn curve_decision_is_monotone(fam in family(), pts in planar(10)) {
        let cfg = BranchConfig { witness: false, ..Default::default() };
        let ds: Vec<bool> = (0..=4).map(|k| curve_cover(&pts, fam, k, &cfg).unwrap().decision).collect();
        prop_assert!(ds.windows(2).all(|w| !w[0] || w[1]));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, ..ProptestConfig::default() })]

    #[test]
    fn plane_decision_is_monotone(pts in spatial(9)) {
        let cfg = BranchConfig { witness: false, ..Default::default() };
        let ds: Vec<bool> = (0..=3).map(|k| plane_cover(&pts, k, &cfg).unwrap().decision).collect();
        prop_assert!(ds.windows(2).all(|w| !w[0] || w[1]));
    }
}
