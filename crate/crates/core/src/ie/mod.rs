//! Inclusion-exclusion deciders.
//!
//! A ground set has a cover by `k` objects iff
//! `sum over X ⊆ ground of (-1)^(|ground|-|X|) c(X)^k >= 1`, where `c(X)` is
//! the number of coverable subsets of `X` (the empty set included). The sum
//! counts `k`-tuples of coverable sets whose union is the whole ground.
//!
//! `c(X)` is never computed by enumerating subsets of `X`. Each nonempty
//! coverable set has a unique representative, a short prefix in ground
//! order, and the coverable sets sharing a representative `R` are exactly
//! `R` plus any subset of a "free" set determined by `R`. So
//! `c(X) = 1 + sum over R ⊆ X of 2^|free(R) ∩ X|`, and a table of
//! `(R, free(R))` bitmasks over the whole ground serves every `X`.
//!
//! Elements are ordered by their index in the ground.

mod extract;

pub use extract::extract_cover;

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::combinatorics::Combinations;
use crate::error::{Error, Result};
use crate::geometry::{fast, affine_hull, curve_through, is_coverable, CoverObject, CurveFamily, Flat, Point};

/// Default limit on the ground size.
pub const DEFAULT_CAP: usize = 26;
/// Hard limit imposed by the `u64` masks.
pub const MAX_GROUND: usize = 63;

/// The elements to be covered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ground {
    /// Planar points covered by curves of one family.
    Points { family: CurveFamily, points: Vec<Point> },
    /// Points and lines in three-space (as 0- and 1-flats) covered by
    /// planes; a plane covers a flat when it contains it.
    Flats(Vec<Flat>),
}

impl Ground {
    pub fn curve_points(family: CurveFamily, points: Vec<Point>) -> Ground {
        Ground::Points { family, points }
    }

    pub fn space_points(points: &[Point]) -> Ground {
        Ground::Flats(points.iter().map(Flat::point).collect())
    }

    pub fn len(&self) -> usize {
        match self {
            Ground::Points { points, .. } => points.len(),
            Ground::Flats(f) => f.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Whether `obj` covers element `i`.
    pub fn covered_by(&self, obj: &CoverObject, i: usize) -> bool {
        match (self, obj) {
            (Ground::Points { points, .. }, CoverObject::Curve(c)) => c.covers(&points[i]),
            (Ground::Flats(f), CoverObject::Plane(h)) => h.covers_flat(&f[i]),
            _ => false,
        }
    }

    /// Whether one object covers every element in `idx`.
    pub fn is_coverable(&self, idx: &[usize]) -> bool {
        match self {
            Ground::Points { family, points } => {
                let pts: Vec<Point> = idx.iter().map(|&i| points[i].clone()).collect();
                is_coverable(*family, &pts)
            }
            Ground::Flats(f) => match hull_of(f, idx) {
                None => true,
                Some(h) => h.dim() <= 2,
            },
        }
    }

    /// Longest possible representative.
    fn max_rep(&self) -> usize {
        match self {
            Ground::Points { family, .. } => family.s() + 1,
            Ground::Flats(_) => 3,
        }
    }
}

fn hull_of(flats: &[Flat], idx: &[usize]) -> Option<Flat> {
    if idx.is_empty() {
        return None;
    }
    let sel: Vec<Flat> = idx.iter().map(|&i| flats[i].clone()).collect();
    Some(affine_hull(&sel).expect("nonempty"))
}

/// The representative of a coverable set `q` (element indices, any order).
///
/// For curves it is the first `min(|q|, s + 1)` elements. For flats it is
/// built greedily: the first element, then repeatedly the first element not
/// inside the hull of those chosen so far.
pub fn representative(ground: &Ground, q: &[usize]) -> Result<Vec<usize>> {
    let mut q = q.to_vec();
    q.sort_unstable();
    q.dedup();
    if !ground.is_coverable(&q) {
        return Err(Error::NotCoverable);
    }
    match ground {
        Ground::Points { family, .. } => {
            q.truncate(family.s() + 1);
            Ok(q)
        }
        Ground::Flats(f) => {
            let mut rep: Vec<usize> = Vec::new();
            let mut hull: Option<Flat> = None;
            for &i in &q {
                let inside = hull.as_ref().is_some_and(|h| h.contains_flat(&f[i]));
                if !inside {
                    rep.push(i);
                    hull = Some(match hull {
                        None => f[i].clone(),
                        Some(h) => h.join(&f[i]),
                    });
                }
            }
            Ok(rep)
        }
    }
}

/// One table row: a valid representative and its free elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Entry {
    pub req: u64,
    pub free: u64,
}

/// The `(req, free)` row for representative `rep` (ascending indices), or
/// `None` if `rep` represents no coverable set.
fn entry_for(ground: &Ground, rep: &[usize]) -> Option<Entry> {
    let (&first, _) = rep.split_first()?;
    let &last = rep.last()?;
    let req = rep.iter().fold(0u64, |m, &i| m | 1 << i);
    let n = ground.len();
    match ground {
        Ground::Points { family, points } => {
            if rep.len() <= family.s() {
                return ground.is_coverable(rep).then_some(Entry { req, free: 0 });
            }
            if rep.len() > family.s() + 1 {
                return None;
            }
            let pts: Vec<Point> = rep.iter().map(|&i| points[i].clone()).collect();
            let curves = curve_through(*family, &pts).ok()?;
            // s + 1 points lie on at most one curve of the family
            let curve = curves.first()?;
            debug_assert!(curves.len() == 1);
            let free = (last + 1..n)
                .filter(|&i| curve.covers(&points[i]))
                .fold(0u64, |m, i| m | 1 << i);
            Some(Entry { req, free })
        }
        Ground::Flats(f) => {
            // prefix hulls, each strictly larger than the last
            let mut hulls: Vec<Flat> = Vec::with_capacity(rep.len());
            for &i in rep {
                let next = match hulls.last() {
                    None => f[i].clone(),
                    Some(h) => {
                        if h.contains_flat(&f[i]) {
                            return None;
                        }
                        h.join(&f[i])
                    }
                };
                hulls.push(next);
            }
            if hulls.last()?.dim() > 2 {
                return None;
            }
            let mut free = 0u64;
            let mut j = 0;
            for y in first + 1..n {
                while j + 1 < rep.len() && rep[j + 1] < y {
                    j += 1;
                }
                if !rep.contains(&y) && hulls[j].contains_flat(&f[y]) {
                    free |= 1 << y;
                }
            }
            Some(Entry { req, free })
        }
    }
}

fn generic_entries(ground: &Ground) -> Vec<Entry> {
    let m = ground.len();
    let mut entries = Vec::new();
    for size in 1..=ground.max_rep().min(m) {
        let mut comb = Combinations::new(m, size);
        while let Some(rep) = comb.next_combination() {
            if let Some(e) = entry_for(ground, rep) {
                entries.push(e);
            }
        }
    }
    entries
}

/// The table rows of a ground of points and lines, on integer
/// coordinates. Same rows in the same order as the generic route; `None`
/// when the ground holds planes or the coordinates are too large.
fn int_entries(ground: &Ground) -> Option<Vec<Entry>> {
    let Ground::Flats(f) = ground else { return None };
    // each flat as the integer points spanning it
    let mut pts: Vec<Point> = Vec::new();
    let mut spans: Vec<core::ops::Range<usize>> = Vec::with_capacity(f.len());
    for x in f {
        if x.dim() > 1 {
            return None;
        }
        let start = pts.len();
        let base = x.base();
        if let Some(d) = x.basis().first() {
            let c = base.coords();
            let tip = [&c[0] + &d[0], &c[1] + &d[1], &c[2] + &d[2]];
            pts.push(base);
            pts.push(Point::xyz(tip[0].clone(), tip[1].clone(), tip[2].clone()));
        } else {
            pts.push(base);
        }
        spans.push(start..pts.len());
    }
    let v = fast::int_coords(&pts)?;
    let gens: Vec<&[fast::V]> = spans.into_iter().map(|r| &v[r]).collect();
    let m = f.len();
    let mut entries = Vec::new();
    for size in 1..=3.min(m) {
        let mut comb = Combinations::new(m, size);
        while let Some(rep) = comb.next_combination() {
            let mut hulls: Vec<fast::Hull> = Vec::with_capacity(size);
            let mut ok = true;
            for &i in rep {
                let mut h = hulls.last().cloned().unwrap_or_default();
                if !hulls.is_empty() && h.contains_all(gens[i]) {
                    ok = false;
                    break;
                }
                for g in gens[i] {
                    h.add(g);
                }
                hulls.push(h);
            }
            if !ok || hulls.last().map_or(true, |h| h.dim() > 2) {
                continue;
            }
            let mut free = 0u64;
            let mut j = 0;
            for y in rep[0] + 1..m {
                while j + 1 < rep.len() && rep[j + 1] < y {
                    j += 1;
                }
                if !rep.contains(&y) && hulls[j].contains_all(gens[y]) {
                    free |= 1 << y;
                }
            }
            entries.push(Entry { req: rep.iter().fold(0u64, |s, &i| s | 1 << i), free });
        }
    }
    Some(entries)
}

/// Number of coverable subsets of `x` whose representative is `rep`.
/// Zero when `rep` is not a valid representative or not inside `x`.
pub fn q_count(ground: &Ground, x: u64, rep: &[usize]) -> u64 {
    let mut rep = rep.to_vec();
    rep.sort_unstable();
    let req = rep.iter().fold(0u64, |m, &i| m | 1 << i);
    if rep.is_empty() {
        return 1;
    }
    if req & !x != 0 {
        return 0;
    }
    match entry_for(ground, &rep) {
        Some(e) => 1u64 << (e.free & x).count_ones(),
        None => 0,
    }
}

/// All valid representatives of a ground with their free sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageTable {
    m: usize,
    entries: Vec<Entry>,
}

impl CoverageTable {
    pub fn build(ground: &Ground) -> Result<CoverageTable> {
        let m = ground.len();
        if m > MAX_GROUND {
            return Err(Error::CapExceeded { size: m, cap: MAX_GROUND });
        }
        let entries = int_entries(ground).unwrap_or_else(|| generic_entries(ground));
        Ok(CoverageTable { m, entries })
    }

    pub fn ground_len(&self) -> usize {
        self.m
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn full_mask(&self) -> u64 {
        if self.m == 64 {
            u64::MAX
        } else {
            (1u64 << self.m) - 1
        }
    }

    /// Size of the largest coverable set.
    pub fn largest_set(&self) -> usize {
        self.entries.iter().map(|e| (e.req | e.free).count_ones() as usize).max().unwrap_or(0)
    }

    /// Number of coverable subsets of `x`, the empty set included.
    #[inline]
    pub fn c_count(&self, x: u64) -> u64 {
        let mut c = 1u64;
        for e in &self.entries {
            if e.req & !x == 0 {
                c += 1u64 << (e.free & x).count_ones();
            }
        }
        c
    }
}

/// `c(x)` straight from the ground, for one-off queries.
pub fn c_count(ground: &Ground, x: u64) -> Result<u64> {
    Ok(CoverageTable::build(ground)?.c_count(x))
}

/// Largest budget whose partial sums fit the `i128` fast path for a
/// ground of `m` elements: every partial sum is bounded by `2^(m(k+1))`.
fn fast_k_limit(m: usize) -> usize {
    if m == 0 {
        return usize::MAX;
    }
    (125 / m).saturating_sub(1)
}

/// Signed sums `sum over X in xs of (-1)^(|y|-|X|) c(X)^k` for every
/// `k` in `1..=kmax` (entry `k-1`), where each `X` must be a subset of `y`.
pub fn sweep_sums(
    table: &CoverageTable,
    y: u64,
    xs: impl Iterator<Item = u64>,
    kmax: usize,
) -> Vec<BigInt> {
    let m = y.count_ones() as usize;
    let kfast = fast_k_limit(m).min(kmax);
    let mut fast = alloc::vec![0i128; kfast];
    let mut slow = alloc::vec![BigInt::zero(); kmax - kfast];
    let ypar = y.count_ones() & 1;
    for x in xs {
        let c = table.c_count(x);
        let negative = (x.count_ones() & 1) != ypar;
        let mut p: i128 = 1;
        for acc in fast.iter_mut() {
            p *= c as i128;
            if negative {
                *acc -= p;
            } else {
                *acc += p;
            }
        }
        if !slow.is_empty() {
            let mut big = BigInt::from(p);
            for acc in slow.iter_mut() {
                big *= c;
                if negative {
                    *acc -= &big;
                } else {
                    *acc += &big;
                }
            }
        }
    }
    fast.into_iter().map(BigInt::from).chain(slow).collect()
}

/// Submasks of `y`, all of them, in decreasing order.
pub fn submasks(y: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(y);
    core::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & y) };
        Some(cur)
    })
}

/// The inclusion-exclusion sum for covering the elements of `y` with `k`
/// objects.
pub fn ie_sum_over(table: &CoverageTable, y: u64, k: usize) -> BigInt {
    if k == 0 {
        return if y == 0 { BigInt::one() } else { BigInt::zero() };
    }
    sweep_sums(table, y, submasks(y), k).pop().expect("k >= 1")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IeOutcome {
    pub decision: bool,
    /// Number of `k`-tuples of coverable sets whose union is the ground.
    pub sum: BigInt,
    /// Subset terms evaluated.
    pub subsets: u64,
}

fn check_cap(ground: &Ground, cap: usize) -> Result<()> {
    let cap = cap.min(MAX_GROUND);
    if ground.len() > cap {
        return Err(Error::CapExceeded { size: ground.len(), cap });
    }
    Ok(())
}

/// Decides whether `k` objects cover the ground.
pub fn ie_decide(ground: &Ground, k: usize, cap: usize) -> Result<IeOutcome> {
    check_cap(ground, cap)?;
    let table = CoverageTable::build(ground)?;
    if table.largest_set() * k < ground.len() {
        // no k coverable sets reach every element, so every tuple misses one
        return Ok(IeOutcome { decision: false, sum: BigInt::zero(), subsets: 0 });
    }
    let full = table.full_mask();
    let sum = ie_sum_over(&table, full, k);
    debug_assert!(!sum.is_negative());
    Ok(IeOutcome { decision: sum >= BigInt::one(), sum, subsets: 1u64 << ground.len() })
}

/// Smallest `k` for which `k` objects cover the ground, from a single
/// sweep that keeps one accumulator per budget.
pub fn ie_min_cover(ground: &Ground, cap: usize) -> Result<usize> {
    check_cap(ground, cap)?;
    let m = ground.len();
    if m == 0 {
        return Ok(0);
    }
    let table = CoverageTable::build(ground)?;
    let full = table.full_mask();
    let sums = sweep_sums(&table, full, 0..=full, m);
    min_budget(&sums).ok_or_else(|| Error::Internal("no budget up to n covers the ground".into()))
}

/// First budget (1-based position) whose sum is positive.
pub fn min_budget(sums: &[BigInt]) -> Option<usize> {
    sums.iter().position(|s| s.is_positive()).map(|i| i + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn p(x: i64, y: i64) -> Point {
        Point::int(&[x, y])
    }

    fn lines(points: Vec<Point>) -> Ground {
        Ground::curve_points(CurveFamily::Line, points)
    }

    fn grid(n: i64) -> Vec<Point> {
        (0..n).flat_map(|x| (0..n).map(move |y| p(x, y))).collect()
    }

    #[test]
    fn representatives() {
        let g = lines(vec![p(0, 0), p(1, 0), p(2, 0)]);
        assert_eq!(representative(&g, &[0, 1, 2]).unwrap(), vec![0, 1]);
        assert_eq!(representative(&g, &[]).unwrap(), Vec::<usize>::new());
        let g = lines(vec![p(0, 0), p(1, 0), p(0, 1)]);
        assert_eq!(representative(&g, &[0, 1, 2]), Err(Error::NotCoverable));
        let g = Ground::space_points(&[
            Point::int(&[0, 0, 0]),
            Point::int(&[1, 0, 0]),
            Point::int(&[0, 1, 0]),
        ]);
        assert_eq!(representative(&g, &[2, 0, 1]).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn q_examples() {
        let g = lines(vec![p(0, 0), p(1, 0), p(2, 0), p(0, 1)]);
        assert_eq!(q_count(&g, 0b1111, &[0, 1]), 2);
        assert_eq!(q_count(&g, 0b1111, &[0]), 1);
        // coplanar, no three collinear: R and R plus the fourth point
        let g = Ground::space_points(&[
            Point::int(&[0, 0, 0]),
            Point::int(&[1, 0, 0]),
            Point::int(&[0, 1, 0]),
            Point::int(&[1, 1, 0]),
        ]);
        assert_eq!(q_count(&g, 0b1111, &[0, 1, 2]), 2);
    }

    #[test]
    fn c_examples() {
        let g = lines(vec![p(0, 0), p(1, 0), p(0, 1)]);
        assert_eq!(c_count(&g, 0b111).unwrap(), 7);
        let g = lines(vec![p(0, 0), p(1, 1), p(2, 2)]);
        assert_eq!(c_count(&g, 0b111).unwrap(), 8);
        assert_eq!(c_count(&g, 0).unwrap(), 1);
    }

    #[test]
    fn decide_examples() {
        let one = lines(vec![p(4, 4)]);
        let r = ie_decide(&one, 1, DEFAULT_CAP).unwrap();
        assert_eq!(r.sum, BigInt::from(1));
        assert!(r.decision);

        let tri = lines(vec![p(0, 0), p(1, 0), p(0, 1)]);
        assert!(!ie_decide(&tri, 1, DEFAULT_CAP).unwrap().decision);
        assert!(ie_decide(&tri, 2, DEFAULT_CAP).unwrap().decision);
        let col = lines(vec![p(0, 0), p(1, 1), p(2, 2)]);
        assert!(ie_decide(&col, 1, DEFAULT_CAP).unwrap().decision);
        assert!(ie_decide(&lines(vec![]), 0, DEFAULT_CAP).unwrap().decision);
        assert!(!ie_decide(&one, 0, DEFAULT_CAP).unwrap().decision);
    }

    #[test]
    fn anyflat_points_and_line() {
        let pts = [Point::int(&[0, 0, 0]), Point::int(&[1, 0, 0])];
        let mut flats: Vec<Flat> = pts.iter().map(Flat::point).collect();
        // a line in z = 0 is coplanar with both points
        let line = crate::geometry::line_through(&Point::int(&[0, 1, 0]), &Point::int(&[1, 2, 0]))
            .unwrap();
        flats.push(line);
        assert!(ie_decide(&Ground::Flats(flats.clone()), 1, DEFAULT_CAP).unwrap().decision);
        // lift the line out of the plane, skew to the x-axis
        flats[2] = crate::geometry::line_through(&Point::int(&[0, 1, 1]), &Point::int(&[0, 2, 1]))
            .unwrap();
        assert!(!ie_decide(&Ground::Flats(flats.clone()), 1, DEFAULT_CAP).unwrap().decision);
        assert!(ie_decide(&Ground::Flats(flats), 2, DEFAULT_CAP).unwrap().decision);
    }

    #[test]
    fn min_covers() {
        assert_eq!(ie_min_cover(&lines(grid(3)), DEFAULT_CAP).unwrap(), 3);
        let circle = Ground::curve_points(
            CurveFamily::Circle,
            vec![p(5, 0), p(0, 5), p(3, 4), p(-4, 3), p(-3, -4)],
        );
        assert_eq!(ie_min_cover(&circle, DEFAULT_CAP).unwrap(), 1);
        let general = lines(vec![p(0, 0), p(1, 0), p(0, 1), p(3, 7)]);
        assert_eq!(ie_min_cover(&general, DEFAULT_CAP).unwrap(), 2);
        assert_eq!(ie_min_cover(&lines(vec![]), DEFAULT_CAP).unwrap(), 0);
    }

    #[test]
    fn cap_is_enforced() {
        let g = lines((0..30).map(|i| p(i, i * i)).collect());
        assert_eq!(
            ie_decide(&g, 2, DEFAULT_CAP),
            Err(Error::CapExceeded { size: 30, cap: 26 })
        );
    }

    #[test]
    fn fast_and_slow_paths_agree() {
        // m = 9 puts k <= 12 on the i128 path; compare against BigInt powers
        let g = lines(grid(3));
        let table = CoverageTable::build(&g).unwrap();
        let full = table.full_mask();
        let sums = sweep_sums(&table, full, 0..=full, 16);
        for (i, s) in sums.iter().enumerate() {
            let k = i as u32 + 1;
            let mut direct = BigInt::zero();
            for x in 0..=full {
                let term = num_traits::pow(BigInt::from(table.c_count(x)), k as usize);
                if (9 - x.count_ones()) % 2 == 0 {
                    direct += term;
                } else {
                    direct -= term;
                }
            }
            assert_eq!(*s, direct, "k = {k}");
        }
    }

    #[test]
    fn integer_rows_match_generic_rows() {
        let line = |a: &Point, b: &Point| crate::geometry::line_through(a, b).unwrap();
        let cube: Vec<Point> = (0..8).map(|m| Point::int(&[m & 1, m >> 1 & 1, m >> 2 & 1])).collect();
        let mut mixed: Vec<Point> = (0..4).map(|t| Point::int(&[t, 2 * t, 0])).collect();
        mixed.extend([Point::int(&[1, 7, 0]), Point::int(&[3, 1, 4]), Point::int(&[0, 0, 5])]);
        mixed.push(Point::xyz(crate::geometry::ratio(1, 2), crate::geometry::rat(1), crate::geometry::rat(0)));
        for pts in [cube.clone(), mixed.clone()] {
            let g = Ground::space_points(&pts);
            let fast = int_entries(&g).expect("small integer points");
            assert_eq!(fast, generic_entries(&g));
        }
        // points mixed with lines, some coplanar, one through a point
        let mut flats: Vec<Flat> = mixed.iter().map(Flat::point).collect();
        flats.insert(2, line(&mixed[0], &mixed[5]));
        flats.push(line(&cube[0], &cube[3]));
        flats.push(line(&cube[5], &cube[6]));
        flats.insert(0, line(&mixed[1], &mixed[2]));
        let g = Ground::Flats(flats);
        assert_eq!(int_entries(&g).unwrap(), generic_entries(&g));
        let big = Ground::space_points(&[Point::int(&[1 << 40, 0, 0])]);
        assert!(int_entries(&big).is_none());
    }

    #[test]
    fn early_rejection_matches_the_sum() {
        // 3 x 3 grid: largest line holds 3 points, so two lines reach 6 < 9
        let g = lines(grid(3));
        let out = ie_decide(&g, 2, DEFAULT_CAP).unwrap();
        assert_eq!((out.decision, out.subsets), (false, 0));
        let table = CoverageTable::build(&g).unwrap();
        assert_eq!(ie_sum_over(&table, table.full_mask(), 2), out.sum);
    }

    #[test]
    fn submask_enumeration() {
        let all: Vec<u64> = submasks(0b101).collect();
        assert_eq!(all, vec![0b101, 0b100, 0b001, 0]);
        assert_eq!(submasks(0).collect::<Vec<_>>(), vec![0]);
    }
}
