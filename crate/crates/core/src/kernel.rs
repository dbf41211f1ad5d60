//! Polynomial kernels.
//!
//! [`curve_kernel`] forces every curve that is too rich to be avoided and
//! leaves at most `s k^2` points. [`plane_kernel_r3`] first makes every line
//! carry at most `k + 1` points, then forces rich planes the same way with
//! `s = k + 1`, leaving at most `k^3 + k^2` points.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::geometry::{
    candidates_with_coverage, check_dim, check_distinct, collinear_groups, line_through, CoverObject,
    CurveFamily, Family, Flat, Point, Rational,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Reduced,
    Rejected,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelResult {
    /// Remaining points, in their original relative order; re-added points
    /// come last.
    pub points: Vec<Point>,
    /// Remaining budget, `k - forced.len()`.
    pub k: usize,
    /// Objects every cover within the budget must use.
    pub forced: Vec<CoverObject>,
    pub verdict: Verdict,
}

impl KernelResult {
    pub fn is_rejected(&self) -> bool {
        self.verdict == Verdict::Rejected
    }
}

/// Repeatedly takes the richest candidate covering more than
/// `s_bound * k` points (ties by canonical order), forces it and drops its
/// points. Returns the surviving point indices, forced objects and the
/// remaining budget.
fn force_rich(
    family: Family,
    pts: &[Point],
    mut k: usize,
    s_bound: usize,
) -> (Vec<usize>, Vec<CoverObject>, usize) {
    let candidates = candidates_with_coverage(family, pts);
    let mut alive: Vec<bool> = alloc::vec![true; pts.len()];
    let mut forced = Vec::new();
    while k > 0 {
        let threshold = s_bound * k + 1;
        let mut best: Option<(usize, usize)> = None;
        for (ci, (_, cov)) in candidates.iter().enumerate() {
            let r = cov.iter().filter(|&&i| alive[i]).count();
            if r >= threshold && best.map_or(true, |(_, br)| r > br) {
                best = Some((ci, r));
            }
        }
        let Some((ci, _)) = best else { break };
        for &i in &candidates[ci].1 {
            alive[i] = false;
        }
        forced.push(candidates[ci].0.clone());
        k -= 1;
    }
    let rest = (0..pts.len()).filter(|&i| alive[i]).collect();
    (rest, forced, k)
}

fn finish(points: Vec<Point>, k: usize, forced: Vec<CoverObject>, s_bound: usize) -> KernelResult {
    let rejected = if k == 0 { !points.is_empty() } else { points.len() > s_bound * k * k };
    KernelResult {
        points,
        k,
        forced,
        verdict: if rejected { Verdict::Rejected } else { Verdict::Reduced },
    }
}

/// Kernel for covering planar points with at most `k` curves of `family`.
pub fn curve_kernel(pts: &[Point], family: CurveFamily, k: usize) -> Result<KernelResult> {
    check_dim(pts, 2)?;
    check_distinct(pts)?;
    let s = family.s();
    let (rest, forced, k) = force_rich(Family::Curve(family), pts, k, s);
    let points = rest.into_iter().map(|i| pts[i].clone()).collect();
    Ok(finish(points, k, forced, s))
}

/// Every line through at least two points, with the indices it covers.
fn lines_with_points(pts: &[Point]) -> BTreeMap<Flat, BTreeSet<usize>> {
    collinear_groups(pts)
        .into_iter()
        .map(|on| {
            let line = line_through(&pts[on[0]], &pts[on[1]]).expect("distinct points");
            (line, on.into_iter().collect())
        })
        .collect()
}

fn collinear3(a: &Point, b: &Point, c: &Point) -> bool {
    let u: Vec<Rational> = (0..3).map(|i| &b.coords()[i] - &a.coords()[i]).collect();
    let v: Vec<Rational> = (0..3).map(|i| &c.coords()[i] - &a.coords()[i]).collect();
    &u[1] * &v[2] == &u[2] * &v[1] && &u[2] * &v[0] == &u[0] * &v[2] && &u[0] * &v[1] == &u[1] * &v[0]
}

const SAMPLE_RETRIES: usize = 64;

/// A new point on `line` that coincides with no point of `pts` and lies on
/// no line through two points of `pts`, except for pairs on `line` itself.
fn general_position_point(line: &Flat, pts: &[Point], rng: &mut ChaCha8Rng) -> Point {
    let off: Vec<&Point> = pts.iter().filter(|p| !line.contains_point(p)).collect();
    let on: Vec<&Point> = pts.iter().filter(|p| line.contains_point(p)).collect();
    let mut range: i64 = 16 * (pts.len() as i64 + 1);
    loop {
        for _ in 0..SAMPLE_RETRIES {
            let t = rng.gen_range(-range..=range);
            let q = line.point_at(&Rational::from_integer(BigInt::from(t))).expect("a line");
            if on.iter().any(|p| **p == q) {
                continue;
            }
            // A line through q and an off-line point meets `line` only at q,
            // so pairs with one point on `line` are harmless; pairs of
            // off-line points are the ones to avoid.
            let clash = (0..off.len())
                .any(|a| (a + 1..off.len()).any(|b| collinear3(&q, off[a], off[b])));
            if !clash {
                return q;
            }
        }
        range = range.saturating_mul(2);
    }
}

/// Kernel for covering points in three-space with at most `k` planes.
///
/// Lines with at least `k + 2` points are trimmed to exactly `k + 1`
/// (dropping the latest points in input order). Any other line that held at
/// least `k + 1` points and lost some gets fresh points in general position
/// until it holds `k + 1` again. Then planes covering more than
/// `(k + 1) * k'` points, `k'` the remaining budget, are forced.
///
/// The same `seed` always produces the same output.
pub fn plane_kernel_r3(pts: &[Point], k: usize, seed: u64) -> Result<KernelResult> {
    check_dim(pts, 3)?;
    check_distinct(pts)?;
    if k == 0 {
        return Ok(finish(pts.to_vec(), 0, Vec::new(), 1));
    }
    let s = k + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur: Vec<Point> = pts.to_vec();
    loop {
        let lines = lines_with_points(&cur);
        let heavy = lines
            .iter()
            .filter(|(_, on)| on.len() >= k + 2)
            .max_by(|a, b| a.1.len().cmp(&b.1.len()).then_with(|| b.0.cmp(a.0)));
        let Some((line, on)) = heavy else { break };
        let line = line.clone();
        let drop: BTreeSet<usize> = on.iter().rev().take(on.len() - (k + 1)).copied().collect();

        // Lines through a dropped point that fall below k + 1.
        let mut damaged: BTreeSet<Flat> = BTreeSet::new();
        for (l, pts_on) in &lines {
            if *l == line || pts_on.len() < k + 1 || pts_on.is_disjoint(&drop) {
                continue;
            }
            if pts_on.len() - pts_on.intersection(&drop).count() < k + 1 {
                damaged.insert(l.clone());
            }
        }

        cur = cur
            .into_iter()
            .enumerate()
            .filter(|(i, _)| !drop.contains(i))
            .map(|(_, p)| p)
            .collect();
        for l in damaged {
            while cur.iter().filter(|p| l.contains_point(p)).count() < k + 1 {
                let q = general_position_point(&l, &cur, &mut rng);
                cur.push(q);
            }
        }
    }

    let (rest, forced, k_left) = force_rich(Family::Plane, &cur, k, s);
    let points = rest.into_iter().map(|i| cur[i].clone()).collect();
    Ok(finish(points, k_left, forced, s))
}

/// Dispatches to the kernel for `family`; `seed` only matters for planes.
pub fn kernelize(family: Family, pts: &[Point], k: usize, seed: u64) -> Result<KernelResult> {
    match family {
        Family::Curve(f) => curve_kernel(pts, f, k),
        Family::Plane => plane_kernel_r3(pts, k, seed),
    }
}

/// Largest number of points on one line (for the plane kernel's bound).
pub fn max_line_richness(pts: &[Point]) -> usize {
    crate::geometry::max_collinear(pts).0
}
