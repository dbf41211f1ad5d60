use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_traits::One;

use super::{check_cap, ie_sum_over, CoverageTable, Ground};
use crate::combinatorics::Combinations;
use crate::error::{Error, Result};
use crate::geometry::{curve_through, CoverObject, Point};

fn indices(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Objects covering element `e` that a cover of `rem` might use: every
/// object through `e` and enough other elements of `rem` to pin it down,
/// plus canonical completions of smaller sets containing `e`.
fn objects_through(ground: &Ground, rem: u64, e: usize) -> Vec<CoverObject> {
    let others: Vec<usize> = indices(rem & !(1u64 << e));
    let mut out: BTreeSet<CoverObject> = BTreeSet::new();
    match ground {
        Ground::Points { family, points } => {
            for extra in 0..family.d() {
                let mut comb = Combinations::new(others.len(), extra);
                while let Some(c) = comb.next_combination() {
                    let mut pts: Vec<Point> = Vec::with_capacity(extra + 1);
                    pts.push(points[e].clone());
                    pts.extend(c.iter().map(|&j| points[others[j]].clone()));
                    if let Ok(curves) = curve_through(*family, &pts) {
                        // below d points only the first completion matters
                        let take = if extra + 1 < family.d() { 1 } else { curves.len() };
                        out.extend(curves.into_iter().take(take).map(CoverObject::Curve));
                    }
                }
            }
        }
        Ground::Flats(f) => {
            if let Some(h) = f[e].completion_plane() {
                out.insert(CoverObject::Plane(h));
            }
            for (a, &x) in others.iter().enumerate() {
                let ex = f[e].join(&f[x]);
                match ex.dim() {
                    0..=2 => {
                        out.extend(ex.completion_plane().map(CoverObject::Plane));
                    }
                    _ => continue,
                }
                if ex.dim() < 2 {
                    for &y in &others[a + 1..] {
                        let exy = ex.join(&f[y]);
                        if exy.dim() == 2 {
                            out.extend(exy.completion_plane().map(CoverObject::Plane));
                        }
                    }
                }
            }
        }
    }
    out.into_iter().collect()
}

/// A concrete cover of the ground by at most `k` objects, found by
/// self-reduction: the first uncovered element is given the first object
/// after which the remaining elements still fit in the remaining budget.
pub fn extract_cover(ground: &Ground, k: usize, cap: usize) -> Result<Vec<CoverObject>> {
    check_cap(ground, cap)?;
    let table = CoverageTable::build(ground)?;
    let feasible = |y: u64, budget: usize| ie_sum_over(&table, y, budget) >= One::one();
    let mut rem = table.full_mask();
    if !feasible(rem, k) {
        return Err(Error::InvalidArgument("no cover within the budget".into()));
    }
    let mut budget = k;
    let mut cover = Vec::new();
    while rem != 0 {
        let e = rem.trailing_zeros() as usize;
        let mut options: Vec<(u64, CoverObject)> = objects_through(ground, rem, e)
            .into_iter()
            .map(|obj| {
                let covered = indices(rem)
                    .into_iter()
                    .filter(|&i| ground.covered_by(&obj, i))
                    .fold(0u64, |m, i| m | 1 << i);
                (covered, obj)
            })
            .collect();
        options.sort_by(|a, b| b.0.count_ones().cmp(&a.0.count_ones()).then_with(|| a.1.cmp(&b.1)));
        let pick = options
            .into_iter()
            .find(|(covered, _)| covered >> e & 1 == 1 && feasible(rem & !covered, budget - 1))
            .ok_or_else(|| Error::Internal("no object keeps the instance feasible".into()))?;
        rem &= !pick.0;
        budget -= 1;
        cover.push(pick.1);
    }
    Ok(cover)
}
