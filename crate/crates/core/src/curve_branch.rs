//! Richness-windowed branching for curve cover.
//!
//! After kernelization every candidate covers at most `s k` points. Depth
//! `i` of the search only considers candidates whose richness lies in
//! `[s k / 2^i, s k / 2^(i-1)]` and picks exactly `k_i` of them, where
//! `(k_1, ..., k_r)` is a budget partition fixed at the top. Small or
//! exhausted instances are handed to inclusion-exclusion.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::One;

use crate::combinatorics::Compositions;
use crate::error::{Error, Result};
use crate::geometry::{
    candidates_with_coverage, check_dim, check_distinct, coverage, enumerate_curve_candidates, is_coverable, object_through,
    CoverObject, Curve, CurveFamily, Family, Point, Rational,
};
use crate::ie::{extract_cover, ie_decide, Ground, MAX_GROUND};
use crate::kernel::curve_kernel;
use crate::stats::SearchStats;

/// Largest kernel the branching solvers accept (masks are `u128`).
pub const MAX_KERNEL_POINTS: usize = 128;

/// Settings shared by both branching solvers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchConfig {
    /// Multiplier `p / q` on `K_i log2 k` in the base-case test. `None`
    /// picks `(d - 1) / 2` for curves and 1 for planes.
    pub base_case_factor: Option<(u64, u64)>,
    /// Abort with [`Error::NodeLimit`] after this many search nodes.
    pub node_limit: Option<u64>,
    /// Build a witness on acceptance.
    pub witness: bool,
    /// Seed for the plane kernel's replacement points.
    pub seed: u64,
    /// Re-check invariants at every node against fresh enumerations.
    pub debug_checks: bool,
    /// A known cover, used only by the plane solver's debug accounting.
    pub planted: Option<Vec<CoverObject>>,
    /// Remember failed plane-search nodes and skip repeats.
    pub memo: bool,
}

impl Default for BranchConfig {
    fn default() -> Self {
        BranchConfig {
            base_case_factor: None,
            node_limit: None,
            witness: true,
            seed: 0,
            debug_checks: false,
            planted: None,
            memo: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchOutcome {
    pub decision: bool,
    /// Cover of the original points, present when accepted and requested.
    pub witness: Option<Vec<CoverObject>>,
    pub stats: SearchStats,
}

/// Smallest `r >= 1` with `2^r >= 4 s k / ((d - 1) log2 k)`, decided
/// exactly as `k^(2^r (d-1)) >= 2^(4 s k)`.
pub fn recursion_depth(k: usize, d: usize, s: usize) -> Result<usize> {
    if k < 2 {
        return Err(Error::InvalidArgument("recursion depth needs k >= 2".into()));
    }
    if d < 2 {
        return Err(Error::InvalidArgument("recursion depth needs d >= 2".into()));
    }
    let target = BigUint::one() << (4 * s * k);
    let base = BigUint::from(k);
    let mut r = 1usize;
    loop {
        let exp = (1u64 << r) * (d as u64 - 1);
        if base.pow(exp as u32) >= target {
            return Ok(r);
        }
        r += 1;
    }
}

/// Candidates whose richness over `pts` lies in `[lo, hi]`.
pub fn rich_poor_candidates(pts: &[Point], family: CurveFamily, lo: &Rational, hi: &Rational) -> Vec<Curve> {
    enumerate_curve_candidates(family, pts)
        .into_iter()
        .filter(|c| {
            let r = Rational::from_integer(coverage(&CoverObject::Curve(c.clone()), pts).len().into());
            lo <= &r && &r <= hi
        })
        .collect()
}

/// `2^a <= base^exp`.
pub(crate) fn pow2_le(a: u64, base: usize, exp: u64) -> bool {
    let lhs = BigUint::one() << a;
    BigUint::from(base).pow(exp as u32) >= lhs
}

/// `2^a < base^exp`.
pub(crate) fn pow2_lt(a: u64, base: usize, exp: u64) -> bool {
    let lhs = BigUint::one() << a;
    BigUint::from(base).pow(exp as u32) > lhs
}

pub(crate) fn popcount(x: u128) -> usize {
    x.count_ones() as usize
}

pub(crate) fn bits(x: u128) -> impl Iterator<Item = usize> {
    (0..128).filter(move |&i| x >> i & 1 == 1)
}

pub(crate) fn bump_node(stats: &mut SearchStats, depth: usize, limit: Option<u64>) -> Result<()> {
    stats.nodes_expanded += 1;
    stats.max_depth = stats.max_depth.max(depth as u32);
    match limit {
        Some(l) if stats.nodes_expanded > l => Err(Error::NodeLimit(l)),
        _ => Ok(()),
    }
}

/// Visits in lexicographic order the `r`-subsets of positions in `counts`
/// (sorted in descending order) whose counts sum to at least `need`,
/// stopping at the first `Some`.
pub(crate) fn choose_bounded<T>(
    counts: &[usize],
    r: usize,
    need: usize,
    visit: &mut dyn FnMut(&[usize]) -> Result<Option<T>>,
) -> Result<Option<T>> {
    debug_assert!(counts.windows(2).all(|w| w[0] >= w[1]));
    let mut prefix = alloc::vec![0usize; counts.len() + 1];
    for (j, c) in counts.iter().enumerate() {
        prefix[j + 1] = prefix[j] + c;
    }
    let mut pick = Vec::with_capacity(r);
    choose_from(&prefix, 0, r, 0, need, &mut pick, visit)
}

fn choose_from<T>(
    prefix: &[usize],
    start: usize,
    left: usize,
    sum: usize,
    need: usize,
    pick: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]) -> Result<Option<T>>,
) -> Result<Option<T>> {
    if left == 0 {
        return if sum >= need { visit(pick) } else { Ok(None) };
    }
    let n = prefix.len() - 1;
    for j in start..(n + 1).saturating_sub(left) {
        // the best completion from here takes the next `left` positions
        if sum + prefix[j + left] - prefix[j] < need {
            break;
        }
        pick.push(j);
        let found = choose_from(prefix, j + 1, left - 1, sum + prefix[j + 1] - prefix[j], need, pick, visit)?;
        pick.pop();
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Choice {
    /// A global candidate, by index.
    Candidate(usize),
    /// A coverable set smaller than `d`, as a mask of kernel points.
    Small(u128),
}

/// The prepared search for one kernelized instance.
#[derive(Debug, Clone)]
pub struct CurveSearch {
    family: CurveFamily,
    points: Vec<Point>,
    k: usize,
    r: usize,
    factor: (u64, u64),
    forced: Vec<CoverObject>,
    /// Every curve through at least `d` kernel points, canonical order.
    candidates: Vec<(u128, CoverObject)>,
    /// `pair_ok[i]` has bit `j` set when points `i` and `j` share a curve.
    pair_ok: Vec<u128>,
    config: BranchConfig,
}

/// Either an immediate answer or a search over budget partitions.
#[derive(Debug, Clone)]
pub enum CurvePlan {
    Decided(BranchOutcome),
    Search(CurveSearch),
}

fn ie_leaf(
    ground: &Ground,
    budget: usize,
    want_witness: bool,
    stats: &mut SearchStats,
) -> Result<Option<Vec<CoverObject>>> {
    stats.leaves_ie += 1;
    let out = ie_decide(ground, budget, MAX_GROUND)?;
    stats.ie_subsets += out.subsets;
    if !out.decision {
        return Ok(None);
    }
    if want_witness {
        Ok(Some(extract_cover(ground, budget, MAX_GROUND)?))
    } else {
        Ok(Some(Vec::new()))
    }
}

fn join(prefix: &[CoverObject], rest: Vec<CoverObject>) -> Vec<CoverObject> {
    let mut v = prefix.to_vec();
    v.extend(rest);
    v
}

/// Kernelizes and either answers directly or sets up the search.
pub fn prepare_curve_cover(
    pts: &[Point],
    family: CurveFamily,
    k: usize,
    config: &BranchConfig,
) -> Result<CurvePlan> {
    check_dim(pts, 2)?;
    check_distinct(pts)?;
    let mut stats = SearchStats::default();
    let kernel = curve_kernel(pts, family, k)?;
    let decided = |decision: bool, witness: Option<Vec<CoverObject>>, stats: SearchStats| {
        Ok(CurvePlan::Decided(BranchOutcome { decision, witness, stats }))
    };
    if kernel.is_rejected() {
        return decided(false, None, stats);
    }
    let forced = kernel.forced;
    let points = kernel.points;
    let k = kernel.k;
    if points.is_empty() {
        return decided(true, config.witness.then_some(forced), stats);
    }
    if points.len() > MAX_KERNEL_POINTS {
        return Err(Error::CapExceeded { size: points.len(), cap: MAX_KERNEL_POINTS });
    }
    let d = family.d();
    let factor = config.base_case_factor.unwrap_or((d as u64 - 1, 2));
    let n = points.len() as u64;
    if k < 2 || pow2_le(n * factor.1, k, factor.0 * k as u64) {
        let ground = Ground::curve_points(family, points);
        let found = ie_leaf(&ground, k, config.witness, &mut stats)?;
        let decision = found.is_some();
        let witness = found.filter(|_| config.witness).map(|w| join(&forced, w));
        return decided(decision, witness, stats);
    }
    let r = recursion_depth(k, d, family.s())?;
    let candidates: Vec<(u128, CoverObject)> = candidates_with_coverage(Family::Curve(family), &points)
        .into_iter()
        .map(|(obj, cov)| (cov.into_iter().fold(0u128, |m, i| m | 1 << i), obj))
        .collect();
    let mut pair_ok = alloc::vec![0u128; points.len()];
    if d >= 3 {
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if is_coverable(family, &[points[i].clone(), points[j].clone()]) {
                    pair_ok[i] |= 1 << j;
                    pair_ok[j] |= 1 << i;
                }
            }
        }
    }
    Ok(CurvePlan::Search(CurveSearch {
        family,
        points,
        k,
        r,
        factor,
        forced,
        candidates,
        pair_ok,
        config: config.clone(),
    }))
}

impl CurveSearch {
    pub fn depth(&self) -> usize {
        self.r
    }

    pub fn budget(&self) -> usize {
        self.k
    }

    pub fn kernel_points(&self) -> &[Point] {
        &self.points
    }

    /// All budget partitions, lexicographically.
    pub fn partitions(&self) -> Compositions {
        Compositions::new(self.k, self.r)
    }

    fn s(&self) -> u128 {
        self.family.s() as u128
    }

    /// `c >= s k / 2^i`
    fn rich(&self, c: usize, i: usize) -> bool {
        (c as u128) << i >= self.s() * self.k as u128
    }

    /// `c <= s k / 2^(i-1)`
    fn poor(&self, c: usize, i: usize) -> bool {
        (c as u128) << (i - 1) <= self.s() * self.k as u128
    }

    fn in_window(&self, c: usize, i: usize) -> bool {
        self.rich(c, i) && self.poor(c, i)
    }

    fn ground(&self, p: u128) -> Ground {
        Ground::curve_points(self.family, bits(p).map(|i| self.points[i].clone()).collect())
    }

    fn object(&self, c: Choice) -> CoverObject {
        match c {
            Choice::Candidate(i) => self.candidates[i].1.clone(),
            Choice::Small(m) => {
                let pts: Vec<Point> = bits(m).map(|i| self.points[i].clone()).collect();
                object_through(Family::Curve(self.family), &pts).expect("coverable small set")
            }
        }
    }

    /// Distinct restrictions to `p` of every curve in the depth-`i` window,
    /// richest first.
    fn window(&self, p: u128, i: usize) -> Vec<(u128, Choice)> {
        let mut seen: BTreeMap<u128, Choice> = BTreeMap::new();
        for (ci, (mask, _)) in self.candidates.iter().enumerate() {
            let m = mask & p;
            if self.in_window(popcount(m), i) {
                seen.entry(m).or_insert(Choice::Candidate(ci));
            }
        }
        // Curves meeting the current points in fewer than d of them.
        if self.in_window(1, i) {
            for a in bits(p) {
                seen.entry(1 << a).or_insert(Choice::Small(1 << a));
            }
        }
        if self.family.d() >= 3 && self.in_window(2, i) {
            for a in bits(p) {
                for b in bits(self.pair_ok[a] & p).filter(|&b| b > a) {
                    let m = 1u128 << a | 1 << b;
                    seen.entry(m).or_insert(Choice::Small(m));
                }
            }
        }
        let mut out: Vec<(u128, Choice)> = seen.into_iter().collect();
        out.sort_by(|a, b| popcount(b.0).cmp(&popcount(a.0)).then(a.1.cmp(&b.1)));
        out
    }

    fn check_window(&self, p: u128, i: usize, window: &[(u128, Choice)]) -> Result<()> {
        let idx: Vec<usize> = bits(p).collect();
        let pts: Vec<Point> = idx.iter().map(|&g| self.points[g].clone()).collect();
        for c in enumerate_curve_candidates(self.family, &pts) {
            let cov = coverage(&CoverObject::Curve(c), &pts);
            if self.in_window(cov.len(), i) {
                let mask = cov.iter().fold(0u128, |m, &j| m | 1 << idx[j]);
                if !window.iter().any(|w| w.0 == mask) {
                    return Err(Error::Internal("window misses a candidate".into()));
                }
            }
        }
        Ok(())
    }

    fn node(
        &self,
        p: u128,
        parts: &[usize],
        i: usize,
        partial: &mut Vec<CoverObject>,
        stats: &mut SearchStats,
    ) -> Result<Option<Vec<CoverObject>>> {
        bump_node(stats, i, self.config.node_limit)?;
        let n = popcount(p);
        if n == 0 {
            return Ok(Some(partial.clone()));
        }
        let budget: usize = parts[i - 1..].iter().sum();
        // reject when n > K_i s k / 2^(i-1)
        if (n as u128) << (i - 1) > budget as u128 * self.s() * self.k as u128 {
            stats.leaves_rejected += 1;
            return Ok(None);
        }
        let (fp, fq) = self.factor;
        if i == self.r || pow2_le(n as u64 * fq, self.k, fp * budget as u64) {
            let found = ie_leaf(&self.ground(p), budget, self.config.witness, stats)?;
            return Ok(found.map(|w| join(partial, w)));
        }
        let window = self.window(p, i);
        if self.config.debug_checks {
            self.check_window(p, i, &window)?;
        }
        // children left with more than this many points reject at once
        let child_cap = ((budget - parts[i - 1]) as u128 * self.s() * self.k as u128) >> i;
        let need = n.saturating_sub(child_cap.min(n as u128) as usize);
        let counts: Vec<usize> = window.iter().map(|w| popcount(w.0)).collect();
        choose_bounded(&counts, parts[i - 1], need, &mut |pick| {
            let covered = pick.iter().fold(0u128, |m, &j| m | window[j].0);
            let before = partial.len();
            if self.config.witness {
                partial.extend(pick.iter().map(|&j| self.object(window[j].1)));
            }
            let found = self.node(p & !covered, parts, i + 1, partial, stats)?;
            partial.truncate(before);
            Ok(found)
        })
    }

    /// Runs one budget partition. On acceptance returns the witness (the
    /// kernel's forced curves first; empty when witnesses are off).
    pub fn run_partition(
        &self,
        parts: &[usize],
        stats: &mut SearchStats,
    ) -> Result<Option<Vec<CoverObject>>> {
        if parts.len() != self.r || parts.iter().sum::<usize>() != self.k {
            return Err(Error::InvalidArgument("partition does not match the search".into()));
        }
        stats.partitions_tried += 1;
        let all = if self.points.len() == 128 { u128::MAX } else { (1u128 << self.points.len()) - 1 };
        let mut partial = if self.config.witness { self.forced.clone() } else { Vec::new() };
        self.node(all, parts, 1, &mut partial, stats)
    }
}

/// Decides whether at most `k` curves of `family` cover `pts`.
pub fn curve_cover(
    pts: &[Point],
    family: CurveFamily,
    k: usize,
    config: &BranchConfig,
) -> Result<BranchOutcome> {
    let search = match prepare_curve_cover(pts, family, k, config)? {
        CurvePlan::Decided(out) => return Ok(out),
        CurvePlan::Search(s) => s,
    };
    let mut stats = SearchStats::default();
    for parts in search.partitions() {
        if let Some(w) = search.run_partition(&parts, &mut stats)? {
            return Ok(BranchOutcome {
                decision: true,
                witness: config.witness.then_some(w),
                stats,
            });
        }
    }
    Ok(BranchOutcome { decision: false, witness: None, stats })
}
