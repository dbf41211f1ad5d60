//! Incidence grouping on small integer coordinates.
//!
//! Scaling every point by a common denominator preserves collinearity and
//! coplanarity, so when the scaled coordinates stay below `2^30` all
//! incidence tests fit in `i128` cross products and determinants. Callers
//! fall back to the rational route when [`int_coords`] gives `None`.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use super::Point;

const LIMIT: i128 = 1 << 30;

pub(crate) type V = [i128; 3];

/// Coordinates scaled to integers (padded to three), if all stay small.
pub(crate) fn int_coords(pts: &[Point]) -> Option<Vec<V>> {
    let mut den = BigInt::one();
    for p in pts {
        for c in p.coords() {
            den = den.lcm(c.denom());
        }
    }
    pts.iter()
        .map(|p| {
            let mut v = [0i128; 3];
            for (slot, c) in v.iter_mut().zip(p.coords()) {
                let x = (c.numer() * (&den / c.denom())).to_i128()?;
                if x.abs() >= LIMIT {
                    return None;
                }
                *slot = x;
            }
            Some(v)
        })
        .collect()
}

fn sub(a: &V, b: &V) -> V {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: &V, b: &V) -> V {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: &V, b: &V) -> i128 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// The affine hull of some integer points, grown one point at a time.
#[derive(Debug, Clone, Default)]
pub(crate) struct Hull {
    origin: Option<V>,
    dirs: Vec<V>,
    /// Set once the hull is a plane.
    normal: Option<V>,
}

impl Hull {
    pub(crate) fn dim(&self) -> usize {
        self.dirs.len()
    }

    pub(crate) fn contains(&self, p: &V) -> bool {
        let Some(o) = &self.origin else { return false };
        let w = sub(p, o);
        match self.dirs.len() {
            0 => w == [0, 0, 0],
            1 => cross(&self.dirs[0], &w) == [0, 0, 0],
            2 => dot(self.normal.as_ref().expect("set with the second direction"), &w) == 0,
            _ => true,
        }
    }

    pub(crate) fn contains_all(&self, ps: &[V]) -> bool {
        ps.iter().all(|p| self.contains(p))
    }

    pub(crate) fn add(&mut self, p: &V) {
        let Some(o) = self.origin else {
            self.origin = Some(*p);
            return;
        };
        if self.contains(p) {
            return;
        }
        self.dirs.push(sub(p, &o));
        if self.dirs.len() == 2 {
            self.normal = Some(cross(&self.dirs[0], &self.dirs[1]));
        }
    }
}

/// Every line through two or more points, as sorted index lists.
pub(crate) fn line_groups(v: &[V]) -> Vec<Vec<usize>> {
    let n = v.len();
    let mut out = Vec::new();
    let mut done = vec![vec![false; n]; n];
    for a in 0..n {
        for b in a + 1..n {
            if done[a][b] {
                continue;
            }
            let d = sub(&v[b], &v[a]);
            let on: Vec<usize> =
                (0..n).filter(|&p| cross(&d, &sub(&v[p], &v[a])) == [0, 0, 0]).collect();
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

/// Every plane through three non-collinear points, as a spanning triple
/// and the sorted indices it contains.
pub(crate) fn plane_groups(v: &[V]) -> Vec<([usize; 3], Vec<usize>)> {
    let n = v.len();
    let mut out = Vec::new();
    let mut seen = vec![false; n];
    for a in 0..n {
        for b in a + 1..n {
            let d = sub(&v[b], &v[a]);
            for s in seen.iter_mut() {
                *s = false;
            }
            for c in b + 1..n {
                if seen[c] {
                    continue;
                }
                let normal = cross(&d, &sub(&v[c], &v[a]));
                if normal == [0, 0, 0] {
                    seen[c] = true;
                    continue;
                }
                let on: Vec<usize> = (0..n).filter(|&p| dot(&normal, &sub(&v[p], &v[a])) == 0).collect();
                for &p in &on {
                    seen[p] = true;
                }
                // each plane is reported from its two smallest indices
                if on[0] == a && on[1] == b {
                    out.push(([a, b, c], on));
                }
            }
        }
    }
    out
}
