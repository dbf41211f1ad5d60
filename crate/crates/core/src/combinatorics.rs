//! Lexicographic combinations and compositions.

use alloc::vec::Vec;

/// Lexicographic enumeration of the `k`-subsets of `0..n`.
///
/// Not an `Iterator`: each combination is lent out as a slice so no
/// allocation happens per step.
#[derive(Debug, Clone)]
pub struct Combinations {
    n: usize,
    idx: Vec<usize>,
    started: bool,
    done: bool,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Combinations { n, idx: (0..k).collect(), started: false, done: k > n }
    }

    pub fn next_combination(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.idx);
        }
        let k = self.idx.len();
        let mut i = k;
        while i > 0 {
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                return Some(&self.idx);
            }
        }
        self.done = true;
        None
    }
}

/// All compositions of `total` into `parts` nonnegative parts, in
/// lexicographic order. Yields nothing when `parts == 0` unless
/// `total == 0`, in which case it yields the empty composition.
#[derive(Debug, Clone)]
pub struct Compositions {
    cur: Vec<usize>,
    total: usize,
    done: bool,
    started: bool,
}

impl Compositions {
    pub fn new(total: usize, parts: usize) -> Self {
        let mut cur = alloc::vec![0; parts];
        let done = parts == 0 && total != 0;
        if let Some(last) = cur.last_mut() {
            *last = total;
        }
        Compositions { cur, total, done, started: false }
    }
}

impl Iterator for Compositions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.cur.clone());
        }
        let r = self.cur.len();
        if r <= 1 {
            self.done = true;
            return None;
        }
        // Advance the rightmost position before the tail that can still grow.
        let mut i = r - 1;
        loop {
            if i == 0 {
                self.done = true;
                return None;
            }
            i -= 1;
            let head: usize = self.cur[..=i].iter().sum();
            if head < self.total {
                self.cur[i] += 1;
                for v in &mut self.cur[i + 1..] {
                    *v = 0;
                }
                let used: usize = self.cur[..r - 1].iter().sum();
                self.cur[r - 1] = self.total - used;
                return Some(self.cur.clone());
            }
        }
    }
}

/// Binomial coefficient, saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn all_combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
        let mut c = Combinations::new(n, k);
        let mut out = Vec::new();
        while let Some(x) = c.next_combination() {
            out.push(x.to_vec());
        }
        out
    }

    #[test]
    fn combinations_lexicographic() {
        assert_eq!(all_combinations(4, 2).len(), 6);
        assert_eq!(all_combinations(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(all_combinations(3, 0), vec![Vec::<usize>::new()]);
        assert!(all_combinations(2, 3).is_empty());
    }

    #[test]
    fn compositions_examples() {
        let c: Vec<_> = Compositions::new(2, 2).collect();
        assert_eq!(c, vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        let c: Vec<_> = Compositions::new(0, 3).collect();
        assert_eq!(c, vec![vec![0, 0, 0]]);
        assert_eq!(Compositions::new(4, 3).count(), 15);
        assert_eq!(Compositions::new(3, 1).collect::<Vec<_>>(), vec![vec![3]]);
        assert_eq!(Compositions::new(0, 0).count(), 1);
        assert_eq!(Compositions::new(2, 0).count(), 0);
    }

    #[test]
    fn composition_counts_match_stars_and_bars() {
        for k in 0..7u64 {
            for r in 1..5u64 {
                let seen: Vec<_> = Compositions::new(k as usize, r as usize).collect();
                assert_eq!(seen.len() as u128, binomial(k + r - 1, r - 1));
                assert!(seen.iter().all(|c| c.iter().sum::<usize>() == k as usize));
                assert!(seen.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 2), 15);
        assert_eq!(binomial(5, 7), 0);
        assert_eq!(binomial(60, 30), 118264581564861424);
    }
}
