//! Backtracking enumeration of canonical configurations.
//!
//! Triple `k` always has target `m+k`, so a configuration is a list of
//! pairs `(i_k, j_k)`. Candidates at step `k` grow the running maximum
//! `t̄` by at most one fresh pair of indices, which keeps the search tree
//! prefix-closed; coverage and the running-maximum rule are applied as the
//! list completes.

use crate::config::{Configuration, Triple};

pub type Pair = (u16, u16);

struct Frame {
    candidates: Vec<Pair>,
    next: usize,
}

/// Lexicographic stream of canonical pair lists for fixed `(m, n)`.
pub struct PairLists {
    m: usize,
    n: usize,
    stack: Vec<Frame>,
    pairs: Vec<Pair>,
    /// `t̄` after each accepted pair, with `t̄₀ = m+1` in front.
    maxima: Vec<usize>,
}

impl PairLists {
    pub fn new(m: usize, n: usize) -> Self {
        let mut lists = PairLists { m, n, stack: Vec::new(), pairs: Vec::new(), maxima: vec![m + 1] };
        if m >= 2 && n >= 1 && m + n < u16::MAX as usize {
            let first = lists.candidates(1, m + 1);
            lists.stack.push(Frame { candidates: first, next: 0 });
        }
        lists
    }

    fn candidates(&self, k: usize, tbar: usize) -> Vec<Pair> {
        let top = self.m + self.n;
        let target = self.m + k;
        let mut out = Vec::new();
        for i in 1..=tbar {
            for j in i + 1..=(tbar + 1).min(top) {
                out.push((i, j));
            }
        }
        if tbar + 2 <= top {
            out.push((tbar + 1, tbar + 2));
        }
        out.into_iter()
            .filter(|&(i, j)| i != target && j != target)
            .map(|(i, j)| (i as u16, j as u16))
            .collect()
    }

    fn admissible(&self, k: usize, (i, j): Pair, tbar: usize) -> bool {
        if self.pairs.contains(&(i, j)) {
            return false;
        }
        let set = sorted3(i, j, (self.m + k) as u16);
        if self
            .pairs
            .iter()
            .enumerate()
            .any(|(idx, &(a, b))| sorted3(a, b, (self.m + idx + 1) as u16) == set)
        {
            return false;
        }
        k == self.n || tbar > self.m + k
    }

    fn covers(&self) -> bool {
        let mut seen = vec![false; self.m + self.n + 1];
        for &(i, j) in &self.pairs {
            seen[i as usize] = true;
            seen[j as usize] = true;
        }
        seen[1..=self.m].iter().all(|&b| b) && seen[self.m + 2..].iter().all(|&b| b)
    }
}

fn sorted3(a: u16, b: u16, c: u16) -> [u16; 3] {
    let mut s = [a, b, c];
    s.sort_unstable();
    s
}

impl Iterator for PairLists {
    type Item = Vec<Pair>;

    fn next(&mut self) -> Option<Vec<Pair>> {
        loop {
            let frame = self.stack.last_mut()?;
            if frame.next == frame.candidates.len() {
                self.stack.pop();
                self.pairs.pop();
                self.maxima.pop();
                continue;
            }
            let pair = frame.candidates[frame.next];
            frame.next += 1;
            let k = self.pairs.len() + 1;
            let tbar = self.maxima[k - 1].max(pair.1 as usize);
            if !self.admissible(k, pair, tbar) {
                continue;
            }
            self.pairs.push(pair);
            if k == self.n {
                let done = self.covers().then(|| self.pairs.clone());
                self.pairs.pop();
                if done.is_some() {
                    return done;
                }
            } else {
                self.maxima.push(tbar);
                let candidates = self.candidates(k + 1, tbar);
                self.stack.push(Frame { candidates, next: 0 });
            }
        }
    }
}

/// Canonical configuration for a pair list.
pub fn configuration_of(m: usize, pairs: &[Pair]) -> Configuration {
    let triples = pairs
        .iter()
        .enumerate()
        .map(|(k, &(i, j))| Triple { left: i as usize, right: j as usize, target: m + k + 1 })
        .collect();
    Configuration::new(m, triples).expect("enumerated pair lists are well formed")
}

/// Every legitimate canonical configuration of size `n` on `m` base
/// variables, in lexicographic order of the pair list.
pub fn enumerate_configs(m: usize, n: usize) -> impl Iterator<Item = Configuration> {
    PairLists::new(m, n).map(move |pairs| configuration_of(m, &pairs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    /// Filter every pair list over the index range by the conditions
    /// written out one at a time.
    fn brute_count(m: usize, n: usize) -> usize {
        let top = m + n;
        let all: Vec<Pair> = (1..=top as u16).flat_map(|i| (i + 1..=top as u16).map(move |j| (i, j))).collect();
        let mut count = 0;
        let mut idx = vec![0usize; n];
        'outer: loop {
            let pairs: Vec<Pair> = idx.iter().map(|&x| all[x]).collect();
            let ok = legitimate(m, &pairs);
            count += usize::from(ok);
            for d in (0..n).rev() {
                idx[d] += 1;
                if idx[d] < all.len() {
                    continue 'outer;
                }
                idx[d] = 0;
            }
            break;
        }
        count
    }

    fn legitimate(m: usize, pairs: &[Pair]) -> bool {
        let n = pairs.len();
        let mut tbar = m + 1;
        let mut seen_pairs = HashSet::new();
        let mut seen_sets = HashSet::new();
        let mut covered = HashSet::new();
        for (k0, &(i, j)) in pairs.iter().enumerate() {
            let k = k0 + 1;
            let (i, j) = (i as usize, j as usize);
            let t = m + k;
            if i == t || j == t {
                return false;
            }
            let grows = (i <= tbar && j <= tbar + 1) || (i == tbar + 1 && j == tbar + 2);
            if !grows || !seen_pairs.insert((i, j)) || !seen_sets.insert(sorted3(i as u16, j as u16, t as u16)) {
                return false;
            }
            tbar = tbar.max(j);
            if k < n && tbar < m + k + 1 {
                return false;
            }
            covered.insert(i);
            covered.insert(j);
        }
        (1..=m).chain(m + 2..=m + n).all(|v| covered.contains(&v))
    }

    #[test]
    fn tabulated_small_counts() {
        assert_eq!(PairLists::new(3, 2).count(), 3);
        assert_eq!(PairLists::new(3, 3).count(), 48);
        assert_eq!(PairLists::new(4, 3).count(), 18);
        assert_eq!(PairLists::new(3, 4).count(), 828);
    }

    #[test]
    fn matches_direct_filter() {
        for (m, n) in [(2, 1), (2, 2), (2, 3), (3, 2), (3, 3), (4, 2), (4, 3), (2, 4)] {
            assert_eq!(PairLists::new(m, n).count(), brute_count(m, n), "({m},{n})");
        }
    }

    #[test]
    fn lexicographic_and_distinct() {
        let lists: Vec<_> = PairLists::new(3, 4).collect();
        assert!(lists.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn single_triple() {
        let all: Vec<_> = enumerate_configs(2, 1).collect();
        assert_eq!(all, vec![Configuration::from_arrays(2, &[[1, 2, 3]]).unwrap()]);
        assert_eq!(PairLists::new(3, 1).count(), 0);
    }

    #[test]
    fn degenerate_sizes() {
        assert_eq!(PairLists::new(1, 3).count(), 0);
        assert_eq!(PairLists::new(3, 0).count(), 0);
    }
}
