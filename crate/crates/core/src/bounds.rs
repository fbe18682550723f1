//! Lower and upper bounds on the minimum representation size.

use serde::Serialize;

use crate::error::Result;
use crate::exponent::{ceil_log2, Exponent};
use crate::weights::WeightTuple;

/// Above this many entries the permutation bound is only evaluated on a
/// small family of orders.
pub const EXHAUSTIVE_PERM_LIMIT: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub lower: usize,
    pub upper_perm: usize,
    /// Whether `upper_perm` minimised over every ordering.
    pub perm_exhaustive: bool,
    pub upper_common_one: usize,
    pub upper_power_two: usize,
    /// The two bit-count bounds evaluated without the padding entry.
    pub unpadded_common_one: usize,
    pub unpadded_power_two: usize,
}

impl Bounds {
    pub fn of<E: Exponent>(w: &WeightTuple<E>) -> Result<Self> {
        let (upper_perm, perm_exhaustive) = upper_bound_perm_flagged(w)?;
        Ok(Self {
            lower: lower_bound(w)?,
            upper_perm,
            perm_exhaustive,
            upper_common_one: upper_bound_common_one(w)?,
            upper_power_two: upper_bound_power_two(w)?,
            unpadded_common_one: common_one_sum(w.entries()),
            unpadded_power_two: power_two_sum(w.entries(), w.log_total()),
        })
    }

    pub fn best_upper(&self) -> usize {
        self.upper_perm
            .min(self.upper_common_one)
            .min(self.upper_power_two)
    }
}

/// `max(⌈log₂ ŝ⌉, m − 1)`
pub fn lower_bound<E: Exponent>(w: &WeightTuple<E>) -> Result<usize> {
    w.require_normalized()?;
    w.require_multivariate()?;
    Ok((w.log_total() as usize).max(w.len() - 1))
}

/// Cost of peeling entries off in the given order, each step being a
/// bivariate inequality solved optimally.
pub fn perm_cost<E: Exponent>(entries: &[E], order: &[usize]) -> usize {
    let mut tail: E = order.iter().fold(E::zero(), |acc, &i| acc + entries[i].clone());
    let mut cost = 0;
    for &i in &order[..order.len().saturating_sub(1)] {
        let head = &entries[i];
        let g = tail.gcd(head);
        cost += ceil_log2(&(tail.clone() / g)) as usize;
        tail = tail - head.clone();
    }
    cost
}

pub fn upper_bound_perm<E: Exponent>(w: &WeightTuple<E>) -> Result<usize> {
    upper_bound_perm_flagged(w).map(|(v, _)| v)
}

/// The permutation bound together with a flag telling whether every
/// ordering was covered.
pub fn upper_bound_perm_flagged<E: Exponent>(w: &WeightTuple<E>) -> Result<(usize, bool)> {
    w.require_normalized()?;
    w.require_multivariate()?;
    let s = w.entries();
    if s.len() <= EXHAUSTIVE_PERM_LIMIT {
        Ok((perm_min_over_subsets(s), true))
    } else {
        Ok((perm_min_sampled(s), false))
    }
}

// The cost of an ordering only depends, at each step, on the set of entries
// not yet peeled and on the one peeled next, so the minimum over all m!
// orders is a shortest path over subsets.
fn perm_min_over_subsets<E: Exponent>(s: &[E]) -> usize {
    let m = s.len();
    let full = (1usize << m) - 1;
    let mut sums: Vec<E> = vec![E::zero(); full + 1];
    for mask in 1..=full {
        let low = mask.trailing_zeros() as usize;
        sums[mask] = sums[mask & (mask - 1)].clone() + s[low].clone();
    }
    let mut best = vec![usize::MAX; full + 1];
    for k in 0..m {
        best[1 << k] = 0;
    }
    for mask in 1..=full {
        if mask.count_ones() < 2 {
            continue;
        }
        let tail = &sums[mask];
        let mut acc = usize::MAX;
        let mut rest = mask;
        while rest != 0 {
            let k = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let g = tail.gcd(&s[k]);
            let step = ceil_log2(&(tail.clone() / g)) as usize;
            acc = acc.min(step + best[mask & !(1 << k)]);
        }
        best[mask] = acc;
    }
    best[full]
}

fn perm_min_sampled<E: Exponent>(s: &[E]) -> usize {
    let m = s.len();
    let mut desc: Vec<usize> = (0..m).collect();
    desc.sort_by(|&a, &b| s[b].cmp(&s[a]).then(a.cmp(&b)));
    let asc: Vec<usize> = desc.iter().rev().copied().collect();
    let mut best = usize::MAX;
    for base in [desc, asc] {
        best = best.min(perm_cost(s, &base));
        for a in 0..m {
            for b in a + 1..m {
                let mut order = base.clone();
                order.swap(a, b);
                best = best.min(perm_cost(s, &order));
            }
        }
    }
    best
}

fn common_one_sum<E: Exponent>(entries: &[E]) -> usize {
    let ones: usize = entries.iter().map(|e| e.ones() as usize).sum();
    ones.saturating_sub(1)
}

fn power_two_sum<E: Exponent>(entries: &[E], l: u32) -> usize {
    let total: usize = entries
        .iter()
        .map(|e| (l - e.low_bit().unwrap_or(l).min(l)) as usize)
        .sum();
    total.div_ceil(2)
}

/// `Σ|Ω(sᵢ)| − 1` over the padded tuple.
pub fn upper_bound_common_one<E: Exponent>(w: &WeightTuple<E>) -> Result<usize> {
    w.require_normalized()?;
    Ok(common_one_sum(&w.padded()))
}

/// `⌈½ Σ(l − Δ(sᵢ))⌉` over the padded tuple.
pub fn upper_bound_power_two<E: Exponent>(w: &WeightTuple<E>) -> Result<usize> {
    w.require_normalized()?;
    Ok(power_two_sum(&w.padded(), w.log_total()))
}

/// Iteration guard for the heuristic: the two upper-bound counts plus slack
/// for the reduction steps.
pub(crate) fn iteration_guard<E: Exponent>(w: &WeightTuple<E>) -> usize {
    let padded = w.padded();
    let l = w.log_total();
    common_one_sum(&padded) + power_two_sum(&padded, l) + w.len() + 2
}

/// Brute-force minimum over explicit permutations; reference for tests.
pub fn perm_min_brute<E: Exponent>(s: &[E]) -> usize {
    fn rec<E: Exponent>(s: &[E], order: &mut Vec<usize>, used: &mut [bool], best: &mut usize) {
        if order.len() == s.len() {
            *best = (*best).min(perm_cost(s, order));
            return;
        }
        for k in 0..s.len() {
            if !used[k] {
                used[k] = true;
                order.push(k);
                rec(s, order, used, best);
                order.pop();
                used[k] = false;
            }
        }
    }
    let mut best = usize::MAX;
    rec(s, &mut Vec::new(), &mut vec![false; s.len()], &mut best);
    best
}
