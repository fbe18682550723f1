//! Working state of the recursive heuristic.
//!
//! The state stands for `Π xᵢ^{sᵢ} ≥ x_t^{Σ sᵢ}` where the product runs over
//! every slot, the target slot included. Slot `k` is variable `k + 1`.

use crate::config::{Configuration, Triple};
use crate::error::{Error, Result};
use crate::exponent::{ceil_log2, two_pow, Exponent};
use crate::weights::WeightTuple;

use super::select::Selection;

#[derive(Clone, Debug)]
pub(crate) struct State<E> {
    s: Vec<E>,
    target: usize,
    triples: Vec<Triple>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Phase {
    /// The final constraint has been emitted.
    Finished,
    /// One reduction was applied.
    Reduced,
    /// The target has been padded and a pair must be chosen.
    NeedsPair,
}

impl<E: Exponent> State<E> {
    pub(crate) fn start(w: &WeightTuple<E>) -> Self {
        let mut s = w.entries().to_vec();
        s.push(E::zero());
        Self { target: w.len(), s, triples: Vec::new() }
    }

    pub(crate) fn entries(&self) -> &[E] {
        &self.s
    }

    pub(crate) fn size(&self) -> usize {
        self.triples.len()
    }

    pub(crate) fn into_configuration(self, m: usize) -> Result<Configuration> {
        Ok(Configuration::new(m, self.triples)?.canonical())
    }

    fn emit(&mut self, a: usize, b: usize, t: usize) {
        self.triples.push(Triple::new(a + 1, b + 1, t + 1));
    }

    fn fresh(&mut self, value: E) -> usize {
        self.s.push(value);
        self.s.len() - 1
    }

    fn total(&self) -> E {
        self.s.iter().fold(E::zero(), |a, x| a + x.clone())
    }

    /// Largest value shared by two positive slots, lowest slots first.
    fn equal_pair(&self) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in 0..self.s.len() {
            if self.s[i].is_zero() || best.is_some_and(|(b, _)| self.s[i] <= self.s[b]) {
                continue;
            }
            if let Some(j) = (i + 1..self.s.len()).find(|&j| self.s[j] == self.s[i]) {
                best = Some((i, j));
            }
        }
        best
    }

    /// Applies the first rule that fires, in the fixed order: equal pair,
    /// dominant entry, lone least-valuation entry, padding with an equal
    /// entry. Returns `NeedsPair` after padding when none fires.
    pub(crate) fn reduce(&mut self) -> Result<Phase> {
        let total = self.total();
        if total.is_zero() {
            return Err(Error::internal("empty working tuple"));
        }
        let l = ceil_log2(&total);
        if l == 0 {
            return Err(Error::internal("working tuple collapsed to a single unit"));
        }
        let two = E::one() + E::one();

        if let Some((i, j)) = self.equal_pair() {
            if self.s[i] == two_pow::<E>(l - 1) {
                let t = self.target;
                self.emit(i, j, t);
                return Ok(Phase::Finished);
            }
            let doubled = self.s[i].clone() * two.clone();
            self.s[i] = E::zero();
            self.s[j] = E::zero();
            let y = self.fresh(doubled);
            self.emit(i, j, y);
            return Ok(Phase::Reduced);
        }

        let k = (0..self.s.len())
            .max_by(|&a, &b| self.s[a].cmp(&self.s[b]).then(b.cmp(&a)))
            .expect("nonempty");
        let twice_k = self.s[k].clone() * two.clone();
        if twice_k >= total {
            let full = two_pow::<E>(l);
            let half = two_pow::<E>(l - 1);
            let t = self.target;
            if twice_k == total {
                self.s[k] = E::zero();
            } else if self.s[k] <= half {
                self.s[t] = twice_k - total;
                self.s[k] = E::zero();
            } else if total < full {
                self.s[t] = full - total;
                self.s[k] = self.s[k].clone() - half;
            } else {
                self.s[k] = self.s[k].clone() - half;
            }
            let y = self.fresh(E::zero());
            self.emit(k, y, t);
            self.target = y;
            return Ok(Phase::Reduced);
        }

        let gap = two_pow::<E>(l) - total;
        let lows: Vec<(usize, u32)> = (0..self.s.len())
            .filter_map(|k| self.s[k].low_bit().map(|b| (k, b)))
            .collect();
        let least = lows.iter().map(|&(_, b)| b).min().expect("positive entry");
        let mut at_least = lows.iter().filter(|&&(_, b)| b == least);
        if let (Some(&(r, _)), None) = (at_least.next(), at_least.next()) {
            if self.s[r] <= gap {
                let doubled = self.s[r].clone() * two;
                self.s[r] = E::zero();
                let y = self.fresh(doubled);
                let t = self.target;
                self.emit(r, t, y);
                return Ok(Phase::Reduced);
            }
        }

        let t = self.target;
        self.s[t] = self.s[t].clone() + gap;
        if !self.s[t].is_zero() {
            if let Some(i) = (0..self.s.len()).find(|&i| i != t && self.s[i] == self.s[t]) {
                let doubled = self.s[i].clone() * two;
                self.s[i] = E::zero();
                self.s[t] = E::zero();
                let y = self.fresh(doubled);
                self.emit(i, t, y);
                return Ok(Phase::Reduced);
            }
        }
        Ok(Phase::NeedsPair)
    }

    pub(crate) fn apply(&mut self, sel: &Selection<E>) {
        self.s[sel.i] = self.s[sel.i].clone() - sel.gamma.clone();
        self.s[sel.j] = self.s[sel.j].clone() - sel.gamma.clone();
        let y = self.fresh(sel.gamma.clone() + sel.gamma.clone());
        self.emit(sel.i, sel.j, y);
    }

    /// Key under which two states need the same number of further steps:
    /// the multiset of other positive entries, the target entry, and how
    /// many entries equal to the target precede it (this decides ties).
    pub(crate) fn key(&self) -> (Vec<E>, E, usize) {
        let t = self.target;
        let mut rest: Vec<E> = (0..self.s.len())
            .filter(|&k| k != t && !self.s[k].is_zero())
            .map(|k| self.s[k].clone())
            .collect();
        rest.sort();
        let st = self.s[t].clone();
        let rank = (0..t).filter(|&k| !st.is_zero() && self.s[k] == st).count();
        (rest, st, rank)
    }

    /// Lower bound on the constraints still needed: the residual inequality
    /// has the other entries on the left and `x_t` to their sum.
    pub(crate) fn residual_lower_bound(&self) -> usize {
        let t = self.target;
        let rest: Vec<&E> = (0..self.s.len())
            .filter(|&k| k != t && !self.s[k].is_zero())
            .map(|k| &self.s[k])
            .collect();
        let sum = rest.iter().fold(E::zero(), |a, &x| a + x.clone());
        if sum.is_zero() {
            return 1;
        }
        let g = rest.iter().fold(E::zero(), |a, &x| a.gcd(x));
        let log = ceil_log2(&(sum / g)) as usize;
        log.max(rest.len().saturating_sub(1)).max(1)
    }
}
