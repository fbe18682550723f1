//! Branching search over every admissible pair at each generic step.

use std::collections::HashMap;

use serde::Serialize;

use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::weights::WeightTuple;

use super::select::candidates;
use super::state::{Phase, State};
use super::{check_input, heuristic, PairRule, Strategy};

pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Clone, Debug, Serialize)]
pub struct TraversalOutcome {
    pub configuration: Configuration,
    /// False when the node budget ran out and the greedy answer was kept.
    pub exhaustive: bool,
    pub nodes: u64,
}

#[derive(Clone, Copy, Debug)]
enum Known {
    Exact(usize),
    AtLeast(usize),
}

enum Stop {
    Budget,
    Fail(Error),
}

impl From<Error> for Stop {
    fn from(e: Error) -> Self {
        Stop::Fail(e)
    }
}

struct Search<E> {
    rule: PairRule,
    budget: u64,
    nodes: u64,
    leaf_seen: bool,
    memo: HashMap<(Vec<E>, E, usize), Known>,
}

impl<E: Exponent> Search<E> {
    /// Constraints still needed from `st`, if fewer than `cap`.
    fn search(&mut self, st: &State<E>, cap: usize, limited: bool) -> std::result::Result<Option<usize>, Stop> {
        if cap == 0 {
            return Ok(None);
        }
        let key = st.key();
        match self.memo.get(&key) {
            Some(Known::Exact(v)) => return Ok((*v < cap).then_some(*v)),
            Some(Known::AtLeast(c)) if *c >= cap => return Ok(None),
            _ => {}
        }
        if st.residual_lower_bound() >= cap {
            return Ok(None);
        }
        self.nodes += 1;
        if limited && self.nodes > self.budget {
            return Err(Stop::Budget);
        }
        let mut next = st.clone();
        let found = match next.reduce()? {
            Phase::Finished => {
                self.leaf_seen = true;
                Some(1)
            }
            Phase::Reduced => self.search(&next, cap - 1, limited)?.map(|v| v + 1),
            Phase::NeedsPair => {
                let mut best = cap;
                for sel in candidates(self.rule, next.entries()) {
                    let mut child = next.clone();
                    child.apply(&sel);
                    if let Some(v) = self.search(&child, best - 1, limited)? {
                        best = v + 1;
                    }
                }
                (best < cap).then_some(best)
            }
        };
        let entry = match found {
            Some(v) => Known::Exact(v),
            None => match self.memo.get(&key) {
                Some(Known::AtLeast(c)) => Known::AtLeast((*c).max(cap)),
                _ => Known::AtLeast(cap),
            },
        };
        self.memo.insert(key, entry);
        Ok(found)
    }

    /// Walks an optimal path, taking the first optimal child in pair order.
    fn rebuild(&mut self, mut st: State<E>, mut remaining: usize) -> Result<State<E>> {
        loop {
            match st.reduce()? {
                Phase::Finished => return Ok(st),
                Phase::Reduced => remaining -= 1,
                Phase::NeedsPair => {
                    let mut chosen = None;
                    for sel in candidates(self.rule, st.entries()) {
                        let mut child = st.clone();
                        child.apply(&sel);
                        match self.search(&child, remaining, false) {
                            Ok(Some(v)) if v == remaining - 1 => {
                                chosen = Some(child);
                                break;
                            }
                            Ok(_) => {}
                            Err(Stop::Fail(e)) => return Err(e),
                            Err(Stop::Budget) => unreachable!("rebuild runs unlimited"),
                        }
                    }
                    st = chosen.ok_or_else(|| Error::internal("optimal branch vanished while rebuilding"))?;
                    remaining -= 1;
                }
            }
        }
    }
}

/// Smallest representation reachable by branching over every pair the
/// strategy's rule admits. Forced reductions do not branch. Among equally
/// small results the one with the lexicographically smallest sequence of
/// choices is returned.
pub fn traversal<E: Exponent>(w: &WeightTuple<E>, strategy: Strategy, budget: u64) -> Result<TraversalOutcome> {
    check_input(w)?;
    if budget == 0 {
        return Err(Error::invalid("budget must be at least 1"));
    }
    let greedy = heuristic(w, strategy)?;
    let mut search = Search { rule: strategy.rule(), budget, nodes: 0, leaf_seen: false, memo: HashMap::new() };
    let root = State::start(w);
    let best = match search.search(&root, greedy.size() + 1, true) {
        Ok(Some(v)) => v,
        Ok(None) => return Err(Error::internal("traversal found nothing as good as the greedy path")),
        Err(Stop::Fail(e)) => return Err(e),
        Err(Stop::Budget) if search.leaf_seen => {
            return Ok(TraversalOutcome { configuration: greedy, exhaustive: false, nodes: search.nodes });
        }
        Err(Stop::Budget) => return Err(Error::SearchExhausted { fallback: Box::new(greedy) }),
    };
    let done = search.rebuild(root, best)?;
    debug_assert_eq!(done.size(), best);
    Ok(TraversalOutcome { configuration: done.into_configuration(w.len())?, exhaustive: true, nodes: search.nodes })
}
