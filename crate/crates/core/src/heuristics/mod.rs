//! Recursive halving heuristics and their branching (traversal) variants.

mod select;
mod state;
mod traversal;

pub use select::{candidates, select, select_greedy_common_one, select_greedy_power_two, Selection};
pub use traversal::{traversal, TraversalOutcome, DEFAULT_BUDGET};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bounds::iteration_guard;
use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::weights::WeightTuple;
use state::{Phase, State};

/// How the generic step picks the pair to merge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairRule {
    /// Pairs sharing binary digits; merge the shared part.
    CommonOne,
    /// Pairs among the entries of least 2-adic valuation; merge the
    /// smaller entry.
    PowerTwo,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    GreedyCommonOne,
    GreedyPowerTwo,
    TraversalCommonOne,
    TraversalPowerTwo,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::GreedyPowerTwo,
        Strategy::GreedyCommonOne,
        Strategy::TraversalPowerTwo,
        Strategy::TraversalCommonOne,
    ];

    /// Ties between equally good pairs always go to the lexicographically
    /// smallest `(i, j)`.
    pub const TIE_BREAK: &'static str = "lexicographic (i, j)";

    pub fn rule(self) -> PairRule {
        match self {
            Strategy::GreedyCommonOne | Strategy::TraversalCommonOne => PairRule::CommonOne,
            Strategy::GreedyPowerTwo | Strategy::TraversalPowerTwo => PairRule::PowerTwo,
        }
    }

    pub fn is_traversal(self) -> bool {
        matches!(self, Strategy::TraversalCommonOne | Strategy::TraversalPowerTwo)
    }

    pub fn name(self) -> &'static str {
        match self {
            Strategy::GreedyCommonOne => "greedy-common-one",
            Strategy::GreedyPowerTwo => "greedy-power-two",
            Strategy::TraversalCommonOne => "traversal-common-one",
            Strategy::TraversalPowerTwo => "traversal-power-two",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown strategy {s:?}")))
    }
}

fn check_input<E: Exponent>(w: &WeightTuple<E>) -> Result<()> {
    w.require_normalized()?;
    w.require_multivariate()
}

/// Runs the reductions and the greedy pair rule to completion.
///
/// Traversal strategies use their rule greedily here; see [`traversal`]
/// for the branching search.
pub fn heuristic<E: Exponent>(w: &WeightTuple<E>, strategy: Strategy) -> Result<Configuration> {
    check_input(w)?;
    let rule = strategy.rule();
    let guard = iteration_guard(w);
    let mut st = State::start(w);
    for _ in 0..guard {
        match st.reduce()? {
            Phase::Finished => return st.into_configuration(w.len()),
            Phase::Reduced => {}
            Phase::NeedsPair => {
                let sel = select(rule, st.entries())?;
                st.apply(&sel);
            }
        }
    }
    Err(Error::internal(format!("heuristic on {w} exceeded {guard} steps")))
}

/// Greedy or traversal depending on the strategy.
pub fn represent<E: Exponent>(w: &WeightTuple<E>, strategy: Strategy, budget: u64) -> Result<Configuration> {
    if strategy.is_traversal() {
        traversal(w, strategy, budget).map(|o| o.configuration)
    } else {
        heuristic(w, strategy)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Triple;

    fn w(v: &[u64]) -> WeightTuple<u64> {
        WeightTuple::from_u64s(v).unwrap()
    }

    #[test]
    fn three_eight() {
        let c = heuristic(&w(&[3, 8]), Strategy::GreedyPowerTwo).unwrap();
        assert_eq!(c.size(), 4);
        assert_eq!(
            c.triples(),
            &[Triple::new(2, 4, 3), Triple::new(3, 5, 4), Triple::new(1, 6, 5), Triple::new(1, 3, 6)]
        );
    }

    #[test]
    fn one_one() {
        for s in Strategy::ALL {
            let c = represent(&w(&[1, 1]), s, 10).unwrap();
            assert_eq!(c.triples(), &[Triple::new(1, 2, 3)]);
        }
    }

    #[test]
    fn reported_sizes() {
        for t in [[5u64, 4, 3], [7, 3, 2], [11, 2, 1]] {
            assert_eq!(heuristic(&w(&t), Strategy::GreedyPowerTwo).unwrap().size(), 5);
            assert_eq!(heuristic(&w(&t), Strategy::GreedyCommonOne).unwrap().size(), 5);
        }
        assert_eq!(heuristic(&w(&[6, 5, 3]), Strategy::GreedyCommonOne).unwrap().size(), 6);
        assert_eq!(heuristic(&w(&[6, 5, 3]), Strategy::GreedyPowerTwo).unwrap().size(), 5);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(heuristic(&w(&[2, 4]), Strategy::GreedyPowerTwo), Err(Error::InvalidInput(_))));
        assert!(matches!(heuristic(&w(&[1]), Strategy::GreedyPowerTwo), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn strategy_names_round_trip() {
        for s in Strategy::ALL {
            assert_eq!(s.name().parse::<Strategy>().unwrap(), s);
            assert_eq!(serde_json::to_string(&s).unwrap(), format!("\"{}\"", s.name()));
        }
        assert!("greedy".parse::<Strategy>().is_err());
    }
}
