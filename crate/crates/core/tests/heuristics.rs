use proptest::prelude::*;
use proptest::strategy::Strategy as _;
use socrep::bounds::{lower_bound, upper_bound_common_one, upper_bound_power_two};
use socrep::heuristics::{heuristic, represent, PairRule, Strategy, DEFAULT_BUDGET};
use socrep::verify::{numeric_check, reconstruct};
use socrep::Weights64;

fn tuple() -> impl proptest::strategy::Strategy<Value = Weights64> {
    prop::collection::vec(1u64..=60, 2..=6).prop_filter_map("normalized", |v| {
        let w = Weights64::from_u64s(&v).ok()?;
        w.is_normalized().then_some(w)
    })
}

fn ceiling(w: &Weights64, rule: PairRule) -> usize {
    match rule {
        PairRule::CommonOne => upper_bound_common_one(w).unwrap(),
        PairRule::PowerTwo => upper_bound_power_two(w).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn greedy_output_is_valid_and_bounded(w in tuple()) {
        for strategy in [Strategy::GreedyPowerTwo, Strategy::GreedyCommonOne] {
            let cfg = heuristic(&w, strategy).unwrap();
            prop_assert!(reconstruct(&cfg, &w).unwrap().is_valid(), "{strategy:?} {w}");
            prop_assert!(numeric_check(&cfg, &w, 20, 42).unwrap().passed);
            prop_assert!(cfg.size() >= lower_bound(&w).unwrap());
            prop_assert!(cfg.size() <= ceiling(&w, strategy.rule()), "{strategy:?} {w}");
        }
    }

    #[test]
    fn traversal_never_loses_to_greedy(w in tuple()) {
        for (greedy, trav) in [
            (Strategy::GreedyPowerTwo, Strategy::TraversalPowerTwo),
            (Strategy::GreedyCommonOne, Strategy::TraversalCommonOne),
        ] {
            let g = heuristic(&w, greedy).unwrap();
            let t = represent(&w, trav, DEFAULT_BUDGET).unwrap();
            prop_assert!(reconstruct(&t, &w).unwrap().is_valid());
            prop_assert!(t.size() <= g.size(), "{trav:?} {w}: {} > {}", t.size(), g.size());
        }
    }
}

#[test]
fn unnormalized_input_is_rejected() {
    let w = Weights64::from_u64s(&[2, 4]).unwrap();
    assert!(heuristic(&w, Strategy::GreedyPowerTwo).is_err());
}

// Optimality on two variables is not claimed, so only count the misses.
#[test]
fn bivariate_greedy_power_two_observation() {
    let (mut pairs, mut above) = (0, Vec::new());
    for p in 2u64..=256 {
        for q in (1..p).filter(|q| num_integer::gcd(p, *q) == 1) {
            let w = Weights64::from_u64s(&[q, p - q]).unwrap();
            let cfg = heuristic(&w, Strategy::GreedyPowerTwo).unwrap();
            let l = (64 - (p - 1).leading_zeros()) as usize;
            assert!(cfg.size() >= l);
            pairs += 1;
            if cfg.size() > l {
                above.push((q, p - q, cfg.size()));
            }
        }
    }
    println!("greedy-power-two above the two-variable optimum on {} of {pairs} pairs", above.len());
    if let Some(first) = above.first() {
        println!("first: {first:?}");
    }
}
