use num_integer::Integer;
use num_rational::BigRational;
use proptest::prelude::*;
use socrep::frontends::{emit_constraints, parse_rational, to_wgm, ConeInstance, Family, Format, SideConstraint};
use socrep::heuristics::{heuristic, Strategy};
use socrep::Weights64;

fn ratio(a: u64, b: u64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

#[test]
fn parse_rejects_decimals() {
    assert!(parse_rational("0.5").is_err());
    assert!(parse_rational("1/0").is_err());
    assert_eq!(parse_rational("6/4").unwrap(), ratio(3, 2));
}

#[test]
fn sub_unit_adds_slack() {
    let conv = to_wgm(&ConeInstance::new(Family::SubUnitWgm, vec![ratio(1, 4), ratio(1, 3)])).unwrap();
    let s: Vec<String> = conv.instances[0].s.entries().iter().map(|e| e.to_string()).collect();
    assert_eq!(s, ["3", "4", "5"]);
    assert!(matches!(conv.side[0], SideConstraint::FixOne { .. }));
}

#[test]
fn emitted_cones_cover_every_variable() {
    let w = Weights64::from_u64s(&[7, 5, 3, 1]).unwrap();
    let cfg = heuristic(&w, Strategy::GreedyPowerTwo).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&emit_constraints(&w, &cfg, Format::Json).unwrap()).unwrap();
    let cones = doc["cones"].as_array().unwrap();
    assert_eq!(cones.len(), cfg.size());
    let mut seen = vec![false; cfg.variable_count() + 1];
    for c in cones {
        for k in ["a1", "a2", "a3"] {
            let name = c[k].as_str().unwrap();
            seen[name.trim_start_matches('x').parse::<usize>().unwrap()] = true;
        }
    }
    assert!(seen[1..].iter().all(|&b| b));
}

proptest! {
    #[test]
    fn power_up_round_trip(a in 2u64..200, b in 1u64..200) {
        prop_assume!(a > b && a.gcd(&b) == 1);
        let lambda = ratio(a, b);
        let conv = to_wgm(&ConeInstance::new(Family::PowerUp, vec![lambda.clone()])).unwrap();
        let s = &conv.instances[0].s;
        prop_assert!(s.is_normalized());
        let e: Vec<u64> = s.entries().iter().map(|x| x.to_string().parse().unwrap()).collect();
        prop_assert_eq!(ratio(e[0] + e[1], e[0]), lambda);
    }
}
