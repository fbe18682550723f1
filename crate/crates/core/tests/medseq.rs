use num_integer::Integer;
use proptest::prelude::*;
use socrep::medseq::{build_tree, enumerate_successive, is_mediated_sequence, min_mediated_sequence};

fn ceil_log2(p: u64) -> usize {
    (64 - (p - 1).leading_zeros()) as usize
}

fn coprime(max: u64) -> impl Strategy<Value = (u64, u64)> {
    (2..=max).prop_flat_map(|p| (Just(p), 1..p)).prop_filter("coprime", |(p, q)| p.gcd(q) == 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn minimum_sequences_have_log_length((p, q) in coprime(1 << 12)) {
        let seq = min_mediated_sequence(&p, &q).unwrap();
        prop_assert!(is_mediated_sequence(seq.points(), &p, &q));
        prop_assert_eq!(seq.len(), ceil_log2(p));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn successive_trees_satisfy_leaf_sums((p, q) in coprime(200).prop_filter("odd", |(p, q)| p % 2 == 1 && q % 2 == 1)) {
        let found = enumerate_successive(&p, &q, 5).unwrap();
        for seq in &found.sequences {
            let tree = build_tree(seq).unwrap();
            tree.check().unwrap();
            let (to_q, to_rest) = tree.leaf_sums();
            prop_assert_eq!(to_q, q);
            prop_assert_eq!(to_rest, (1u64 << ceil_log2(p)) - p);
        }
    }
}

#[test]
fn rejects_non_coprime() {
    assert!(min_mediated_sequence(&4u64, &2u64).is_err());
}
