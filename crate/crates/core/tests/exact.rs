use proptest::prelude::*;
use socrep::exact::{
    brute_force, catalog_load, catalog_path, catalog_store, enumerate_configs, is_feasible, Catalog, Mode,
};
use socrep::verify::reconstruct;
use socrep::Weights64;

#[test]
fn catalog_round_trip_on_disk() {
    let dir = tempfile::tempdir().unwrap();
    let nested = dir.path().join("a/b");
    let path = catalog_store(3, 4, &nested).unwrap();
    assert_eq!(path, catalog_path(&nested, 3, 4));
    let loaded = catalog_load(3, 4, &nested).unwrap();
    assert_eq!(loaded.len(), 828);
    assert!(loaded.configurations().eq(enumerate_configs(3, 4)));
}

#[test]
fn truncated_catalog_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = catalog_store(3, 3, dir.path()).unwrap();
    let bytes = std::fs::read(&path).unwrap();
    std::fs::write(&path, &bytes[..bytes.len() - 5]).unwrap();
    assert!(Catalog::load(&path).is_err());
}

#[test]
fn strict_hits_reconstruct() {
    for t in [[1u64, 1, 1], [5, 2, 1], [4, 3, 2], [7, 4, 1]] {
        let w = Weights64::from_u64s(&t).unwrap();
        let cfg = brute_force(&w).unwrap();
        assert!(reconstruct(&cfg, &w).unwrap().is_valid(), "{t:?}");
        assert!(is_feasible(&cfg, &w, Mode::Strict).unwrap());
    }
}

fn small_tuple() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(1u64..=6, 2..=3).prop_filter("normalized", |v| {
        Weights64::from_u64s(v).map(|w| w.is_normalized()).unwrap_or(false)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn size_is_permutation_invariant(v in small_tuple(), rot in 0usize..3) {
        let w = Weights64::from_u64s(&v).unwrap();
        let mut r = v.clone();
        r.rotate_left(rot % v.len());
        r.reverse();
        let u = Weights64::from_u64s(&r).unwrap();
        prop_assert_eq!(brute_force(&w).unwrap().size(), brute_force(&u).unwrap().size());
    }
}
