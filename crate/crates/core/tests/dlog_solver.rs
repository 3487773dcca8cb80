use proptest::prelude::*;
use qfe_core::dlog::{baby_step_count, DlogTable};
use qfe_core::{Error, GroupContext};
use std::sync::OnceLock;

fn ctx() -> &'static GroupContext {
    static CTX: OnceLock<GroupContext> = OnceLock::new();
    CTX.get_or_init(|| GroupContext::setup(128).unwrap())
}

fn table() -> &'static DlogTable {
    static T: OnceLock<DlogTable> = OnceLock::new();
    T.get_or_init(|| DlogTable::build(ctx(), 50_000).unwrap())
}

#[test]
fn baby_step_counts() {
    assert_eq!(baby_step_count(0), 1);
    assert_eq!(baby_step_count(4), 3);
    assert_eq!(baby_step_count(1_000_000), 1415);
    assert_eq!(table().baby_steps(), 317);
}

#[test]
fn edges_of_the_range() {
    for z in [-50_000, -49_999, -317, -1, 0, 1, 316, 317, 49_999, 50_000] {
        assert_eq!(table().solve(&ctx().exp_small(&ctx().gt(), z)).unwrap(), z);
    }
    for z in [-50_001i64, 50_001, 10_000_000] {
        assert!(matches!(
            table().solve(&ctx().exp_small(&ctx().gt(), z)),
            Err(Error::OutOfRange { bound: 50_000 })
        ));
    }
}

#[test]
fn persisted_table_solves_the_same() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.qdlt");
    table().save(&path).unwrap();
    let loaded = DlogTable::load(ctx(), &path).unwrap();
    for z in [-50_000, -123, 0, 4321, 50_000] {
        assert_eq!(loaded.solve(&ctx().exp_small(&ctx().gt(), z)).unwrap(), z);
    }
    let bytes = std::fs::read(&path).unwrap();
    assert!(DlogTable::from_bytes(ctx(), &bytes[..bytes.len() - 1]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn solves_every_in_range_exponent(z in -50_000i64..=50_000) {
        prop_assert_eq!(table().solve(&ctx().exp_small(&ctx().gt(), z)).unwrap(), z);
    }
}
