use proptest::prelude::*;
use qfe_core::scheme::{decrypt, decrypt_to_gt, encrypt, keygen, setup};
use qfe_core::{DlogTable, Error, FunctionClass, GroupContext, GroupElem, QuadraticForm};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn naive(n: usize, q: &[i64], x: &[i64], y: &[i64]) -> i128 {
    let mut acc = 0i128;
    for i in 0..n {
        for j in 0..n {
            acc += q[i * n + j] as i128 * x[i] as i128 * y[j] as i128;
        }
    }
    acc
}

#[test]
fn frozen_small_instances() {
    let ctx = GroupContext::setup(128).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(1);
    let fc = FunctionClass::new(2, 5, 5, 3).unwrap();
    let (pk, msk) = setup(&ctx, &fc, &mut rng).unwrap();
    let table = DlogTable::build(&ctx, 300).unwrap();
    // q = [[1, 2], [-3, 0]], x = (4, -1), y = (2, 5)
    // 1*4*2 + 2*4*5 - 3*(-1)*2 + 0 = 8 + 40 + 6 = 54
    let q = QuadraticForm::new(2, vec![1, 2, -3, 0]).unwrap();
    let dk = keygen(&ctx, &msk, &q).unwrap();
    let ct = encrypt(&ctx, &pk, &fc, &[4, -1], &[2, 5], &mut rng).unwrap();
    assert_eq!(decrypt(&ctx, &ct, &dk, &table).unwrap(), 54);

    // all-extreme values hit the function class bound exactly: 4 * 3 * 25
    let q = QuadraticForm::new(2, vec![3; 4]).unwrap();
    let dk = keygen(&ctx, &msk, &q).unwrap();
    let ct = encrypt(&ctx, &pk, &fc, &[-5, -5], &[-5, -5], &mut rng).unwrap();
    assert_eq!(decrypt(&ctx, &ct, &dk, &table).unwrap(), 300);
}

#[test]
fn decryption_target_is_gt_to_the_value() {
    let ctx = GroupContext::setup(128).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(2);
    let fc = FunctionClass::new(3, 4, 4, 4).unwrap();
    let (pk, msk) = setup(&ctx, &fc, &mut rng).unwrap();
    let q = QuadraticForm::new(3, vec![1, 0, -2, 4, 3, 0, 0, -1, 2]).unwrap();
    let x = [3, -4, 1];
    let y = [-2, 0, 4];
    let expected = naive(3, q.coeffs(), &x, &y) as i64;
    let dk = keygen(&ctx, &msk, &q).unwrap();
    let ct = encrypt(&ctx, &pk, &fc, &x, &y, &mut rng).unwrap();
    let target = decrypt_to_gt(&ctx, &ct, &dk).unwrap();
    assert_eq!(target, ctx.exp_small(&ctx.gt(), expected));
    assert!(!target.is_identity() || expected == 0);
}

#[test]
fn result_outside_table_is_reported() {
    let ctx = GroupContext::setup(128).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(3);
    let fc = FunctionClass::new(1, 10, 10, 10).unwrap();
    let (pk, msk) = setup(&ctx, &fc, &mut rng).unwrap();
    let dk = keygen(&ctx, &msk, &QuadraticForm::diagonal(&[10])).unwrap();
    let ct = encrypt(&ctx, &pk, &fc, &[10], &[10], &mut rng).unwrap();
    let small = DlogTable::build(&ctx, 999).unwrap();
    assert!(matches!(
        decrypt(&ctx, &ct, &dk, &small),
        Err(Error::OutOfRange { bound: 999 })
    ));
    let big = DlogTable::build(&ctx, 1000).unwrap();
    assert_eq!(decrypt(&ctx, &ct, &dk, &big).unwrap(), 1000);
}

fn instance() -> impl Strategy<Value = (u64, usize, Vec<i64>, Vec<i64>, Vec<i64>)> {
    (1usize..=4).prop_flat_map(|n| {
        (
            any::<u64>(),
            Just(n),
            prop::collection::vec(-8i64..=8, n * n),
            prop::collection::vec(-16i64..=16, n),
            prop::collection::vec(-16i64..=16, n),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn decrypt_matches_naive_sum((seed, n, q, x, y) in instance()) {
        let ctx = GroupContext::setup(128).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let fc = FunctionClass::new(n, 16, 16, 8).unwrap();
        let (pk, msk) = setup(&ctx, &fc, &mut rng).unwrap();
        let form = QuadraticForm::new(n, q.clone()).unwrap();
        let dk = keygen(&ctx, &msk, &form).unwrap();
        let ct = encrypt(&ctx, &pk, &fc, &x, &y, &mut rng).unwrap();
        let table = DlogTable::build(&ctx, 16 * 16 * 8 * 16).unwrap();
        prop_assert_eq!(decrypt(&ctx, &ct, &dk, &table).unwrap() as i128, naive(n, &q, &x, &y));
    }

    #[test]
    fn fresh_encryptions_differ_but_agree((seed, n, q, x, y) in instance()) {
        let ctx = GroupContext::setup(128).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let fc = FunctionClass::new(n, 16, 16, 8).unwrap();
        let (pk, msk) = setup(&ctx, &fc, &mut rng).unwrap();
        let dk = keygen(&ctx, &msk, &QuadraticForm::new(n, q).unwrap()).unwrap();
        let c1 = encrypt(&ctx, &pk, &fc, &x, &y, &mut rng).unwrap();
        let c2 = encrypt(&ctx, &pk, &fc, &x, &y, &mut rng).unwrap();
        prop_assert_ne!(c1.c_gamma, c2.c_gamma);
        prop_assert_eq!(decrypt_to_gt(&ctx, &c1, &dk).unwrap(), decrypt_to_gt(&ctx, &c2, &dk).unwrap());
    }
}
