mod common;

use common::oracle::*;
use common::{q, worked_ctx};
use maskforge::trigpoly::multi_indices_up_to;
use maskforge::zerocond::{zero_condition_order_direct, zero_condition_order_polyphase};
use maskforge::{
    lambda_parameters, mask_from_lambdas, zero_condition_order, Cyclotomic, DilationContext,
    IntMatrix, TrigPoly,
};
use num_rational::BigRational;
use proptest::prelude::*;
use rand::Rng;

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

fn context(which: u8, seed: u64) -> DilationContext {
    match which % 4 {
        0 => worked_ctx(),
        1 => {
            DilationContext::new(IntMatrix::from_rows(&[vec![0, 2], vec![2, -1]]).unwrap()).unwrap()
        }
        2 => DilationContext::new(IntMatrix::scalar(2, 2)).unwrap(),
        _ => random_dilation(&mut rng(seed), 2, 6),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(seed in any::<u64>(), dim in 1usize..=3) {
        let mut r = rng(seed);
        let [a, b, c] = [0, 1, 2].map(|_| random_poly(&mut r, dim, 4, 2));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &TrigPoly::one(dim), a.clone());
    }

    #[test]
    fn polyphase_round_trip(seed in any::<u64>(), which in any::<u8>()) {
        let ctx = context(which, seed);
        let t = random_poly(&mut rng(seed ^ 1), 2, 8, 4);
        let taus = t.polyphase_split(&ctx).unwrap();
        prop_assert_eq!(taus.len(), ctx.m());
        prop_assert_eq!(TrigPoly::polyphase_assemble(&taus, &ctx).unwrap(), t);
    }

    #[test]
    fn division_by_one_minus_z(seed in any::<u64>(), dim in 1usize..=3) {
        let mut r = rng(seed);
        let u = random_poly(&mut r, dim, 5, 3);
        let axis = r.gen_range(0..dim);
        let product = &u * &TrigPoly::one_minus_z(dim, axis);
        prop_assert_eq!(product.divide_one_minus_z(axis).unwrap(), u);
        prop_assert!(product.substitute_one(axis).unwrap().is_zero());
    }

    #[test]
    fn leibniz_rule(seed in any::<u64>(), den in 1i64..=6) {
        let mut r = rng(seed);
        let f = random_poly(&mut r, 2, 4, 2).compose_inverse_dilate(worked_ctx().matrix());
        let g = random_poly(&mut r, 2, 4, 2);
        let p = vec![q(r.gen_range(-5..=5), den), q(r.gen_range(-5..=5), den)];
        let fg = &f * &g;
        for alpha in multi_indices_up_to(2, 2) {
            let mut rhs = Cyclotomic::zero();
            for b0 in 0..=alpha[0] {
                for b1 in 0..=alpha[1] {
                    let w = binomial(alpha[0], b0) * binomial(alpha[1], b1);
                    let term = &f.normalized_derivative(&[b0, b1], &p) * &g.normalized_derivative(&[alpha[0] - b0, alpha[1] - b1], &p);
                    rhs += &term.scale(&BigRational::from_integer(w.into()));
                }
            }
            prop_assert_eq!(fg.normalized_derivative(&alpha, &p), rhs);
        }
    }

    #[test]
    fn zero_condition_checkers_agree(seed in any::<u64>(), which in any::<u8>(), order in 0u32..=2, noisy in any::<bool>()) {
        let ctx = context(which, seed);
        let mut r = rng(seed);
        let mut t = random_class_mask(&mut r, &ctx, order);
        if noisy {
            t = &t + &random_poly(&mut r, 2, 1, 2);
        }
        let direct = zero_condition_order_direct(&t, &ctx, 3).unwrap();
        prop_assert_eq!(direct, zero_condition_order_polyphase(&t, &ctx, 3).unwrap());
        prop_assert_eq!(direct, oracle_order(&t, &ctx, 3));
        if !noisy {
            prop_assert!(direct >= order as i64);
        }
    }

    /// Z^0 holds exactly when every polyphase component has the same value at the origin.
    #[test]
    fn class_zero_by_polyphase_values(seed in any::<u64>(), which in any::<u8>(), equalize in any::<bool>()) {
        let ctx = context(which, seed);
        let mut r = rng(seed);
        let mut taus: Vec<TrigPoly> = (0..ctx.m()).map(|_| random_poly(&mut r, 2, 3, 2)).collect();
        if equalize {
            let target = rational(&mut r);
            for tau in taus.iter_mut() {
                let shift = &Cyclotomic::from(target.clone()) - &tau.value_at_zero();
                *tau = &*tau + &TrigPoly::constant(2, shift);
            }
        }
        let t = TrigPoly::polyphase_assemble(&taus, &ctx).unwrap();
        let equal = taus.iter().all(|tau| tau.value_at_zero() == taus[0].value_at_zero());
        prop_assert_eq!(zero_condition_order(&t, &ctx, 0).unwrap() >= 0, equal);
        if equalize {
            prop_assert!(equal);
        }
    }

    #[test]
    fn lambda_tables_round_trip(seed in any::<u64>(), which in any::<u8>(), order in 0u32..=2) {
        let ctx = context(which, seed);
        let table = random_lambda_table(&mut rng(seed), &ctx, order);
        let t = mask_from_lambdas(&ctx, &table).unwrap();
        prop_assert!(zero_condition_order(&t, &ctx, order).unwrap() >= order as i64);
        prop_assert_eq!(lambda_parameters(&t, &ctx, order).unwrap(), table);
    }
}

#[test]
fn one_dimensional_checkers_agree() {
    for seed in 0..40u64 {
        let mut r = rng(seed);
        let ctx = random_dilation(&mut r, 1, 5);
        let order = (seed % 3) as u32;
        let t = random_class_mask(&mut r, &ctx, order);
        let direct = zero_condition_order_direct(&t, &ctx, 3).unwrap();
        assert_eq!(
            direct,
            zero_condition_order_polyphase(&t, &ctx, 3).unwrap(),
            "seed {seed}"
        );
        assert_eq!(direct, oracle_order(&t, &ctx, 3), "seed {seed}");
        assert!(direct >= order as i64);
    }
}
