mod common;

use common::oracle::*;
use common::worked_ctx;
use maskforge::decompose::dilated_difference;
use maskforge::{
    algorithm1, decompose, iterated_decomposition, Cyclotomic, DilationContext, IntMatrix, TrigPoly,
};
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

fn context(which: u8, seed: u64) -> DilationContext {
    match which % 4 {
        0 => worked_ctx(),
        1 => DilationContext::new(IntMatrix::scalar(2, 2)).unwrap(),
        2 => random_dilation(&mut rng(seed), 1, 5),
        _ => random_dilation(&mut rng(seed), 2, 5),
    }
}

/// `(1 - z_k) t = sum_j t_jk (1 - z^{M e_j})` and `t_jk(0) = (M^-1)_jk t(0)`, checked here from scratch.
fn check_factorization(
    t: &TrigPoly,
    entries: &[Vec<TrigPoly>],
    ctx: &DilationContext,
) -> Result<(), TestCaseError> {
    let d = ctx.dim();
    let t0 = t.value_at_zero();
    for k in 0..d {
        let lhs = &TrigPoly::one_minus_z(d, k) * t;
        let mut rhs = TrigPoly::zero(d);
        for (j, row) in entries.iter().enumerate() {
            let mut e = vec![0; d];
            e[j] = 1;
            let delta = &TrigPoly::one(d)
                - &TrigPoly::monomial(ctx.matrix().mul_vec(&e), Cyclotomic::one());
            rhs = &rhs + &(&row[k] * &delta);
        }
        prop_assert_eq!(lhs, rhs);
        for (j, row) in entries.iter().enumerate() {
            prop_assert_eq!(row[k].value_at_zero(), t0.scale(ctx.inverse_entry(j, k)));
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn basic_decomposition_of_any_class_zero_mask(seed in any::<u64>(), which in any::<u8>()) {
        let ctx = context(which, seed);
        let t = random_class_mask(&mut rng(seed), &ctx, 0);
        let dec = algorithm1(&t, &ctx).unwrap();
        check_factorization(&t, &dec.entries, &ctx)?;
        dec.verify().unwrap();
    }

    #[test]
    fn class_one_entries_from_class_two_masks(seed in any::<u64>(), which in any::<u8>()) {
        let ctx = context(which, seed);
        let t = random_class_mask(&mut rng(seed), &ctx, 1);
        let dec = algorithm1(&t, &ctx).unwrap();
        check_factorization(&t, &dec.entries, &ctx)?;
        for e in dec.entries.iter().flatten() {
            prop_assert!(oracle_in_class(e, &ctx, 0));
        }
        prop_assert!(dec.achieved_class >= 0);
    }

    #[test]
    fn class_lift(seed in any::<u64>(), which in any::<u8>()) {
        let ctx = context(which, seed);
        let t = random_class_mask(&mut rng(seed), &ctx, 2);
        let dec = decompose(&t, &ctx, 2).unwrap();
        check_factorization(&t, &dec.entries, &ctx)?;
        for e in dec.entries.iter().flatten() {
            prop_assert!(oracle_in_class(e, &ctx, 1));
        }
        prop_assert_eq!(dec.achieved_class, 1);
    }

    #[test]
    fn second_level_values_at_origin(seed in any::<u64>(), which in any::<u8>()) {
        let ctx = context(which, seed);
        let d = ctx.dim();
        let t = random_class_mask(&mut rng(seed), &ctx, 1);
        let it = iterated_decomposition(&t, &ctx, 2, 2).unwrap();
        prop_assert_eq!(it.size(), d * d);
        let t0 = t.value_at_zero();
        let deltas: Vec<TrigPoly> = (0..d).map(|j| dilated_difference(&ctx, j)).collect();
        for k in 0..d * d {
            let (k1, k2) = (k / d, k % d);
            let lhs = &(&TrigPoly::one_minus_z(d, k1) * &TrigPoly::one_minus_z(d, k2)) * &t;
            let mut rhs = TrigPoly::zero(d);
            for j in 0..d * d {
                let (j1, j2) = (j / d, j % d);
                // Kronecker square of M*^{-1}
                let w: BigRational = ctx.inverse_entry(j1, k1) * ctx.inverse_entry(j2, k2);
                prop_assert_eq!(it.matrix[k][j].value_at_zero(), t0.scale(&w));
                rhs = &rhs + &(&it.matrix[k][j] * &(&deltas[j1] * &deltas[j2]));
            }
            prop_assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn unit_mask_has_no_decomposition() {
    let ctx = worked_ctx();
    let t = TrigPoly::constant(2, Cyclotomic::from(BigRational::one()));
    assert!(algorithm1(&t, &ctx).is_err());
    assert!(decompose(&random_class_mask(&mut rng(5), &ctx, 1), &ctx, 2).is_err());
}
