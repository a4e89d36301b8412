mod common;

use common::oracle::*;
use common::worked_ctx;
use maskforge::subdivision::{
    apply, coset_sums, difference_symbol, gradient, matrix_difference_symbol, operator_norm,
    power_symbol, MatrixMask, Sequence,
};
use maskforge::{Cyclotomic, DilationContext, IntMatrix};
use num_rational::BigRational;
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn context(which: u8, seed: u64) -> DilationContext {
    match which % 4 {
        0 => worked_ctx(),
        1 => {
            DilationContext::new(IntMatrix::from_rows(&[vec![1, -1], vec![1, 1]]).unwrap()).unwrap()
        }
        2 => random_dilation(&mut rng(seed), 1, 4),
        _ => random_dilation(&mut rng(seed), 2, 4),
    }
}

fn random_sequence(r: &mut ChaCha8Rng, dim: usize, width: usize, points: usize) -> Sequence {
    let values = (0..points).map(|_| {
        let at = (0..dim).map(|_| r.gen_range(-2..=2)).collect();
        (
            at,
            (0..width)
                .map(|_| rational(r))
                .collect::<Vec<BigRational>>(),
        )
    });
    Sequence::from_rational_values(dim, width, values).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn difference_scheme_intertwines_gradient(seed in any::<u64>(), which in any::<u8>()) {
        let ctx = context(which, seed);
        let mut r = rng(seed);
        let t = random_class_mask(&mut r, &ctx, 0);
        let (_, sym) = difference_symbol(&t, &ctx).unwrap();
        let f = random_sequence(&mut r, ctx.dim(), 1, 3);
        let scheme = MatrixMask::scalar(t).unwrap();
        prop_assert_eq!(
            gradient(&apply(&scheme, ctx.matrix(), &f).unwrap()),
            apply(&sym, ctx.matrix(), &gradient(&f)).unwrap()
        );
    }

    #[test]
    fn second_difference_scheme_intertwines_gradient(seed in any::<u64>(), which in any::<u8>()) {
        let ctx = context(which, seed);
        let mut r = rng(seed);
        let t = random_class_mask(&mut r, &ctx, 1);
        let (_, sym) = difference_symbol(&t, &ctx).unwrap();
        let q = matrix_difference_symbol(&sym, &ctx).unwrap();
        let g = random_sequence(&mut r, ctx.dim(), ctx.dim(), 2);
        prop_assert_eq!(
            gradient(&apply(&sym, ctx.matrix(), &g).unwrap()),
            apply(&q, ctx.matrix(), &gradient(&g)).unwrap()
        );
    }

    #[test]
    fn coset_sums_are_the_inverse_transpose(seed in any::<u64>(), which in any::<u8>()) {
        let ctx = context(which, seed);
        let t = random_class_mask(&mut rng(seed), &ctx, 1);
        let (_, sym) = difference_symbol(&t, &ctx).unwrap();
        let sums = coset_sums(&sym, ctx.matrix());
        for s in ctx.digits() {
            let zero = vec![vec![Cyclotomic::zero(); ctx.dim()]; ctx.dim()];
            let sum = sums.get(&maskforge::lattice::coset_key(ctx.matrix(), s)).unwrap_or(&zero);
            for i in 0..ctx.dim() {
                for j in 0..ctx.dim() {
                    prop_assert_eq!(&sum[i][j], &Cyclotomic::from(ctx.inverse_entry(j, i).clone()));
                }
            }
        }
    }

    #[test]
    fn norm_matches_sign_pattern_oracle(seed in any::<u64>(), which in any::<u8>(), size in 1usize..=2) {
        let ctx = context(which, seed);
        let mask = random_matrix_mask(&mut rng(seed ^ 7), ctx.dim(), size, 2);
        let norm = operator_norm(&mask, ctx.matrix(), 64);
        prop_assert!(norm.is_exact());
        prop_assert_eq!(norm.hi, brute_force_norm(&mask, ctx.matrix(), ctx.digits()));
    }

    #[test]
    fn norm_is_submultiplicative(seed in any::<u64>(), which in any::<u8>()) {
        let ctx = context(which, seed);
        let mask = random_matrix_mask(&mut rng(seed), ctx.dim(), 2, 3);
        let one = operator_norm(&mask, ctx.matrix(), 64).hi;
        let two = operator_norm(&power_symbol(&mask, ctx.matrix(), 2), &ctx.matrix().pow(2), 64).hi;
        prop_assert!(two <= &one * &one);
    }

    #[test]
    fn power_symbol_is_repeated_application(seed in any::<u64>(), which in any::<u8>(), k in 1u32..=3) {
        let ctx = context(which, seed);
        let mut r = rng(seed);
        let mask = random_matrix_mask(&mut r, ctx.dim(), 2, 2);
        let f = random_sequence(&mut r, ctx.dim(), 2, 2);
        let mut iterated = f.clone();
        for _ in 0..k {
            iterated = apply(&mask, ctx.matrix(), &iterated).unwrap();
        }
        prop_assert_eq!(apply(&power_symbol(&mask, ctx.matrix(), k), &ctx.matrix().pow(k), &f).unwrap(), iterated);
    }

    #[test]
    fn apply_is_linear(seed in any::<u64>(), which in any::<u8>()) {
        let ctx = context(which, seed);
        let mut r = rng(seed);
        let mask = random_matrix_mask(&mut r, ctx.dim(), 2, 3);
        let f = random_sequence(&mut r, ctx.dim(), 2, 3);
        let g = random_sequence(&mut r, ctx.dim(), 2, 3);
        let c = rational(&mut r);
        let scaled = Sequence::from_values(
            ctx.dim(),
            2,
            g.iter().map(|(a, v)| (a.clone(), v.iter().map(|x| x.scale(&c)).collect())),
        )
        .unwrap();
        let lhs = apply(&mask, ctx.matrix(), &f.add(&scaled).unwrap()).unwrap();
        let sg = apply(&mask, ctx.matrix(), &g).unwrap();
        let scaled_sg = Sequence::from_values(
            ctx.dim(),
            2,
            sg.iter().map(|(a, v)| (a.clone(), v.iter().map(|x| x.scale(&c)).collect())),
        )
        .unwrap();
        prop_assert_eq!(lhs, apply(&mask, ctx.matrix(), &f).unwrap().add(&scaled_sg).unwrap());
    }
}
