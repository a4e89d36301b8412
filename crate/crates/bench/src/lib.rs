//! Fixtures for the criterion benchmarks.

use maskforge::{
    mask_from_lambdas, Cyclotomic, DigitStrategy, DilationContext, IntMatrix, LambdaTable, TrigPoly,
};
use num_rational::BigRational;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn poly(terms: &[([i64; 2], i64)]) -> TrigPoly {
    TrigPoly::from_rational_terms(2, terms.iter().map(|(f, n)| (f.to_vec(), q(*n, 16))))
}

/// The quincunx-like dilation `[[0, 2], [2, -1]]` with digits `(0,0), (1,0), (0,1), (1,1)`.
pub fn worked_context() -> DilationContext {
    DilationContext::with_digits(
        IntMatrix::from_rows(&[vec![0, 2], vec![2, -1]]).unwrap(),
        DigitStrategy::UserSupplied(vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]),
        DigitStrategy::Canonical,
    )
    .unwrap()
}

pub fn worked_mask() -> TrigPoly {
    let taus = [
        poly(&[([0, 0], 4), ([1, 0], 4), ([0, 1], 4), ([1, 1], 4)]),
        poly(&[
            ([0, 0], 5),
            ([1, 0], 4),
            ([-1, 0], 1),
            ([0, 1], 2),
            ([0, -1], 3),
            ([1, 1], 1),
        ]),
        poly(&[
            ([0, 0], 4),
            ([1, 0], 1),
            ([-1, 0], 2),
            ([0, 1], 5),
            ([0, -1], 1),
            ([1, 1], 3),
        ]),
        poly(&[
            ([0, 0], 5),
            ([1, 0], 1),
            ([-1, 0], 4),
            ([0, 1], 1),
            ([0, -1], 3),
            ([1, 1], 1),
            ([-1, 1], 1),
        ]),
    ];
    TrigPoly::polyphase_assemble(&taus, &worked_context()).unwrap()
}

/// A mask in `Z^order` built from a fixed lambda table.
pub fn class_mask(ctx: &DilationContext, order: u32) -> TrigPoly {
    let values = maskforge::trigpoly::multi_indices_up_to(ctx.dim(), order)
        .into_iter()
        .enumerate()
        .map(|(i, beta)| {
            let v = if i == 0 {
                BigRational::from_integer((ctx.m() as i64).into())
            } else {
                q(i as i64 % 5 - 2, 3)
            };
            (beta, Cyclotomic::from(v))
        })
        .collect();
    mask_from_lambdas(ctx, &LambdaTable { order, values }).unwrap()
}
