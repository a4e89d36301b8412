//! Independent oracles and random generators shared by the property and acceptance suites.

use std::collections::BTreeMap;

use maskforge::subdivision::MatrixMask;
use maskforge::trigpoly::multi_indices_up_to;
use maskforge::{
    mask_from_lambdas, Cyclotomic, DilationContext, IVec, IntMatrix, LambdaTable, TrigPoly,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rational(rng: &mut ChaCha8Rng) -> BigRational {
    let den = [1, 2, 3, 4, 8][rng.gen_range(0..5)];
    BigRational::new(BigInt::from(rng.gen_range(-6..=6)), BigInt::from(den))
}

fn nonzero_rational(rng: &mut ChaCha8Rng) -> BigRational {
    loop {
        let q = rational(rng);
        if !q.is_zero() {
            return q;
        }
    }
}

pub fn random_poly(rng: &mut ChaCha8Rng, dim: usize, terms: usize, radius: i64) -> TrigPoly {
    TrigPoly::from_rational_terms(
        dim,
        (0..terms).map(|_| {
            (
                (0..dim).map(|_| rng.gen_range(-radius..=radius)).collect(),
                nonzero_rational(rng),
            )
        }),
    )
}

/// Random expanding integer matrix with `2 <= |det| <= max_det`.
pub fn random_dilation(rng: &mut ChaCha8Rng, dim: usize, max_det: i64) -> DilationContext {
    loop {
        let rows: Vec<Vec<i64>> = (0..dim)
            .map(|_| (0..dim).map(|_| rng.gen_range(-3..=3)).collect())
            .collect();
        let m = IntMatrix::from_rows(&rows).unwrap();
        let det = m.determinant().abs();
        if det < 2 || det > max_det {
            continue;
        }
        if let Ok(ctx) = DilationContext::new(m) {
            return ctx;
        }
    }
}

pub fn random_lambda_table(rng: &mut ChaCha8Rng, ctx: &DilationContext, order: u32) -> LambdaTable {
    let m = BigRational::from_integer(BigInt::from(ctx.m()));
    let values = multi_indices_up_to(ctx.dim(), order)
        .into_iter()
        .map(|beta| {
            let v = if beta.iter().all(|&b| b == 0) {
                m.clone()
            } else {
                rational(rng)
            };
            (beta, Cyclotomic::from(v))
        })
        .collect();
    LambdaTable { order, values }
}

/// `u(M* x) v(x)` with `u` a product of `order + 1` factors `1 - z_a`: vanishes to
/// order `order + 1` wherever the zero conditions look, so adding it keeps the class.
pub fn class_preserving_term(rng: &mut ChaCha8Rng, ctx: &DilationContext, order: u32) -> TrigPoly {
    let d = ctx.dim();
    let mut u = TrigPoly::one(d);
    for _ in 0..=order {
        u = &u * &TrigPoly::one_minus_z(d, rng.gen_range(0..d));
    }
    &u.compose_dilate(ctx.matrix()) * &random_poly(rng, d, 2, 1)
}

/// A mask in `Z^order` with `t(0) = m`: a lambda-table mask plus class-preserving noise.
pub fn random_class_mask(rng: &mut ChaCha8Rng, ctx: &DilationContext, order: u32) -> TrigPoly {
    let mut t = mask_from_lambdas(ctx, &random_lambda_table(rng, ctx, order)).unwrap();
    for _ in 0..rng.gen_range(0..=2) {
        t = &t + &class_preserving_term(rng, ctx, order);
    }
    t
}

/// Exact zero-condition test straight from the definition: every normalized
/// derivative of order `<= n` of `t(M*^{-1} x)` vanishes at the nonzero dual digits.
pub fn oracle_in_class(t: &TrigPoly, ctx: &DilationContext, n: u32) -> bool {
    let terms: Vec<(Vec<BigRational>, &Cyclotomic)> =
        t.terms().map(|(f, c)| (ctx.apply_inverse(f), c)).collect();
    for s in ctx.dual_digits().iter().skip(1) {
        for beta in multi_indices_up_to(ctx.dim(), n) {
            let mut acc = Cyclotomic::zero();
            for (y, c) in &terms {
                let mut w = BigRational::one();
                for (yj, &bj) in y.iter().zip(&beta) {
                    for _ in 0..bj {
                        w *= yj;
                    }
                }
                let phase: BigRational = y
                    .iter()
                    .zip(s)
                    .map(|(yj, &sj)| yj * BigRational::from_integer(sj.into()))
                    .sum();
                acc += &(&Cyclotomic::exp_2pi_i(&phase) * *c).scale(&w);
            }
            if !acc.is_zero() {
                return false;
            }
        }
    }
    true
}

/// Largest `n <= cap` with [`oracle_in_class`], or `-1`.
pub fn oracle_order(t: &TrigPoly, ctx: &DilationContext, cap: u32) -> i64 {
    (0..=cap)
        .take_while(|&n| oracle_in_class(t, ctx, n))
        .count() as i64
        - 1
}

/// Random rational matrix mask with few terms, for the sign-pattern oracle.
pub fn random_matrix_mask(
    rng: &mut ChaCha8Rng,
    dim: usize,
    size: usize,
    terms: usize,
) -> MatrixMask {
    let mut entries = vec![Vec::with_capacity(size); size];
    for row in entries.iter_mut() {
        for _ in 0..size {
            let n = rng.gen_range(0..=terms);
            row.push(random_poly(rng, dim, n, 2));
        }
    }
    MatrixMask::new(entries).unwrap()
}

/// `sup_{|f| <= 1} ||S_A f||_inf`, found by enumerating every sign pattern of `f`
/// on the inputs that reach each output coset representative.
pub fn brute_force_norm(mask: &MatrixMask, m: &IntMatrix, digits: &[IVec]) -> BigRational {
    let (rows, cols) = mask.shape();
    let mut coeffs: BTreeMap<IVec, Vec<Vec<BigRational>>> = BTreeMap::new();
    for i in 0..rows {
        for j in 0..cols {
            for (f, c) in mask.entry(i, j).terms() {
                let slot = coeffs
                    .entry(f.clone())
                    .or_insert_with(|| vec![vec![BigRational::zero(); cols]; rows]);
                slot[i][j] = c.as_rational().expect("rational mask").clone();
            }
        }
    }
    let inverse = m.inverse().unwrap();
    let mut best = BigRational::zero();
    for beta in digits {
        // inputs alpha with beta - M alpha in the support
        let mut inputs: Vec<(IVec, Vec<Vec<BigRational>>)> = Vec::new();
        for (f, a) in &coeffs {
            let diff: IVec = beta.iter().zip(f).map(|(b, x)| b - x).collect();
            let alpha: Vec<BigRational> = inverse
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(&diff)
                        .map(|(r, &x)| r * BigRational::from_integer(x.into()))
                        .sum()
                })
                .collect();
            if alpha.iter().all(|x| x.is_integer()) {
                inputs.push((
                    alpha
                        .iter()
                        .map(|x| x.to_integer().try_into().unwrap())
                        .collect(),
                    a.clone(),
                ));
            }
        }
        let slots = inputs.len() * cols;
        assert!(
            slots <= 16,
            "sign-pattern enumeration too large ({slots} slots)"
        );
        for pattern in 0u32..(1 << slots) {
            for i in 0..rows {
                let mut acc = BigRational::zero();
                for (p, (_, a)) in inputs.iter().enumerate() {
                    for j in 0..cols {
                        let bit = pattern >> (p * cols + j) & 1;
                        if bit == 1 {
                            acc -= &a[i][j];
                        } else {
                            acc += &a[i][j];
                        }
                    }
                }
                if acc.abs() > best {
                    best = acc.abs();
                }
            }
        }
    }
    best
}

/// Closed form of the hat function `max(0, 1 - |x|)`.
pub fn hat(x: &BigRational) -> BigRational {
    let v = BigRational::one() - x.abs();
    if v.is_negative() {
        BigRational::zero()
    } else {
        v
    }
}
