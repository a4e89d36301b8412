//! The classes `Z^n` of masks whose scaled symbol `t(M*^{-1} x)` vanishes to
//! order `n` at the nonzero dual digits, plus the helper polynomials used when
//! building decompositions.
//!
//! All derivatives here are normalized by `(2 pi i)^{|alpha|}` so that every
//! value stays in a cyclotomic field.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::lattice::{DilationContext, QVec};
use crate::trigpoly::{binomial, multi_indices_up_to, MultiIndex, TrigPoly};

/// Normalized parameters `lambda'_beta = D^beta t(M*^{-1} x)|_{x=0} / (2 pi i)^{|beta|}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaTable {
    pub order: u32,
    pub values: BTreeMap<MultiIndex, Cyclotomic>,
}

impl LambdaTable {
    pub fn dim(&self) -> usize {
        self.values.keys().next().map_or(0, |k| k.len())
    }

    pub fn get(&self, beta: &[u32]) -> Option<&Cyclotomic> {
        self.values.get(beta)
    }

    /// Checks that every multi-index of order `<= order` is present.
    pub fn validate(&self, dim: usize) -> Result<()> {
        for beta in multi_indices_up_to(dim, self.order) {
            if !self.values.contains_key(&beta) {
                return Err(Error::ShapeMismatch(format!(
                    "lambda table is missing beta = {beta:?}"
                )));
            }
        }
        if self.values.keys().any(|b| b.len() != dim) {
            return Err(Error::ShapeMismatch(
                "lambda table has multi-indices of the wrong dimension".into(),
            ));
        }
        Ok(())
    }
}

fn origin(dim: usize) -> Vec<BigRational> {
    vec![BigRational::zero(); dim]
}

/// All `beta <= alpha` componentwise.
pub(crate) fn lower_indices(alpha: &[u32]) -> Vec<MultiIndex> {
    let mut out = vec![vec![]];
    for &a in alpha {
        out = out
            .into_iter()
            .flat_map(|prefix: MultiIndex| {
                (0..=a).map(move |b| {
                    let mut p = prefix.clone();
                    p.push(b);
                    p
                })
            })
            .collect();
    }
    out
}

fn multi_binomial(alpha: &[u32], beta: &[u32]) -> BigRational {
    alpha
        .iter()
        .zip(beta)
        .map(|(&a, &b)| binomial(a, b))
        .product()
}

fn multi_factorial(alpha: &[u32]) -> BigInt {
    alpha
        .iter()
        .map(|&a| (1..=a).map(BigInt::from).product::<BigInt>())
        .product()
}

/// `v^alpha` for a rational vector.
fn rational_power(v: &[BigRational], alpha: &[u32]) -> BigRational {
    v.iter()
        .zip(alpha)
        .map(|(x, &a)| num_traits::pow(x.clone(), a as usize))
        .product()
}

/// Polyphase target `D^alpha tau_k(0)` (normalized) from the lambda parameters.
fn polyphase_target(
    values: &BTreeMap<MultiIndex, Cyclotomic>,
    alpha: &[u32],
    r_k: &QVec,
    m: usize,
) -> Cyclotomic {
    let neg_r: Vec<BigRational> = r_k.iter().map(|x| -x).collect();
    let mut acc = Cyclotomic::zero();
    for beta in lower_indices(alpha) {
        let lam = &values[&beta];
        if lam.is_zero() {
            continue;
        }
        let diff: MultiIndex = alpha.iter().zip(&beta).map(|(a, b)| a - b).collect();
        let w = multi_binomial(alpha, &beta) * rational_power(&neg_r, &diff);
        acc += &lam.scale(&w);
    }
    acc.scale(&BigRational::new(BigInt::one(), BigInt::from(m)))
}

/// Largest `n <= cap` for which the direct definition holds; `-1` outside `Z^0`.
pub fn zero_condition_order_direct(t: &TrigPoly, ctx: &DilationContext, cap: u32) -> Result<i64> {
    require_integer(t, ctx)?;
    let a = t.compose_inverse_dilate(ctx.matrix());
    let points: Vec<Vec<BigRational>> = ctx
        .dual_digits()
        .iter()
        .skip(1)
        .map(|s| {
            s.iter()
                .map(|&x| BigRational::from_integer(x.into()))
                .collect()
        })
        .collect();
    for n in 0..=cap {
        for beta in crate::trigpoly::multi_indices_of_order(ctx.dim(), n) {
            if points
                .iter()
                .any(|p| !a.normalized_derivative(&beta, p).is_zero())
            {
                return Ok(n as i64 - 1);
            }
        }
    }
    Ok(cap as i64)
}

/// Same as [`zero_condition_order_direct`] via the polyphase characterization.
pub fn zero_condition_order_polyphase(
    t: &TrigPoly,
    ctx: &DilationContext,
    cap: u32,
) -> Result<i64> {
    require_integer(t, ctx)?;
    let taus = t.polyphase_split(ctx)?;
    let zero = origin(ctx.dim());
    let m = ctx.m();
    let mut lambdas: BTreeMap<MultiIndex, Cyclotomic> = BTreeMap::new();
    for n in 0..=cap {
        let order_n = crate::trigpoly::multi_indices_of_order(ctx.dim(), n);
        // r_0 = 0 makes the system triangular: tau_0 alone determines lambda
        for alpha in &order_n {
            let v = taus[0]
                .normalized_derivative(alpha, &zero)
                .scale(&BigRational::from_integer(m.into()));
            lambdas.insert(alpha.clone(), v);
        }
        for alpha in &order_n {
            for (k, tau) in taus.iter().enumerate().skip(1) {
                let target = polyphase_target(&lambdas, alpha, &ctx.r()[k], m);
                if tau.normalized_derivative(alpha, &zero) != target {
                    return Ok(n as i64 - 1);
                }
            }
        }
    }
    Ok(cap as i64)
}

fn require_integer(t: &TrigPoly, ctx: &DilationContext) -> Result<()> {
    if t.dim() != ctx.dim() {
        return Err(Error::DimensionMismatch {
            expected: ctx.dim(),
            found: t.dim(),
        });
    }
    if !t.has_integer_frequencies() {
        return Err(Error::NonIntegerFrequencies(t.denom()));
    }
    Ok(())
}

/// Largest `n <= cap` with `t` in `Z^n` (or `-1`), cross-checked by two independent methods.
pub fn zero_condition_order(t: &TrigPoly, ctx: &DilationContext, cap: u32) -> Result<i64> {
    let direct = zero_condition_order_direct(t, ctx, cap)?;
    let polyphase = zero_condition_order_polyphase(t, ctx, cap)?;
    if direct != polyphase {
        return Err(Error::MethodDisagreement { direct, polyphase });
    }
    Ok(direct)
}

/// Extracts the lambda table of order `n`, verifying the polyphase relations for every `k`.
pub fn lambda_parameters(t: &TrigPoly, ctx: &DilationContext, n: u32) -> Result<LambdaTable> {
    require_integer(t, ctx)?;
    let taus = t.polyphase_split(ctx)?;
    let zero = origin(ctx.dim());
    let m = ctx.m();
    let indices = multi_indices_up_to(ctx.dim(), n);
    let values: BTreeMap<MultiIndex, Cyclotomic> = indices
        .iter()
        .map(|alpha| {
            let v = taus[0]
                .normalized_derivative(alpha, &zero)
                .scale(&BigRational::from_integer(m.into()));
            (alpha.clone(), v)
        })
        .collect();
    for alpha in &indices {
        for (k, tau) in taus.iter().enumerate().skip(1) {
            if tau.normalized_derivative(alpha, &zero)
                != polyphase_target(&values, alpha, &ctx.r()[k], m)
            {
                let found = zero_condition_order_polyphase(t, ctx, n)?;
                return Err(Error::NotInClass {
                    required: n as i64,
                    found,
                });
            }
        }
    }
    Ok(LambdaTable { order: n, values })
}

/// `G = (2 pi i)^{|delta|} g_{N delta}`: its normalized derivatives at the origin
/// are `1` for `gamma = delta` and `0` for every other `|gamma| <= N`.
pub fn g_poly(order: u32, delta: &[u32]) -> TrigPoly {
    let total: u32 = delta.iter().sum();
    assert!(total <= order, "|delta| exceeds the order");
    static CACHE: OnceLock<Mutex<HashMap<(u32, MultiIndex), TrigPoly>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (order, delta.to_vec());
    if let Some(g) = cache.lock().unwrap().get(&key) {
        return g.clone();
    }
    let g = build_g_poly(order, delta);
    cache.lock().unwrap().insert(key, g.clone());
    g
}

fn build_g_poly(order: u32, delta: &[u32]) -> TrigPoly {
    let dim = delta.len();
    // w(y) = e^{2 pi i y} - 1 vanishes at 0 with unit normalized slope
    let mut p = TrigPoly::one(dim);
    for (j, &e) in delta.iter().enumerate() {
        let w = &TrigPoly::z(dim, j) - &TrigPoly::one(dim);
        for _ in 0..e {
            p = &p * &w;
        }
    }
    p = p.scale_rational(&BigRational::new(BigInt::one(), multi_factorial(delta)));
    let zero = origin(dim);
    let total: u32 = delta.iter().sum();
    let mut g = p.clone();
    for gamma in multi_indices_up_to(dim, order) {
        let above =
            gamma.iter().sum::<u32>() > total && gamma.iter().zip(delta).all(|(a, b)| a >= b);
        if !above {
            continue;
        }
        let c = p.normalized_derivative(&gamma, &zero);
        if !c.is_zero() {
            g = &g - &g_poly(order, &gamma).scale(&c);
        }
    }
    debug_assert!(multi_indices_up_to(dim, order).iter().all(|gamma| {
        let v = g.normalized_derivative(gamma, &zero);
        if gamma.as_slice() == delta {
            v.is_one()
        } else {
            v.is_zero()
        }
    }));
    g
}

/// `H_nu(x) = h_nu(M* x)`, the interpolant with `h_nu(s*_mu) = delta_{mu nu}`.
pub fn h_poly(nu: usize, ctx: &DilationContext) -> TrigPoly {
    let s_star = &ctx.dual_digits()[nu];
    let inv_m = BigRational::new(BigInt::one(), BigInt::from(ctx.m()));
    let terms = ctx.digits().iter().zip(ctx.r()).map(|(s, r)| {
        let phase = -crate::lattice::rat_dot_int(r, s_star);
        (s.clone(), Cyclotomic::exp_2pi_i(&phase).scale(&inv_m))
    });
    TrigPoly::from_terms(ctx.dim(), 1, terms)
}

/// Builds a mask in `Z^n` with the given lambda table.
pub fn mask_from_lambdas(ctx: &DilationContext, table: &LambdaTable) -> Result<TrigPoly> {
    table.validate(ctx.dim())?;
    let m = ctx.m();
    let indices = multi_indices_up_to(ctx.dim(), table.order);
    let taus: Vec<TrigPoly> = ctx
        .r()
        .iter()
        .map(|r_k| {
            indices
                .iter()
                .fold(TrigPoly::zero(ctx.dim()), |acc, alpha| {
                    let target = polyphase_target(&table.values, alpha, r_k, m);
                    if target.is_zero() {
                        acc
                    } else {
                        &acc + &g_poly(table.order, alpha).scale(&target)
                    }
                })
        })
        .collect();
    TrigPoly::polyphase_assemble(&taus, ctx)
}
