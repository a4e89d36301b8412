//! Factorizations `(1 - z_k) t(x) = sum_j t_jk(x) (1 - e^{2 pi i (M* x, e_j)})`
//! and their iterates.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::lattice::{DilationContext, IVec};
use crate::trigpoly::{multi_indices_of_order, TrigPoly};
use crate::zerocond::{g_poly, h_poly, zero_condition_order};

/// Square matrix of exact rationals, row-major.
pub type RationalMatrix = Vec<Vec<BigRational>>;

/// One level of decomposition: `entries[j][k] = t_jk` (zero-based axes).
#[derive(Clone, Debug)]
pub struct MaskDecomposition {
    pub source: TrigPoly,
    pub ctx: DilationContext,
    pub entries: Vec<Vec<TrigPoly>>,
    /// Every entry has been verified to lie in `Z^{achieved_class}` (`-1`: no claim).
    pub achieved_class: i64,
}

impl MaskDecomposition {
    pub fn dim(&self) -> usize {
        self.ctx.dim()
    }

    /// Symbol of the difference scheme: `T[k][j] = t_jk`.
    pub fn symbol_matrix(&self) -> Vec<Vec<TrigPoly>> {
        let d = self.dim();
        (0..d)
            .map(|k| (0..d).map(|j| self.entries[j][k].clone()).collect())
            .collect()
    }

    /// Re-checks the factorization identity and the values at the origin.
    pub fn verify(&self) -> Result<()> {
        verify_identity(&self.source, &self.entries, &self.ctx)?;
        verify_origin_values(&self.source, &self.entries, &self.ctx)
    }
}

/// `1 - z^{M e_j}`, i.e. `1 - e^{2 pi i (e_j, M* x)}`.
pub fn dilated_difference(ctx: &DilationContext, axis: usize) -> TrigPoly {
    let mut e = vec![0; ctx.dim()];
    e[axis] = 1;
    let col = ctx.matrix().mul_vec(&e);
    &TrigPoly::one(ctx.dim()) - &TrigPoly::monomial(col, Cyclotomic::one())
}

fn unit(dim: usize, axis: usize) -> IVec {
    let mut e = vec![0; dim];
    e[axis] = 1;
    e
}

fn verify_identity(t: &TrigPoly, entries: &[Vec<TrigPoly>], ctx: &DilationContext) -> Result<()> {
    let d = ctx.dim();
    let deltas: Vec<TrigPoly> = (0..d).map(|j| dilated_difference(ctx, j)).collect();
    for k in 0..d {
        let lhs = &TrigPoly::one_minus_z(d, k) * t;
        let rhs = (0..d).fold(TrigPoly::zero(d), |acc, j| {
            &acc + &(&entries[j][k] * &deltas[j])
        });
        if lhs != rhs {
            return Err(Error::InternalIdentityViolation(format!(
                "factorization fails for k = {}",
                k + 1
            )));
        }
    }
    Ok(())
}

fn verify_origin_values(
    t: &TrigPoly,
    entries: &[Vec<TrigPoly>],
    ctx: &DilationContext,
) -> Result<()> {
    let t0 = t.value_at_zero();
    let d = ctx.dim();
    for j in 0..d {
        for k in 0..d {
            if entries[j][k].value_at_zero() != t0.scale(ctx.inverse_entry(j, k)) {
                return Err(Error::InternalIdentityViolation(format!(
                    "t_{}{}(0) differs from (M^-1)_{}{} t(0)",
                    j + 1,
                    k + 1,
                    j + 1,
                    k + 1
                )));
            }
        }
    }
    Ok(())
}

fn verified_class(entries: &[Vec<TrigPoly>], ctx: &DilationContext, cap: u32) -> Result<i64> {
    let mut class = cap as i64;
    for row in entries {
        for e in row {
            class = class.min(zero_condition_order(e, ctx, cap)?);
        }
    }
    Ok(class)
}

/// Polyphase components `tau_{jk nu}` of every entry, indexed `[j][k][nu]`.
pub fn algorithm1_polyphase(
    t: &TrigPoly,
    ctx: &DilationContext,
) -> Result<Vec<Vec<Vec<TrigPoly>>>> {
    if zero_condition_order(t, ctx, 0)? < 0 {
        return Err(Error::NotInZ0);
    }
    let d = ctx.dim();
    let m = ctx.m();
    let taus = t.polyphase_split(ctx)?;
    let mut out = vec![vec![vec![TrigPoly::zero(d); m]; d]; d];
    for k in 0..d {
        let e_k = unit(d, k);
        for nu in 0..m {
            let s_nu = &ctx.digits()[nu];
            let target: IVec = s_nu.iter().zip(&e_k).map(|(a, b)| a - b).collect();
            let n_star = ctx.coset_index(&target, false);
            let shift: IVec = e_k
                .iter()
                .zip(s_nu)
                .zip(&ctx.digits()[n_star])
                .map(|((e, s), t)| e - s + t)
                .collect();
            let l = ctx
                .solve_integral(&shift)
                .expect("coset index yields an integral shift");
            let p = &taus[nu] - &taus[n_star].shift(&l);
            // telescoping sweep x_1, ..., x_d
            let mut current = p;
            for j in 0..d {
                let next = current.substitute_one(j)?;
                out[j][k][nu] = (&current - &next).divide_one_minus_z(j)?;
                current = next;
            }
            if !current.is_zero() {
                return Err(Error::NotInZ0);
            }
        }
    }
    Ok(out)
}

/// Decomposition of a mask in `Z^0`.
pub fn algorithm1(t: &TrigPoly, ctx: &DilationContext) -> Result<MaskDecomposition> {
    let parts = algorithm1_polyphase(t, ctx)?;
    let entries = parts
        .iter()
        .map(|row| {
            row.iter()
                .map(|taus| TrigPoly::polyphase_assemble(taus, ctx))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    verify_identity(t, &entries, ctx)?;
    verify_origin_values(t, &entries, ctx)?;
    let achieved_class = verified_class(&entries, ctx, 0)?;
    Ok(MaskDecomposition {
        source: t.clone(),
        ctx: ctx.clone(),
        entries,
        achieved_class,
    })
}

/// Normalized derivatives `D^beta a(s*_nu) / (2 pi i)^{|beta|}` for `nu >= 1`.
fn dual_digit_derivatives(a: &TrigPoly, beta: &[u32], ctx: &DilationContext) -> Vec<Cyclotomic> {
    ctx.dual_digits()
        .iter()
        .skip(1)
        .map(|s| {
            let p: Vec<BigRational> = s
                .iter()
                .map(|&x| BigRational::from_integer(x.into()))
                .collect();
            a.normalized_derivative(beta, &p)
        })
        .collect()
}

fn interpolate_at_dual_digits(values: &[Cyclotomic], hs: &[TrigPoly], dim: usize) -> TrigPoly {
    values
        .iter()
        .zip(hs.iter().skip(1))
        .filter(|(v, _)| !v.is_zero())
        .fold(TrigPoly::zero(dim), |acc, (v, h)| &acc + &h.scale(v))
}

/// Refines a decomposition of `t` in `Z^order` so that every entry lies in `Z^{order-1}`.
pub fn algorithm2(
    t: &TrigPoly,
    dec: &MaskDecomposition,
    ctx: &DilationContext,
    order: u32,
) -> Result<MaskDecomposition> {
    let found = zero_condition_order(t, ctx, order)?;
    if found < order as i64 {
        return Err(Error::NotInClass {
            required: order as i64,
            found,
        });
    }
    let d = ctx.dim();
    let mut entries = dec.entries.clone();
    let hs: Vec<TrigPoly> = (0..ctx.m()).map(|nu| h_poly(nu, ctx)).collect();
    let deltas: Vec<TrigPoly> = (0..d).map(|j| dilated_difference(ctx, j)).collect();
    for n in 1..order {
        for l in 0..d.saturating_sub(1) {
            for k in 0..d {
                let a = entries[l][k].compose_inverse_dilate(ctx.matrix());
                let mut lower = TrigPoly::zero(d);
                let mut upper = vec![TrigPoly::zero(d); d];
                for j in (l + 1)..d {
                    for beta in multi_indices_of_order(d, n) {
                        if beta[j] == 0 || beta[l + 1..j].iter().any(|&b| b != 0) {
                            continue;
                        }
                        let values = dual_digit_derivatives(&a, &beta, ctx);
                        let interp = interpolate_at_dual_digits(&values, &hs, d);
                        if interp.is_zero() {
                            continue;
                        }
                        let mut shifted = beta.clone();
                        shifted[j] -= 1;
                        let g = g_poly(n - 1, &shifted).compose_dilate(ctx.matrix());
                        let weight = BigRational::new(-BigInt::one(), BigInt::from(beta[j]));
                        let q = (&g * &interp).scale_rational(&weight);
                        lower = &lower + &(&deltas[j] * &q);
                        upper[j] = &upper[j] + &q;
                    }
                }
                entries[l][k] = &entries[l][k] - &lower;
                for j in (l + 1)..d {
                    if !upper[j].is_zero() {
                        entries[j][k] = &entries[j][k] + &(&deltas[l] * &upper[j]);
                    }
                }
            }
            verify_identity(t, &entries, ctx)?;
        }
    }
    verify_origin_values(t, &entries, ctx)?;
    let target = order.saturating_sub(1);
    let achieved_class = verified_class(&entries, ctx, target)?;
    if achieved_class < target as i64 {
        return Err(Error::InternalIdentityViolation(format!(
            "refined entries reach only Z^{achieved_class}, expected Z^{target}"
        )));
    }
    Ok(MaskDecomposition {
        source: t.clone(),
        ctx: ctx.clone(),
        entries,
        achieved_class,
    })
}

/// The two-variable, order-two update written out explicitly.
pub fn algorithm2_planar(
    t: &TrigPoly,
    dec: &MaskDecomposition,
    ctx: &DilationContext,
) -> Result<MaskDecomposition> {
    if ctx.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: ctx.dim(),
        });
    }
    let found = zero_condition_order(t, ctx, 2)?;
    if found < 2 {
        return Err(Error::NotInClass { required: 2, found });
    }
    let hs: Vec<TrigPoly> = (0..ctx.m()).map(|nu| h_poly(nu, ctx)).collect();
    let delta1 = dilated_difference(ctx, 0);
    let delta2 = dilated_difference(ctx, 1);
    let mut entries = dec.entries.clone();
    for k in 0..2 {
        let a = entries[0][k].compose_inverse_dilate(ctx.matrix());
        let corr = interpolate_at_dual_digits(&dual_digit_derivatives(&a, &[0, 1], ctx), &hs, 2);
        entries[0][k] = &entries[0][k] + &(&delta2 * &corr);
        entries[1][k] = &entries[1][k] - &(&delta1 * &corr);
    }
    verify_identity(t, &entries, ctx)?;
    verify_origin_values(t, &entries, ctx)?;
    let achieved_class = verified_class(&entries, ctx, 1)?;
    Ok(MaskDecomposition {
        source: t.clone(),
        ctx: ctx.clone(),
        entries,
        achieved_class,
    })
}

/// Algorithm 1 followed, when `order > 1`, by the refinement of [`algorithm2`].
pub fn decompose(t: &TrigPoly, ctx: &DilationContext, order: u32) -> Result<MaskDecomposition> {
    let dec = algorithm1(t, ctx)?;
    if order > 1 {
        algorithm2(t, &dec, ctx, order)
    } else {
        Ok(dec)
    }
}

/// `n`-fold decomposition: `Delta^[n] t = T delta^[n]` with `T` of size `d^n x d^n`.
#[derive(Clone, Debug)]
pub struct IteratedDecomposition {
    pub order: u32,
    /// Every entry lies in `Z^{class_guarantee}`.
    pub class_guarantee: i64,
    /// `matrix[k][j] = t_{jk}` with multi-indices flattened first-index-most-significant.
    pub matrix: Vec<Vec<TrigPoly>>,
}

impl IteratedDecomposition {
    pub fn size(&self) -> usize {
        self.matrix.len()
    }

    /// `t_{jk}` for tuples of zero-based axes.
    pub fn entry(&self, j: &[usize], k: &[usize], dim: usize) -> &TrigPoly {
        &self.matrix[flatten(k, dim)][flatten(j, dim)]
    }
}

pub(crate) fn flatten(index: &[usize], dim: usize) -> usize {
    index.iter().fold(0, |acc, &i| acc * dim + i)
}

pub(crate) fn unflatten(mut flat: usize, dim: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = flat % dim;
        flat /= dim;
    }
    out
}

/// Decomposes `t` in `Z^{n0-1}` `n` times, each level refined as far as the class allows.
pub fn iterated_decomposition(
    t: &TrigPoly,
    ctx: &DilationContext,
    n: u32,
    n0: u32,
) -> Result<IteratedDecomposition> {
    if n == 0 || n > n0 {
        return Err(Error::ShapeMismatch(format!(
            "iteration depth {n} must lie in 1..={n0}"
        )));
    }
    let needed = n0 as i64 - 1;
    let found = zero_condition_order(t, ctx, n0 - 1)?;
    if found < needed {
        return Err(Error::NotInClass {
            required: needed,
            found,
        });
    }
    let d = ctx.dim();
    // level entries indexed [j_flat][k_flat]
    let mut level: Vec<Vec<TrigPoly>> = vec![vec![t.clone()]];
    for depth in 1..=n {
        let refine = n0 - depth;
        let size = level.len();
        let mut next = vec![vec![TrigPoly::zero(d); size * d]; size * d];
        for (jp, row) in level.iter().enumerate() {
            for (kp, entry) in row.iter().enumerate() {
                let dec = decompose(entry, ctx, refine)?;
                for jn in 0..d {
                    for kn in 0..d {
                        next[jp * d + jn][kp * d + kn] = dec.entries[jn][kn].clone();
                    }
                }
            }
        }
        level = next;
    }
    let size = level.len();
    let matrix = (0..size)
        .map(|k| (0..size).map(|j| level[j][k].clone()).collect())
        .collect();
    let it = IteratedDecomposition {
        order: n,
        class_guarantee: n0 as i64 - n as i64 - 1,
        matrix,
    };
    verify_iterated(t, ctx, &it)?;
    Ok(it)
}

/// Checks `Delta^[n] t = T delta^[n]` and `T(0) = t(0) (M*^{-1})^[n]` exactly.
pub fn verify_iterated(
    t: &TrigPoly,
    ctx: &DilationContext,
    it: &IteratedDecomposition,
) -> Result<()> {
    let d = ctx.dim();
    let n = it.order as usize;
    let size = it.size();
    let deltas: Vec<TrigPoly> = (0..d).map(|j| dilated_difference(ctx, j)).collect();
    let delta_products: Vec<TrigPoly> = (0..size)
        .map(|j| {
            unflatten(j, d, n)
                .iter()
                .fold(TrigPoly::one(d), |acc, &a| &acc * &deltas[a])
        })
        .collect();
    let inv_t: RationalMatrix = (0..d)
        .map(|i| (0..d).map(|j| ctx.inverse_entry(j, i).clone()).collect())
        .collect();
    let expected = kronecker_power(&inv_t, it.order);
    let t0 = t.value_at_zero();
    for k in 0..size {
        let lhs = unflatten(k, d, n)
            .iter()
            .fold(t.clone(), |acc, &a| &acc * &TrigPoly::one_minus_z(d, a));
        let rhs = (0..size).fold(TrigPoly::zero(d), |acc, j| {
            &acc + &(&it.matrix[k][j] * &delta_products[j])
        });
        if lhs != rhs {
            return Err(Error::InternalIdentityViolation(format!(
                "iterated factorization fails in row {k}"
            )));
        }
        for j in 0..size {
            if it.matrix[k][j].value_at_zero() != t0.scale(&expected[k][j]) {
                return Err(Error::InternalIdentityViolation(format!(
                    "T(0) differs at ({k}, {j})"
                )));
            }
        }
    }
    Ok(())
}

/// `A^[0] = (1)`, `A^[n+1] = (a_ij A^[n])`.
pub fn kronecker_power(a: &RationalMatrix, n: u32) -> RationalMatrix {
    let mut acc: RationalMatrix = vec![vec![BigRational::one()]];
    for _ in 0..n {
        let d = a.len();
        let s = acc.len();
        let mut next = vec![vec![BigRational::zero(); d * s]; d * s];
        for (i, row) in a.iter().enumerate() {
            for (j, aij) in row.iter().enumerate() {
                for (p, acc_row) in acc.iter().enumerate() {
                    for (q, v) in acc_row.iter().enumerate() {
                        next[i * s + p][j * s + q] = aij * v;
                    }
                }
            }
        }
        acc = next;
    }
    acc
}
