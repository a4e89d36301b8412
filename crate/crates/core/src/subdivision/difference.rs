use crate::decompose::{algorithm1, MaskDecomposition};
use crate::error::{Error, Result};
use crate::lattice::DilationContext;
use crate::trigpoly::TrigPoly;

use super::mask::MatrixMask;

/// Difference scheme `T` of a scalar mask: `grad S_t f = S_T grad f`, with `T[k][j] = t_jk`.
pub fn difference_symbol(
    t: &TrigPoly,
    ctx: &DilationContext,
) -> Result<(MaskDecomposition, MatrixMask)> {
    let dec = algorithm1(t, ctx)?;
    let symbol = MatrixMask::new(dec.symbol_matrix())?;
    Ok((dec, symbol))
}

/// Difference scheme of a square matrix mask: `grad S_T g = S_Q grad g`.
///
/// Row `(i, k)` and column `(l, j)` are flattened as `i d + k` and `l d + j`;
/// the entry is `t_jk` from decomposing `T_il`.
pub fn matrix_difference_symbol(mask: &MatrixMask, ctx: &DilationContext) -> Result<MatrixMask> {
    let (rows, cols) = mask.shape();
    if rows != cols {
        return Err(Error::ShapeMismatch(format!(
            "difference scheme needs a square mask, got {rows}x{cols}"
        )));
    }
    let d = ctx.dim();
    let mut entries = vec![vec![TrigPoly::zero(d); cols * d]; rows * d];
    for i in 0..rows {
        for l in 0..cols {
            let dec = algorithm1(mask.entry(i, l), ctx)?;
            for k in 0..d {
                for j in 0..d {
                    entries[i * d + k][l * d + j] = dec.entries[j][k].clone();
                }
            }
        }
    }
    MatrixMask::new(entries)
}
