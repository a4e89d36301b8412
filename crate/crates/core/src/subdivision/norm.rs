use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cyclotomic::Cyclotomic;
use crate::interval::Interval;
use crate::lattice::{coset_key, IVec, IntMatrix};

use super::mask::MatrixMask;

/// Stop growing power symbols beyond this many stored matrix entries.
pub const DEFAULT_TERM_BUDGET: usize = 1 << 21;

/// Rational matrix symbol over a common denominator.
#[derive(Clone, Debug)]
struct IntegerSymbol {
    rows: usize,
    cols: usize,
    denom: BigInt,
    coeffs: HashMap<IVec, Vec<BigInt>>,
}

impl IntegerSymbol {
    fn from_mask(mask: &MatrixMask) -> Option<Self> {
        let (rows, cols) = mask.shape();
        let mut denom = BigInt::one();
        for e in mask.entries().iter().flatten() {
            for (_, c) in e.terms() {
                denom = denom.lcm(c.as_rational()?.denom());
            }
        }
        let mut coeffs: HashMap<IVec, Vec<BigInt>> = HashMap::new();
        for (i, row) in mask.entries().iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                for (f, c) in e.terms() {
                    let r = c.as_rational()?;
                    let v = r.numer() * (&denom / r.denom());
                    coeffs
                        .entry(f.clone())
                        .or_insert_with(|| vec![BigInt::zero(); rows * cols])[i * cols + j] = v;
                }
            }
        }
        Some(IntegerSymbol {
            rows,
            cols,
            denom,
            coeffs,
        })
    }

    fn entry_count(&self) -> usize {
        self.coeffs.len() * self.rows * self.cols
    }

    /// `self(x) * other(M_pow* x)`.
    fn mul_dilated(&self, other: &IntegerSymbol, m_pow: &IntMatrix) -> IntegerSymbol {
        let (n, p, q) = (self.rows, self.cols, other.cols);
        let shifted: Vec<(IVec, &Vec<BigInt>)> = other
            .coeffs
            .iter()
            .map(|(f, a)| (m_pow.mul_vec(f), a))
            .collect();
        let mut coeffs: HashMap<IVec, Vec<BigInt>> = HashMap::new();
        for (fa, a) in &self.coeffs {
            for (fb, b) in &shifted {
                let key: IVec = fa.iter().zip(fb).map(|(x, y)| x + y).collect();
                let slot = coeffs
                    .entry(key)
                    .or_insert_with(|| vec![BigInt::zero(); n * q]);
                for i in 0..n {
                    for l in 0..p {
                        let x = &a[i * p + l];
                        if x.is_zero() {
                            continue;
                        }
                        for j in 0..q {
                            let y = &b[l * q + j];
                            if !y.is_zero() {
                                slot[i * q + j] += x * y;
                            }
                        }
                    }
                }
            }
        }
        coeffs.retain(|_, v| v.iter().any(|x| !x.is_zero()));
        IntegerSymbol {
            rows: n,
            cols: q,
            denom: &self.denom * &other.denom,
            coeffs,
        }
    }

    fn norm(&self, dilation: &IntMatrix) -> BigRational {
        let mut sums: HashMap<IVec, Vec<BigInt>> = HashMap::new();
        for (f, a) in &self.coeffs {
            let slot = sums
                .entry(coset_key(dilation, f))
                .or_insert_with(|| vec![BigInt::zero(); self.rows]);
            for i in 0..self.rows {
                for j in 0..self.cols {
                    slot[i] += a[i * self.cols + j].abs();
                }
            }
        }
        let best = sums
            .values()
            .flatten()
            .max()
            .cloned()
            .unwrap_or_else(BigInt::zero);
        BigRational::new(best, self.denom.clone())
    }

    fn to_mask(&self, dim: usize) -> MatrixMask {
        let mut map = BTreeMap::new();
        for (f, a) in &self.coeffs {
            let m: Vec<Vec<Cyclotomic>> = (0..self.rows)
                .map(|i| {
                    (0..self.cols)
                        .map(|j| {
                            Cyclotomic::from_rational(BigRational::new(
                                a[i * self.cols + j].clone(),
                                self.denom.clone(),
                            ))
                        })
                        .collect()
                })
                .collect();
            map.insert(f.clone(), m);
        }
        MatrixMask::from_coefficients(dim, self.rows, self.cols, &map).expect("shape preserved")
    }
}

fn general_norm(mask: &MatrixMask, dilation: &IntMatrix, bits: u32) -> Interval {
    let (rows, _) = mask.shape();
    let mut sums: HashMap<IVec, Vec<Interval>> = HashMap::new();
    for (i, row) in mask.entries().iter().enumerate() {
        for e in row {
            for (f, c) in e.terms() {
                let slot = sums
                    .entry(coset_key(dilation, f))
                    .or_insert_with(|| vec![Interval::zero(); rows]);
                slot[i] = slot[i].add(&c.magnitude_interval(bits)).round_out(bits);
            }
        }
    }
    let mut best = Interval::zero();
    for iv in sums.values().flatten() {
        let lo = if iv.lo > best.lo {
            iv.lo.clone()
        } else {
            best.lo.clone()
        };
        let hi = if iv.hi > best.hi {
            iv.hi.clone()
        } else {
            best.hi.clone()
        };
        best = Interval::new(lo, hi);
    }
    best
}

/// `||S_T||_inf` with dilation `m`: the largest row sum of `|A_alpha|` over a coset of `m Z^d`.
pub fn operator_norm(mask: &MatrixMask, m: &IntMatrix, precision_bits: u32) -> Interval {
    match IntegerSymbol::from_mask(mask) {
        Some(s) => Interval::point(s.norm(m)),
        None => general_norm(mask, m, precision_bits),
    }
}

/// Symbol of `S_T^k`: `T(x) T(M* x) ... T(M*^{k-1} x)`, acting with dilation `M^k`.
pub fn power_symbol(mask: &MatrixMask, m: &IntMatrix, k: u32) -> MatrixMask {
    assert!(k >= 1, "power must be positive");
    if let Some(s) = IntegerSymbol::from_mask(mask) {
        let mut p = s.clone();
        for j in 1..k {
            p = p.mul_dilated(&s, &m.pow(j));
        }
        return p.to_mask(mask.dim());
    }
    let mut p = mask.clone();
    for j in 1..k {
        p = p.mul(&mask.compose_dilate(&m.pow(j))).expect("square mask");
    }
    p
}

/// Norms `||S_T^L||` for `L = 1, 2, ...` until `stop` returns true, `max_level` is reached,
/// or the power symbol outgrows `term_budget`. The flag reports budget exhaustion.
pub fn norm_trajectory<F>(
    mask: &MatrixMask,
    m: &IntMatrix,
    max_level: u32,
    precision_bits: u32,
    term_budget: usize,
    mut stop: F,
) -> (Vec<Interval>, bool)
where
    F: FnMut(u32, &Interval) -> bool,
{
    let mut out = Vec::new();
    if max_level == 0 {
        return (out, false);
    }
    if let Some(s) = IntegerSymbol::from_mask(mask) {
        let mut p = s.clone();
        for level in 1..=max_level {
            if level > 1 {
                p = p.mul_dilated(&s, &m.pow(level - 1));
            }
            if p.entry_count() > term_budget {
                return (out, true);
            }
            let norm = Interval::point(p.norm(&m.pow(level)));
            let done = stop(level, &norm);
            out.push(norm);
            if done {
                break;
            }
        }
        return (out, false);
    }
    let mut p = mask.clone();
    for level in 1..=max_level {
        if level > 1 {
            p = p
                .mul(&mask.compose_dilate(&m.pow(level - 1)))
                .expect("square mask");
        }
        if p.entries().iter().flatten().map(|e| e.len()).sum::<usize>() > term_budget {
            return (out, true);
        }
        let norm = general_norm(&p, &m.pow(level), precision_bits);
        let done = stop(level, &norm);
        out.push(norm);
        if done {
            break;
        }
    }
    (out, false)
}

/// `sum_beta A_{alpha - M beta}` for each coset of `M Z^d`, keyed by coset key.
pub fn coset_sums(mask: &MatrixMask, m: &IntMatrix) -> BTreeMap<IVec, Vec<Vec<Cyclotomic>>> {
    let (rows, cols) = mask.shape();
    let mut out: BTreeMap<IVec, Vec<Vec<Cyclotomic>>> = BTreeMap::new();
    for (f, a) in mask.coefficients() {
        let slot = out
            .entry(coset_key(m, &f))
            .or_insert_with(|| vec![vec![Cyclotomic::zero(); cols]; rows]);
        for i in 0..rows {
            for j in 0..cols {
                slot[i][j] += &a[i][j];
            }
        }
    }
    out
}
