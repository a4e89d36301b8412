//! Integer dilation matrices, congruence classes modulo `M`, and digit sets.
//!
//! Two integer vectors `k`, `n` are congruent modulo `M` when `k - n` lies in
//! `M Z^d`. With `adj(M) = det(M) M^{-1}` this is the same as
//! `adj(M)(k - n) = 0 (mod |det M|)` componentwise, which gives a cheap exact
//! coset key used throughout the crate.

use std::collections::HashMap;
use std::fmt;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};

/// Integer vector (lattice point or frequency).
pub type IVec = Vec<i64>;
/// Exact rational vector.
pub type QVec = Vec<BigRational>;

/// Eigenvalue moduli must exceed `1 + EXPANSION_TOL`.
pub const EXPANSION_TOL: f64 = 1e-9;
/// Relative tolerance under which eigenvalue moduli count as equal.
pub const ISOTROPY_TOL: f64 = 1e-6;

/// Square integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    dim: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::NotSquare {
                    rows: dim,
                    cols: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        if dim == 0 {
            return Err(Error::NotSquare { rows: 0, cols: 0 });
        }
        Ok(IntMatrix { dim, data })
    }

    pub fn identity(dim: usize) -> Self {
        Self::scalar(dim, 1)
    }

    pub fn scalar(dim: usize, value: i64) -> Self {
        let mut data = vec![0; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = value;
        }
        IntMatrix { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let d = self.dim;
        let mut data = vec![0; d * d];
        for i in 0..d {
            for j in 0..d {
                data[j * d + i] = self.get(i, j);
            }
        }
        IntMatrix { dim: d, data }
    }

    pub fn mul_vec(&self, v: &[i64]) -> IVec {
        (0..self.dim)
            .map(|i| {
                let s: i128 = (0..self.dim)
                    .map(|j| self.get(i, j) as i128 * v[j] as i128)
                    .sum();
                i64::try_from(s).expect("lattice vector overflow")
            })
            .collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        let d = self.dim;
        let mut data = vec![0; d * d];
        for i in 0..d {
            for j in 0..d {
                let s: i128 = (0..d)
                    .map(|k| self.get(i, k) as i128 * other.get(k, j) as i128)
                    .sum();
                data[i * d + j] = i64::try_from(s).expect("matrix product overflow");
            }
        }
        IntMatrix { dim: d, data }
    }

    pub fn pow(&self, exp: u32) -> IntMatrix {
        let mut acc = IntMatrix::identity(self.dim);
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }

    /// Max absolute row sum.
    pub fn inf_norm(&self) -> i64 {
        self.data
            .chunks(self.dim)
            .map(|r| r.iter().map(|x| x.abs()).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn determinant(&self) -> i64 {
        determinant(self)
    }

    /// Classical adjugate, `adj(M) M = det(M) I`.
    pub fn adjugate(&self) -> IntMatrix {
        let d = self.dim;
        if d == 1 {
            return IntMatrix {
                dim: 1,
                data: vec![1],
            };
        }
        let mut data = vec![0; d * d];
        for i in 0..d {
            for j in 0..d {
                let minor = self.minor(j, i);
                let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                data[i * d + j] = sign * determinant(&minor);
            }
        }
        IntMatrix { dim: d, data }
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> IntMatrix {
        let d = self.dim;
        let mut data = Vec::with_capacity((d - 1) * (d - 1));
        for i in (0..d).filter(|&i| i != skip_row) {
            for j in (0..d).filter(|&j| j != skip_col) {
                data.push(self.get(i, j));
            }
        }
        IntMatrix { dim: d - 1, data }
    }

    /// Exact inverse as a rational matrix (row-major rows).
    pub fn inverse(&self) -> Result<Vec<QVec>> {
        let det = self.determinant();
        if det == 0 {
            return Err(Error::Singular);
        }
        let adj = self.adjugate();
        Ok((0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| BigRational::new(BigInt::from(adj.get(i, j)), BigInt::from(det)))
                    .collect()
            })
            .collect())
    }

    fn to_big(&self) -> Vec<Vec<BigInt>> {
        self.rows()
            .into_iter()
            .map(|r| r.into_iter().map(BigInt::from).collect())
            .collect()
    }

    fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim, self.dim, |i, j| self.get(i, j) as f64)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| {
                format!(
                    "[{}]",
                    r.iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                )
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &IntMatrix) -> i64 {
    let d = m.dim;
    let mut a: Vec<Vec<i128>> = m
        .rows()
        .into_iter()
        .map(|r| r.into_iter().map(i128::from).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..d {
        if a[k][k] == 0 {
            match (k + 1..d).find(|&i| a[i][k] != 0) {
                Some(p) => {
                    a.swap(k, p);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..d {
            for j in k + 1..d {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    i64::try_from(sign * a[d - 1][d - 1]).expect("determinant overflow")
}

/// Exact `||M^L||_inf` (max absolute row sum of the integer power).
pub fn power_inf_norm(m: &IntMatrix, power: u32) -> BigInt {
    let d = m.dim;
    let base = m.to_big();
    let mut acc: Vec<Vec<BigInt>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();
    for _ in 0..power {
        acc = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| (0..d).map(|k| &acc[i][k] * &base[k][j]).sum())
                    .collect()
            })
            .collect();
    }
    acc.iter()
        .map(|r| r.iter().map(|x| x.abs()).sum::<BigInt>())
        .max()
        .unwrap_or_default()
}

/// Numerical eigenvalue moduli.
pub fn eigenvalue_moduli(m: &IntMatrix) -> Vec<f64> {
    m.to_f64()
        .complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .collect()
}

/// Checks `det M != 0` and that every eigenvalue has modulus `> 1 + EXPANSION_TOL`.
pub fn check_dilation(m: &IntMatrix) -> Result<()> {
    if m.determinant() == 0 {
        return Err(Error::Singular);
    }
    if let Some(&modulus) = eigenvalue_moduli(m)
        .iter()
        .find(|&&x| x <= 1.0 + EXPANSION_TOL)
    {
        return Err(Error::NotExpanding { modulus });
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Isotropy {
    Yes,
    No,
    Inconclusive,
}

impl fmt::Display for Isotropy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Isotropy::Yes => "yes",
            Isotropy::No => "no",
            Isotropy::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug)]
pub struct IsotropyReport {
    pub verdict: Isotropy,
    pub eigenvalue_moduli: Vec<f64>,
    /// Exact diagonalizability over C (squarefree part of the characteristic polynomial annihilates M).
    pub diagonalizable: bool,
    /// `max_{1<=k<=K} ||M^k||_inf ||M^{-k}||_inf`.
    pub max_similarity_product: f64,
}

/// Three-valued isotropy probe.
///
/// Equal eigenvalue moduli plus a full eigenvector basis is the operative
/// test. The supremum over all `k` cannot be decided by finite computation,
/// so the observed products up to `probe_depth` are reported alongside.
pub fn is_isotropic(m: &IntMatrix, probe_depth: u32) -> IsotropyReport {
    let moduli = eigenvalue_moduli(m);
    let max = moduli.iter().cloned().fold(f64::MIN, f64::max);
    let min = moduli.iter().cloned().fold(f64::MAX, f64::min);
    let diagonalizable = is_diagonalizable(m);
    let verdict = if max > min * (1.0 + ISOTROPY_TOL) {
        Isotropy::No
    } else if diagonalizable {
        Isotropy::Yes
    } else {
        Isotropy::Inconclusive
    };

    let det = BigInt::from(m.determinant());
    let adj = m.adjugate();
    let mut product = 0.0f64;
    for k in 1..=probe_depth {
        let num = BigRational::from_integer(power_inf_norm(m, k));
        let inv = BigRational::new(
            power_inf_norm(&adj, k),
            num_traits::pow(det.abs(), k as usize),
        );
        product = product.max((num * inv).to_f64().unwrap_or(f64::INFINITY));
    }
    IsotropyReport {
        verdict,
        eigenvalue_moduli: moduli,
        diagonalizable,
        max_similarity_product: product,
    }
}

// --- exact polynomial helpers for the diagonalizability test ---

type QPoly = Vec<BigRational>; // ascending coefficients

fn qpoly_trim(mut p: QPoly) -> QPoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn qpoly_rem(a: &QPoly, b: &QPoly) -> QPoly {
    let mut r = a.clone();
    let lb = b.last().expect("nonzero divisor").clone();
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let factor = r.last().unwrap() / &lb;
        for (i, c) in b.iter().enumerate() {
            r[shift + i] = &r[shift + i] - &factor * c;
        }
        r = qpoly_trim(r);
    }
    r
}

fn qpoly_div(a: &QPoly, b: &QPoly) -> QPoly {
    let mut r = a.clone();
    let lb = b.last().expect("nonzero divisor").clone();
    let mut q = vec![BigRational::zero(); a.len().saturating_sub(b.len()) + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let factor = r.last().unwrap() / &lb;
        for (i, c) in b.iter().enumerate() {
            r[shift + i] = &r[shift + i] - &factor * c;
        }
        q[shift] = factor;
        r = qpoly_trim(r);
    }
    qpoly_trim(q)
}

fn qpoly_gcd(a: &QPoly, b: &QPoly) -> QPoly {
    let (mut a, mut b) = (qpoly_trim(a.clone()), qpoly_trim(b.clone()));
    while !b.is_empty() {
        let r = qpoly_rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

type QMat = Vec<Vec<BigRational>>;

fn qmat_mul(a: &QMat, b: &QMat) -> QMat {
    let d = a.len();
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| (0..d).fold(BigRational::zero(), |s, k| s + &a[i][k] * &b[k][j]))
                .collect()
        })
        .collect()
}

fn qmat_identity(d: usize) -> QMat {
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect()
}

/// Characteristic polynomial `det(xI - M)` via Faddeev-LeVerrier (ascending coefficients).
fn characteristic_polynomial(m: &IntMatrix) -> QPoly {
    let d = m.dim;
    let a: QMat = m
        .rows()
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| BigRational::from_integer(x.into()))
                .collect()
        })
        .collect();
    let mut coeffs = vec![BigRational::zero(); d + 1];
    coeffs[d] = BigRational::one();
    let mut mk = qmat_identity(d);
    for k in 1..=d {
        let am = qmat_mul(&a, &mk);
        let trace = (0..d).fold(BigRational::zero(), |s, i| s + &am[i][i]);
        let c = -trace / BigRational::from_integer(BigInt::from(k));
        coeffs[d - k] = c.clone();
        mk = am;
        for i in 0..d {
            mk[i][i] = &mk[i][i] + &c;
        }
    }
    coeffs
}

fn is_diagonalizable(m: &IntMatrix) -> bool {
    let p = characteristic_polynomial(m);
    let dp: QPoly = qpoly_trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
            .collect(),
    );
    let g = qpoly_gcd(&p, &dp);
    let sq = qpoly_div(&p, &g);
    let d = m.dim;
    let a: QMat = m
        .rows()
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| BigRational::from_integer(x.into()))
                .collect()
        })
        .collect();
    // Horner evaluation of sq(M).
    let mut acc: QMat = vec![vec![BigRational::zero(); d]; d];
    for c in sq.iter().rev() {
        acc = qmat_mul(&acc, &a);
        for i in 0..d {
            acc[i][i] = &acc[i][i] + c;
        }
    }
    acc.iter().all(|r| r.iter().all(|x| x.is_zero()))
}

// --- digit sets ---

/// How the digit representatives are chosen.
#[derive(Clone, Debug)]
pub enum DigitStrategy {
    /// Box enumeration by (max-norm, lexicographic), first representative per coset.
    /// Within a component, values are ordered 0, 1, -1, 2, -2, ...
    Canonical,
    UserSupplied(Vec<IVec>),
}

/// Exact coset classifier for `Z^d / M Z^d`.
#[derive(Clone, Debug)]
struct CosetKey {
    adj: IntMatrix,
    modulus: i64,
}

impl CosetKey {
    fn new(m: &IntMatrix) -> Self {
        CosetKey {
            adj: m.adjugate(),
            modulus: m.determinant().abs(),
        }
    }

    fn key(&self, n: &[i64]) -> IVec {
        self.adj
            .mul_vec(n)
            .into_iter()
            .map(|x| x.rem_euclid(self.modulus))
            .collect()
    }
}

/// Coset key of `n` modulo `m` (`m` nonsingular). Equal keys iff congruent.
pub fn coset_key(m: &IntMatrix, n: &[i64]) -> IVec {
    CosetKey::new(m).key(n)
}

fn box_points(dim: usize, radius: i64) -> Vec<IVec> {
    let mut pts: Vec<IVec> = vec![vec![]];
    for _ in 0..dim {
        pts = pts
            .into_iter()
            .flat_map(|p| {
                (-radius..=radius).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    // Components compare in the enumeration order 0, 1, -1, 2, -2, ...
    let rank = |v: &IVec| -> (i64, Vec<i64>) {
        let norm = v.iter().map(|x| x.abs()).max().unwrap_or(0);
        (
            norm,
            v.iter().map(|&x| 2 * x.abs() - i64::from(x > 0)).collect(),
        )
    };
    pts.sort_by_cached_key(rank);
    pts
}

/// Builds an ordered digit set for `m`, with `s_0 = 0`.
pub fn digit_set(m: &IntMatrix, strategy: &DigitStrategy) -> Result<Vec<IVec>> {
    let det = m.determinant();
    if det == 0 {
        return Err(Error::Singular);
    }
    let count = det.unsigned_abs() as usize;
    let keyer = CosetKey::new(m);
    match strategy {
        DigitStrategy::Canonical => {
            // Every coset meets M[0,1)^d, which lies in the box of radius ||M||_inf.
            let mut seen = HashMap::new();
            let mut digits = Vec::with_capacity(count);
            for p in box_points(m.dim(), m.inf_norm()) {
                let k = keyer.key(&p);
                if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(k) {
                    e.insert(digits.len());
                    digits.push(p);
                    if digits.len() == count {
                        break;
                    }
                }
            }
            debug_assert_eq!(digits.len(), count);
            Ok(digits)
        }
        DigitStrategy::UserSupplied(list) => {
            if list.len() != count {
                return Err(Error::UserDigitsInvalid(format!(
                    "expected {count} digits, got {}",
                    list.len()
                )));
            }
            if let Some(bad) = list.iter().find(|v| v.len() != m.dim()) {
                return Err(Error::UserDigitsInvalid(format!(
                    "digit {bad:?} has wrong dimension"
                )));
            }
            let zero_pos = list
                .iter()
                .position(|v| v.iter().all(|&x| x == 0))
                .ok_or_else(|| Error::UserDigitsInvalid("digit set must contain 0".into()))?;
            let mut seen: HashMap<IVec, usize> = HashMap::new();
            for (i, v) in list.iter().enumerate() {
                if let Some(j) = seen.insert(keyer.key(v), i) {
                    return Err(Error::UserDigitsInvalid(format!(
                        "digits {:?} and {:?} are congruent",
                        list[j], v
                    )));
                }
            }
            let mut digits = Vec::with_capacity(count);
            digits.push(list[zero_pos].clone());
            digits.extend(
                list.iter()
                    .enumerate()
                    .filter(|&(i, _)| i != zero_pos)
                    .map(|(_, v)| v.clone()),
            );
            Ok(digits)
        }
    }
}

/// A fixed dilation matrix together with its digit sets.
#[derive(Clone, Debug)]
pub struct DilationContext {
    matrix: IntMatrix,
    transpose: IntMatrix,
    det: i64,
    digits: Vec<IVec>,
    dual_digits: Vec<IVec>,
    r: Vec<QVec>,
    inverse: Vec<QVec>,
    primal_key: CosetKey,
    dual_key: CosetKey,
    primal_lookup: HashMap<IVec, usize>,
    dual_lookup: HashMap<IVec, usize>,
}

impl DilationContext {
    /// Canonical digit sets for both `M` and `M*`.
    pub fn new(matrix: IntMatrix) -> Result<Self> {
        Self::with_digits(matrix, DigitStrategy::Canonical, DigitStrategy::Canonical)
    }

    pub fn with_digits(
        matrix: IntMatrix,
        digits: DigitStrategy,
        dual_digits: DigitStrategy,
    ) -> Result<Self> {
        check_dilation(&matrix)?;
        let transpose = matrix.transpose();
        let det = matrix.determinant();
        let digits = digit_set(&matrix, &digits)?;
        let dual_digits = digit_set(&transpose, &dual_digits)?;
        let inverse = matrix.inverse()?;
        let r = digits.iter().map(|s| rat_mat_vec(&inverse, s)).collect();
        let primal_key = CosetKey::new(&matrix);
        let dual_key = CosetKey::new(&transpose);
        let primal_lookup = digits
            .iter()
            .enumerate()
            .map(|(i, s)| (primal_key.key(s), i))
            .collect();
        let dual_lookup = dual_digits
            .iter()
            .enumerate()
            .map(|(i, s)| (dual_key.key(s), i))
            .collect();
        Ok(DilationContext {
            matrix,
            transpose,
            det,
            digits,
            dual_digits,
            r,
            inverse,
            primal_key,
            dual_key,
            primal_lookup,
            dual_lookup,
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// `M*`.
    pub fn transpose(&self) -> &IntMatrix {
        &self.transpose
    }

    pub fn det(&self) -> i64 {
        self.det
    }

    /// `m = |det M|`.
    pub fn m(&self) -> usize {
        self.det.unsigned_abs() as usize
    }

    pub fn digits(&self) -> &[IVec] {
        &self.digits
    }

    pub fn dual_digits(&self) -> &[IVec] {
        &self.dual_digits
    }

    /// `r_k = M^{-1} s_k`.
    pub fn r(&self) -> &[QVec] {
        &self.r
    }

    /// `M^{-1}` as rows.
    pub fn inverse(&self) -> &[QVec] {
        &self.inverse
    }

    /// `(M^{-1})_{jk}` (zero-based indices).
    pub fn inverse_entry(&self, j: usize, k: usize) -> &BigRational {
        &self.inverse[j][k]
    }

    /// `M^{-1} v` exactly.
    pub fn apply_inverse(&self, v: &[i64]) -> QVec {
        rat_mat_vec(&self.inverse, v)
    }

    /// `M*^{-1} v` exactly.
    pub fn apply_inverse_transpose(&self, v: &[i64]) -> QVec {
        let d = self.dim();
        (0..d)
            .map(|i| {
                (0..d).fold(BigRational::zero(), |s, j| {
                    s + &self.inverse[j][i] * BigInt::from(v[j])
                })
            })
            .collect()
    }

    /// `M^{-1} v` when it is an integer vector.
    pub fn solve_integral(&self, v: &[i64]) -> Option<IVec> {
        let adj_v = self.primal_key.adj.mul_vec(v);
        adj_v
            .iter()
            .map(|&x| {
                if x % self.det == 0 {
                    Some(x / self.det)
                } else {
                    None
                }
            })
            .collect()
    }

    /// Index `nu` of the digit with `n = s_nu (mod M)`, or `mod M*` when `dual`.
    pub fn coset_index(&self, n: &[i64], dual: bool) -> usize {
        if dual {
            self.dual_lookup[&self.dual_key.key(n)]
        } else {
            self.primal_lookup[&self.primal_key.key(n)]
        }
    }

    /// Unitarity of the character matrix `{e^{2 pi i (r_k, s*_l)}}_{k,l}`.
    ///
    /// Returns the matrix `E` and whether `E E^H = m I` holds exactly.
    pub fn character_matrix(&self) -> (Vec<Vec<Cyclotomic>>, bool) {
        let e: Vec<Vec<Cyclotomic>> = self
            .r
            .iter()
            .map(|rk| {
                self.dual_digits
                    .iter()
                    .map(|s| Cyclotomic::exp_2pi_i(&rat_dot_int(rk, s)))
                    .collect()
            })
            .collect();
        let m = self.m();
        let target = BigRational::from_integer(BigInt::from(m));
        let unitary = (0..m).all(|a| {
            (0..m).all(|b| {
                let s = (0..m).fold(Cyclotomic::zero(), |acc, l| {
                    &acc + &(&e[a][l] * &e[b][l].conj())
                });
                if a == b {
                    s == Cyclotomic::from_rational(target.clone())
                } else {
                    s.is_zero()
                }
            })
        });
        (e, unitary)
    }
}

pub(crate) fn rat_mat_vec(a: &[QVec], v: &[i64]) -> QVec {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(BigRational::zero(), |s, (x, &y)| s + x * BigInt::from(y))
        })
        .collect()
}

pub(crate) fn rat_dot_int(a: &[BigRational], b: &[i64]) -> BigRational {
    a.iter()
        .zip(b)
        .fold(BigRational::zero(), |s, (x, &y)| s + x * BigInt::from(y))
}
