//! Sparse exponential sums `t(x) = sum_n c_n e^{2 pi i (n/q, x)}`.
//!
//! Frequencies are integer vectors `n` over a common denominator `q`; `q = 1`
//! is the ordinary trigonometric (Laurent) polynomial in `z_k = e^{2 pi i x_k}`.
//! Rational frequencies make `t(M*^{-1} x)` a first-class value.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cyclotomic::{format_rational, Cyclotomic};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::lattice::{DilationContext, IVec, IntMatrix};

/// Multi-index for derivatives.
pub type MultiIndex = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrigPoly {
    dim: usize,
    denom: u64,
    terms: BTreeMap<IVec, Cyclotomic>,
}

impl TrigPoly {
    pub fn zero(dim: usize) -> Self {
        TrigPoly {
            dim,
            denom: 1,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Cyclotomic) -> Self {
        Self::monomial(vec![0; dim], c)
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Cyclotomic::one())
    }

    pub fn monomial(freq: IVec, c: Cyclotomic) -> Self {
        let dim = freq.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(freq, c);
        }
        TrigPoly {
            dim,
            denom: 1,
            terms,
        }
    }

    /// `z_j = e^{2 pi i x_j}` (zero-based axis).
    pub fn z(dim: usize, axis: usize) -> Self {
        let mut f = vec![0; dim];
        f[axis] = 1;
        Self::monomial(f, Cyclotomic::one())
    }

    /// `1 - z_j`.
    pub fn one_minus_z(dim: usize, axis: usize) -> Self {
        &Self::one(dim) - &Self::z(dim, axis)
    }

    /// Builds a polynomial from `(numerator, coefficient)` pairs over denominator `denom`.
    pub fn from_terms<I>(dim: usize, denom: u64, terms: I) -> Self
    where
        I: IntoIterator<Item = (IVec, Cyclotomic)>,
    {
        assert!(denom >= 1);
        let mut map: BTreeMap<IVec, Cyclotomic> = BTreeMap::new();
        for (f, c) in terms {
            assert_eq!(f.len(), dim, "frequency dimension mismatch");
            accumulate(&mut map, f, &c);
        }
        let mut t = TrigPoly {
            dim,
            denom,
            terms: map,
        };
        t.normalize();
        t
    }

    /// Integer-frequency polynomial with rational coefficients.
    pub fn from_rational_terms<I>(dim: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (IVec, BigRational)>,
    {
        Self::from_terms(
            dim,
            1,
            terms
                .into_iter()
                .map(|(f, c)| (f, Cyclotomic::from_rational(c))),
        )
    }

    fn normalize(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
        if self.denom == 1 {
            return;
        }
        let mut g = self.denom as i64;
        for f in self.terms.keys() {
            for &x in f {
                g = g.gcd(&x);
            }
            if g == 1 {
                return;
            }
        }
        if self.terms.is_empty() {
            self.denom = 1;
            return;
        }
        if g > 1 {
            let terms = std::mem::take(&mut self.terms);
            self.terms = terms
                .into_iter()
                .map(|(f, c)| (f.into_iter().map(|x| x / g).collect(), c))
                .collect();
            self.denom /= g as u64;
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Common frequency denominator `q`.
    pub fn denom(&self) -> u64 {
        self.denom
    }

    pub fn terms(&self) -> impl Iterator<Item = (&IVec, &Cyclotomic)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the frequency `freq / denom`.
    pub fn coeff(&self, freq: &[i64]) -> Option<&Cyclotomic> {
        self.terms.get(freq)
    }

    pub fn has_integer_frequencies(&self) -> bool {
        self.denom == 1
    }

    pub fn has_rational_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.as_rational().is_some())
    }

    fn require_integer(&self) -> Result<()> {
        if self.denom == 1 {
            Ok(())
        } else {
            Err(Error::NonIntegerFrequencies(self.denom))
        }
    }

    fn rescaled_terms(&self, denom: u64) -> impl Iterator<Item = (IVec, &Cyclotomic)> + '_ {
        let k = (denom / self.denom) as i64;
        self.terms
            .iter()
            .map(move |(f, c)| (f.iter().map(|x| x * k).collect(), c))
    }

    pub fn checked_add(&self, other: &TrigPoly) -> Result<TrigPoly> {
        self.check_dim(other)?;
        let denom = self.denom.lcm(&other.denom);
        let mut terms: BTreeMap<IVec, Cyclotomic> = self
            .rescaled_terms(denom)
            .map(|(f, c)| (f, c.clone()))
            .collect();
        for (f, c) in other.rescaled_terms(denom) {
            accumulate(&mut terms, f, c);
        }
        let mut t = TrigPoly {
            dim: self.dim,
            denom,
            terms,
        };
        t.normalize();
        Ok(t)
    }

    pub fn checked_mul(&self, other: &TrigPoly) -> Result<TrigPoly> {
        self.check_dim(other)?;
        let denom = self.denom.lcm(&other.denom);
        let a: Vec<(IVec, &Cyclotomic)> = self.rescaled_terms(denom).collect();
        let b: Vec<(IVec, &Cyclotomic)> = other.rescaled_terms(denom).collect();
        let mut terms = BTreeMap::new();
        for (fa, ca) in &a {
            for (fb, cb) in &b {
                let f: IVec = fa.iter().zip(fb).map(|(x, y)| x + y).collect();
                accumulate(&mut terms, f, &(*ca * *cb));
            }
        }
        let mut t = TrigPoly {
            dim: self.dim,
            denom,
            terms,
        };
        t.normalize();
        Ok(t)
    }

    fn check_dim(&self, other: &TrigPoly) -> Result<()> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            })
        }
    }

    pub fn scale(&self, c: &Cyclotomic) -> TrigPoly {
        if c.is_zero() {
            return TrigPoly::zero(self.dim);
        }
        let terms = self.terms.iter().map(|(f, x)| (f.clone(), x * c)).collect();
        let mut t = TrigPoly {
            dim: self.dim,
            denom: self.denom,
            terms,
        };
        t.normalize();
        t
    }

    pub fn scale_rational(&self, q: &BigRational) -> TrigPoly {
        self.scale(&Cyclotomic::from_rational(q.clone()))
    }

    /// Multiplies by `e^{2 pi i (r, x)}` for an integer vector `r`.
    pub fn shift(&self, r: &[i64]) -> TrigPoly {
        let k = self.denom as i64;
        let terms = self
            .terms
            .iter()
            .map(|(f, c)| (f.iter().zip(r).map(|(x, y)| x + y * k).collect(), c.clone()))
            .collect();
        TrigPoly {
            dim: self.dim,
            denom: self.denom,
            terms,
        }
    }

    /// `t(M* x)`: frequency `n` becomes `M n`.
    pub fn compose_dilate(&self, m: &IntMatrix) -> TrigPoly {
        let terms = self.terms.iter().map(|(f, c)| (m.mul_vec(f), c.clone()));
        TrigPoly::from_terms(self.dim, self.denom, terms)
    }

    /// `t(M*^{-1} x)`: frequency `n` becomes `M^{-1} n`.
    pub fn compose_inverse_dilate(&self, m: &IntMatrix) -> TrigPoly {
        let det = m.determinant();
        assert!(det != 0, "singular matrix");
        let adj = m.adjugate();
        let sign = det.signum();
        let terms = self.terms.iter().map(|(f, c)| {
            (
                adj.mul_vec(f).into_iter().map(|x| x * sign).collect(),
                c.clone(),
            )
        });
        TrigPoly::from_terms(self.dim, self.denom * det.unsigned_abs(), terms)
    }

    /// Polyphase components `tau_nu(x) = sum_n t^(M n + s_nu) e^{2 pi i (n, x)}`.
    pub fn polyphase_split(&self, ctx: &DilationContext) -> Result<Vec<TrigPoly>> {
        self.require_integer()?;
        if ctx.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: ctx.dim(),
                found: self.dim,
            });
        }
        let mut parts: Vec<BTreeMap<IVec, Cyclotomic>> = vec![BTreeMap::new(); ctx.m()];
        for (f, c) in &self.terms {
            let nu = ctx.coset_index(f, false);
            let diff: IVec = f
                .iter()
                .zip(&ctx.digits()[nu])
                .map(|(a, b)| a - b)
                .collect();
            let l = ctx
                .solve_integral(&diff)
                .expect("coset representative differs by a lattice vector");
            parts[nu].insert(l, c.clone());
        }
        Ok(parts
            .into_iter()
            .map(|terms| TrigPoly {
                dim: self.dim,
                denom: 1,
                terms,
            })
            .collect())
    }

    /// `t(x) = sum_nu e^{2 pi i (s_nu, x)} tau_nu(M* x)`.
    pub fn polyphase_assemble(taus: &[TrigPoly], ctx: &DilationContext) -> Result<TrigPoly> {
        if taus.len() != ctx.m() {
            return Err(Error::WrongCount {
                expected: ctx.m(),
                found: taus.len(),
            });
        }
        let mut terms = BTreeMap::new();
        for (tau, s) in taus.iter().zip(ctx.digits()) {
            tau.require_integer()?;
            if tau.dim != ctx.dim() {
                return Err(Error::DimensionMismatch {
                    expected: ctx.dim(),
                    found: tau.dim,
                });
            }
            for (l, c) in &tau.terms {
                let f: IVec = ctx
                    .matrix()
                    .mul_vec(l)
                    .iter()
                    .zip(s)
                    .map(|(a, b)| a + b)
                    .collect();
                accumulate(&mut terms, f, c);
            }
        }
        Ok(TrigPoly {
            dim: ctx.dim(),
            denom: 1,
            terms,
        })
    }

    /// Value at the origin (sum of coefficients).
    pub fn value_at_zero(&self) -> Cyclotomic {
        self.terms
            .values()
            .fold(Cyclotomic::zero(), |acc, c| &acc + c)
    }

    /// Exact value at a rational point.
    pub fn eval_at_rational(&self, p: &[BigRational]) -> Cyclotomic {
        self.normalized_derivative(&vec![0; self.dim], p)
    }

    /// `D^alpha t(p) / (2 pi i)^{|alpha|}` exactly:
    /// `sum_n c_n (n/q)^alpha e^{2 pi i (n/q, p)}`.
    pub fn normalized_derivative(&self, alpha: &[u32], p: &[BigRational]) -> Cyclotomic {
        assert_eq!(alpha.len(), self.dim);
        assert_eq!(p.len(), self.dim);
        let q = BigInt::from(self.denom);
        let q_pow = num_traits::pow(q.clone(), alpha.iter().sum::<u32>() as usize);
        // group contributions by phase, then multiply each group by its root of unity once
        let mut by_phase: BTreeMap<(BigInt, BigInt), Cyclotomic> = BTreeMap::new();
        for (f, c) in &self.terms {
            let weight: BigInt = f
                .iter()
                .zip(alpha)
                .map(|(&x, &a)| num_traits::pow(BigInt::from(x), a as usize))
                .product();
            if weight.is_zero() {
                continue;
            }
            let phase = f
                .iter()
                .zip(p)
                .fold(BigRational::zero(), |s, (&x, y)| s + y * BigInt::from(x))
                / &q;
            let frac = &phase - phase.floor();
            let key = (frac.numer().clone(), frac.denom().clone());
            let contrib = c.scale(&BigRational::new(weight, q_pow.clone()));
            by_phase
                .entry(key)
                .and_modify(|acc| *acc += &contrib)
                .or_insert(contrib);
        }
        by_phase
            .into_iter()
            .fold(Cyclotomic::zero(), |acc, ((num, den), c)| {
                &acc + &(&c * &Cyclotomic::exp_2pi_i(&BigRational::new(num, den)))
            })
    }

    /// Sets `z_j := 1` (zero-based axis).
    pub fn substitute_one(&self, axis: usize) -> Result<TrigPoly> {
        self.require_integer()?;
        let mut terms = BTreeMap::new();
        for (f, c) in &self.terms {
            let mut g = f.clone();
            g[axis] = 0;
            accumulate(&mut terms, g, c);
        }
        Ok(TrigPoly {
            dim: self.dim,
            denom: 1,
            terms,
        })
    }

    /// Exact quotient `u` with `u (1 - z_j) = t`.
    pub fn divide_one_minus_z(&self, axis: usize) -> Result<TrigPoly> {
        self.require_integer()?;
        // fibres along the axis: other components -> exponent -> coefficient
        let mut fibres: BTreeMap<IVec, BTreeMap<i64, &Cyclotomic>> = BTreeMap::new();
        for (f, c) in &self.terms {
            let mut key = f.clone();
            key[axis] = 0;
            fibres.entry(key).or_default().insert(f[axis], c);
        }
        let mut terms = BTreeMap::new();
        for (key, fibre) in fibres {
            let lo = *fibre.keys().next().unwrap();
            let hi = *fibre.keys().next_back().unwrap();
            let mut running = Cyclotomic::zero();
            for e in lo..=hi {
                if let Some(c) = fibre.get(&e) {
                    running += c;
                }
                if e < hi && !running.is_zero() {
                    let mut f = key.clone();
                    f[axis] = e;
                    terms.insert(f, running.clone());
                }
            }
            if !running.is_zero() {
                return Err(Error::NotDivisible { axis: axis + 1 });
            }
        }
        Ok(TrigPoly {
            dim: self.dim,
            denom: 1,
            terms,
        })
    }

    /// Certified enclosure of `sum |c_n|`; exact when all coefficients are rational.
    pub fn l1_norm(&self, precision_bits: u32) -> Interval {
        self.terms.values().fold(Interval::zero(), |acc, c| {
            acc.add(&c.magnitude_interval(precision_bits))
        })
    }

    /// Largest absolute frequency component (support radius, in units of `1/q`).
    pub fn support_radius(&self) -> i64 {
        self.terms
            .keys()
            .flat_map(|f| f.iter().map(|x| x.abs()))
            .max()
            .unwrap_or(0)
    }
}

pub(crate) fn accumulate(map: &mut BTreeMap<IVec, Cyclotomic>, f: IVec, c: &Cyclotomic) {
    if c.is_zero() {
        return;
    }
    match map.entry(f) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c.clone());
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

impl<'a> Add<&'a TrigPoly> for &'a TrigPoly {
    type Output = TrigPoly;
    fn add(self, rhs: &TrigPoly) -> TrigPoly {
        self.checked_add(rhs)
            .expect("dimension mismatch in TrigPoly addition")
    }
}

impl<'a> Sub<&'a TrigPoly> for &'a TrigPoly {
    type Output = TrigPoly;
    fn sub(self, rhs: &TrigPoly) -> TrigPoly {
        self.checked_add(&-rhs)
            .expect("dimension mismatch in TrigPoly subtraction")
    }
}

impl Neg for &TrigPoly {
    type Output = TrigPoly;
    fn neg(self) -> TrigPoly {
        TrigPoly {
            dim: self.dim,
            denom: self.denom,
            terms: self.terms.iter().map(|(f, c)| (f.clone(), -c)).collect(),
        }
    }
}

impl<'a> Mul<&'a TrigPoly> for &'a TrigPoly {
    type Output = TrigPoly;
    fn mul(self, rhs: &TrigPoly) -> TrigPoly {
        self.checked_mul(rhs)
            .expect("dimension mismatch in TrigPoly multiplication")
    }
}

impl fmt::Display for TrigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(freq, c)| {
                let exps: Vec<String> = freq
                    .iter()
                    .map(|&x| {
                        if self.denom == 1 {
                            x.to_string()
                        } else {
                            format_rational(&BigRational::new(x.into(), self.denom.into()))
                        }
                    })
                    .collect();
                format!("({c})*z^({})", exps.join(","))
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// All multi-indices in `Z_+^dim` with total order exactly `order`, lexicographic.
pub fn multi_indices_of_order(dim: usize, order: u32) -> Vec<MultiIndex> {
    if dim == 0 {
        return if order == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=order).rev() {
        for mut rest in multi_indices_of_order(dim - 1, order - first) {
            let mut v = vec![first];
            v.append(&mut rest);
            out.push(v);
        }
    }
    out
}

/// All multi-indices with total order `<= max_order`, by increasing order.
pub fn multi_indices_up_to(dim: usize, max_order: u32) -> Vec<MultiIndex> {
    (0..=max_order)
        .flat_map(|n| multi_indices_of_order(dim, n))
        .collect()
}

/// Exact binomial coefficient `C(n, k)` as a rational.
pub(crate) fn binomial(n: u32, k: u32) -> BigRational {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    BigRational::from_integer(acc)
}
