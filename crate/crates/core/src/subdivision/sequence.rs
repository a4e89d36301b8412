use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::lattice::{IVec, IntMatrix};

use super::mask::MatrixMask;

/// Finitely supported sequence `Z^d -> C^width`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sequence {
    dim: usize,
    width: usize,
    values: BTreeMap<IVec, Vec<Cyclotomic>>,
}

impl Sequence {
    pub fn zero(dim: usize, width: usize) -> Self {
        Sequence {
            dim,
            width,
            values: BTreeMap::new(),
        }
    }

    /// Unit vector `e_component` placed at `at`.
    pub fn delta(dim: usize, width: usize, component: usize, at: IVec) -> Self {
        let mut s = Self::zero(dim, width);
        let mut v = vec![Cyclotomic::zero(); width];
        v[component] = Cyclotomic::one();
        s.insert(at, v);
        s
    }

    pub fn from_values<I>(dim: usize, width: usize, values: I) -> Result<Self>
    where
        I: IntoIterator<Item = (IVec, Vec<Cyclotomic>)>,
    {
        let mut s = Self::zero(dim, width);
        for (at, v) in values {
            if at.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: at.len(),
                });
            }
            if v.len() != width {
                return Err(Error::ShapeMismatch(format!(
                    "value at {at:?} has {} components, expected {width}",
                    v.len()
                )));
            }
            s.accumulate(at, &v);
        }
        Ok(s)
    }

    pub fn from_rational_values<I>(dim: usize, width: usize, values: I) -> Result<Self>
    where
        I: IntoIterator<Item = (IVec, Vec<BigRational>)>,
    {
        Self::from_values(
            dim,
            width,
            values
                .into_iter()
                .map(|(a, v)| (a, v.into_iter().map(Cyclotomic::from).collect())),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, at: &[i64]) -> Option<&[Cyclotomic]> {
        self.values.get(at).map(|v| v.as_slice())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&IVec, &Vec<Cyclotomic>)> {
        self.values.iter()
    }

    /// Replaces the value at `at`; all-zero vectors are not stored.
    pub fn insert(&mut self, at: IVec, v: Vec<Cyclotomic>) {
        assert_eq!(v.len(), self.width);
        if v.iter().all(|c| c.is_zero()) {
            self.values.remove(&at);
        } else {
            self.values.insert(at, v);
        }
    }

    fn accumulate(&mut self, at: IVec, v: &[Cyclotomic]) {
        let slot = self
            .values
            .entry(at.clone())
            .or_insert_with(|| vec![Cyclotomic::zero(); v.len()]);
        for (s, x) in slot.iter_mut().zip(v) {
            *s += x;
        }
        if slot.iter().all(|c| c.is_zero()) {
            self.values.remove(&at);
        }
    }

    pub fn add(&self, other: &Sequence) -> Result<Sequence> {
        if self.dim != other.dim || self.width != other.width {
            return Err(Error::ShapeMismatch(
                "sequences differ in dimension or width".into(),
            ));
        }
        let mut out = self.clone();
        for (at, v) in &other.values {
            out.accumulate(at.clone(), v);
        }
        Ok(out)
    }

    pub fn is_rational(&self) -> bool {
        self.values
            .values()
            .flatten()
            .all(|c| c.as_rational().is_some())
    }

    /// `max_alpha max_i |f_alpha[i]|` for rational sequences.
    pub fn sup_norm(&self) -> Result<BigRational> {
        let mut best = BigRational::zero();
        for c in self.values.values().flatten() {
            let x = c.as_rational().ok_or(Error::NotRational)?.abs();
            if x > best {
                best = x;
            }
        }
        Ok(best)
    }
}

/// `(S_T f)_alpha = sum_beta A_{alpha - M beta} f_beta`.
pub fn apply(mask: &MatrixMask, m: &IntMatrix, f: &Sequence) -> Result<Sequence> {
    let (rows, cols) = mask.shape();
    if cols != f.width() {
        return Err(Error::ShapeMismatch(format!(
            "mask has {cols} columns but the sequence has width {}",
            f.width()
        )));
    }
    if mask.dim() != f.dim() || m.dim() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: mask.dim(),
            found: f.dim(),
        });
    }
    let coeffs = mask.coefficients();
    let mut out = Sequence::zero(f.dim(), rows);
    for (beta, fb) in f.iter() {
        let shift = m.mul_vec(beta);
        for (alpha, a) in &coeffs {
            let at: IVec = alpha.iter().zip(&shift).map(|(x, y)| x + y).collect();
            let v: Vec<Cyclotomic> = a
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(fb)
                        .fold(Cyclotomic::zero(), |acc, (x, y)| &acc + &(x * y))
                })
                .collect();
            out.accumulate(at, &v);
        }
    }
    Ok(out)
}

/// Backward differences stacked per component: `out[i d + k] = f_alpha[i] - f_{alpha - e_k}[i]`.
pub fn gradient(f: &Sequence) -> Sequence {
    let d = f.dim();
    let n = f.width();
    let mut out = Sequence::zero(d, n * d);
    for (alpha, v) in f.iter() {
        for k in 0..d {
            let mut fwd = alpha.clone();
            fwd[k] += 1;
            let mut here = vec![Cyclotomic::zero(); n * d];
            let mut next = vec![Cyclotomic::zero(); n * d];
            for i in 0..n {
                here[i * d + k] = v[i].clone();
                next[i * d + k] = -&v[i];
            }
            out.accumulate(alpha.clone(), &here);
            out.accumulate(fwd, &next);
        }
    }
    out
}
