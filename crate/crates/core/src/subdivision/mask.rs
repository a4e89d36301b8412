use std::collections::BTreeMap;

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::lattice::{IVec, IntMatrix};
use crate::trigpoly::TrigPoly;

/// Matrix of integer-frequency trigonometric polynomials, `T(x) = sum_alpha A_alpha e^{2 pi i (alpha, x)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixMask {
    dim: usize,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<TrigPoly>>,
}

/// Coefficient matrices `A_alpha`, row-major.
pub type CoefficientMap = BTreeMap<IVec, Vec<Vec<Cyclotomic>>>;

impl MatrixMask {
    pub fn new(entries: Vec<Vec<TrigPoly>>) -> Result<Self> {
        let rows = entries.len();
        let cols = entries.first().map_or(0, |r| r.len());
        if rows == 0 || cols == 0 {
            return Err(Error::ShapeMismatch(
                "matrix mask must have at least one entry".into(),
            ));
        }
        if entries.iter().any(|r| r.len() != cols) {
            return Err(Error::ShapeMismatch("ragged matrix mask".into()));
        }
        let dim = entries[0][0].dim();
        for e in entries.iter().flatten() {
            if e.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: e.dim(),
                });
            }
            if !e.has_integer_frequencies() {
                return Err(Error::NonIntegerFrequencies(e.denom()));
            }
        }
        Ok(MatrixMask {
            dim,
            rows,
            cols,
            entries,
        })
    }

    pub fn scalar(t: TrigPoly) -> Result<Self> {
        Self::new(vec![vec![t]])
    }

    pub fn identity(dim: usize, size: usize) -> Self {
        let entries = (0..size)
            .map(|i| {
                (0..size)
                    .map(|j| {
                        if i == j {
                            TrigPoly::one(dim)
                        } else {
                            TrigPoly::zero(dim)
                        }
                    })
                    .collect()
            })
            .collect();
        MatrixMask {
            dim,
            rows: size,
            cols: size,
            entries,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entry(&self, i: usize, j: usize) -> &TrigPoly {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<TrigPoly>] {
        &self.entries
    }

    pub fn is_rational(&self) -> bool {
        self.entries
            .iter()
            .flatten()
            .all(|e| e.has_rational_coefficients())
    }

    pub fn coefficients(&self) -> CoefficientMap {
        let mut out: CoefficientMap = BTreeMap::new();
        for (i, row) in self.entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                for (f, c) in e.terms() {
                    out.entry(f.clone())
                        .or_insert_with(|| vec![vec![Cyclotomic::zero(); self.cols]; self.rows])
                        [i][j] = c.clone();
                }
            }
        }
        out
    }

    pub fn from_coefficients(
        dim: usize,
        rows: usize,
        cols: usize,
        coeffs: &CoefficientMap,
    ) -> Result<Self> {
        let mut entries = vec![vec![Vec::new(); cols]; rows];
        for (f, a) in coeffs {
            if f.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: f.len(),
                });
            }
            if a.len() != rows || a.iter().any(|r| r.len() != cols) {
                return Err(Error::ShapeMismatch(format!(
                    "coefficient at {f:?} is not {rows}x{cols}"
                )));
            }
            for (i, row) in a.iter().enumerate() {
                for (j, c) in row.iter().enumerate() {
                    entries[i][j].push((f.clone(), c.clone()));
                }
            }
        }
        let entries = entries
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|terms| TrigPoly::from_terms(dim, 1, terms))
                    .collect()
            })
            .collect();
        Self::new(entries)
    }

    pub fn mul(&self, other: &MatrixMask) -> Result<MatrixMask> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let entries = (0..self.rows)
            .map(|i| {
                (0..other.cols)
                    .map(|j| {
                        (0..self.cols).fold(TrigPoly::zero(self.dim), |acc, l| {
                            &acc + &(&self.entries[i][l] * &other.entries[l][j])
                        })
                    })
                    .collect()
            })
            .collect();
        Ok(MatrixMask {
            dim: self.dim,
            rows: self.rows,
            cols: other.cols,
            entries,
        })
    }

    /// `T(M* x)` entrywise.
    pub fn compose_dilate(&self, m: &IntMatrix) -> MatrixMask {
        let entries = self
            .entries
            .iter()
            .map(|r| r.iter().map(|e| e.compose_dilate(m)).collect())
            .collect();
        MatrixMask {
            dim: self.dim,
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }
}
