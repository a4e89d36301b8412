//! JSON file formats for masks, lambda tables and decompositions.
//!
//! Rationals travel as `"p/q"` strings; cyclotomic values as
//! `{"order": n, "coords": ["p/q", ...]}` in the power basis of `zeta_n`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cyclotomic::{format_rational, parse_rational, Cyclotomic};
use crate::decompose::{verify_iterated, IteratedDecomposition, MaskDecomposition};
use crate::error::{Error, Result};
use crate::lattice::{DigitStrategy, DilationContext, IVec, IntMatrix};
use crate::trigpoly::{MultiIndex, TrigPoly};
use crate::zerocond::{zero_condition_order, LambdaTable};

/// An exact value: a rational string, a JSON integer, or a cyclotomic object.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValueJson {
    Integer(i64),
    Rational(String),
    Cyclotomic { order: u64, coords: Vec<String> },
}

impl ValueJson {
    pub fn parse(&self) -> Result<Cyclotomic> {
        match self {
            ValueJson::Integer(n) => Ok(Cyclotomic::from_int(*n)),
            ValueJson::Rational(s) => Ok(Cyclotomic::from_rational(parse_rational(s)?)),
            ValueJson::Cyclotomic { order, coords } => {
                if *order == 0 {
                    return Err(Error::Parse("cyclotomic order must be positive".into()));
                }
                let coords = coords
                    .iter()
                    .map(|c| parse_rational(c))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Cyclotomic::from_coords(*order, coords))
            }
        }
    }

    pub fn from_value(c: &Cyclotomic) -> Self {
        match c.as_rational() {
            Some(q) => ValueJson::Rational(format_rational(q)),
            None => ValueJson::Cyclotomic {
                order: c.order(),
                coords: c.coords().iter().map(format_rational).collect(),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub freq: IVec,
    pub value: ValueJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyphaseJson {
    pub digit: usize,
    pub coefficients: Vec<TermJson>,
}

/// A polynomial given either by its coefficients or by polyphase components.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaskObject {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<Vec<TermJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polyphase: Option<Vec<PolyphaseJson>>,
}

fn terms_to_poly(dim: usize, terms: &[TermJson]) -> Result<TrigPoly> {
    let mut parsed = Vec::with_capacity(terms.len());
    for term in terms {
        if term.freq.len() != dim {
            return Err(Error::Parse(format!(
                "frequency {:?} does not have {dim} components",
                term.freq
            )));
        }
        parsed.push((term.freq.clone(), term.value.parse()?));
    }
    Ok(TrigPoly::from_terms(dim, 1, parsed))
}

fn poly_to_terms(t: &TrigPoly) -> Vec<TermJson> {
    assert!(
        t.has_integer_frequencies(),
        "only integer-frequency polynomials are serialized"
    );
    t.terms()
        .map(|(f, c)| TermJson {
            freq: f.clone(),
            value: ValueJson::from_value(c),
        })
        .collect()
}

impl MaskObject {
    pub fn from_coefficients(t: &TrigPoly) -> Self {
        MaskObject {
            coefficients: Some(poly_to_terms(t)),
            polyphase: None,
        }
    }

    pub fn from_polyphase(t: &TrigPoly, ctx: &DilationContext) -> Result<Self> {
        let taus = t.polyphase_split(ctx)?;
        let polyphase = taus
            .iter()
            .enumerate()
            .map(|(digit, tau)| PolyphaseJson {
                digit,
                coefficients: poly_to_terms(tau),
            })
            .collect();
        Ok(MaskObject {
            coefficients: None,
            polyphase: Some(polyphase),
        })
    }

    /// Decodes the polynomial; `ctx` is needed for the polyphase form.
    pub fn to_poly(&self, dim: usize, ctx: Option<&DilationContext>) -> Result<TrigPoly> {
        match (&self.coefficients, &self.polyphase) {
            (Some(_), Some(_)) => Err(Error::Parse(
                "give either coefficients or polyphase, not both".into(),
            )),
            (None, None) => Err(Error::Parse(
                "mask has neither coefficients nor polyphase".into(),
            )),
            (Some(terms), None) => terms_to_poly(dim, terms),
            (None, Some(parts)) => {
                let ctx =
                    ctx.ok_or_else(|| Error::Parse("polyphase form requires digits".into()))?;
                let mut taus: Vec<Option<TrigPoly>> = vec![None; ctx.m()];
                for part in parts {
                    let slot = taus.get_mut(part.digit).ok_or_else(|| {
                        Error::Parse(format!("digit index {} out of range", part.digit))
                    })?;
                    if slot.is_some() {
                        return Err(Error::Parse(format!(
                            "digit index {} listed twice",
                            part.digit
                        )));
                    }
                    *slot = Some(terms_to_poly(dim, &part.coefficients)?);
                }
                let taus: Vec<TrigPoly> = taus
                    .into_iter()
                    .map(|t| t.unwrap_or_else(|| TrigPoly::zero(dim)))
                    .collect();
                TrigPoly::polyphase_assemble(&taus, ctx)
            }
        }
    }

    fn is_empty(&self) -> bool {
        let none = |terms: &Vec<TermJson>| terms.is_empty();
        match (&self.coefficients, &self.polyphase) {
            (Some(terms), None) => none(terms),
            (None, Some(parts)) => parts.iter().all(|p| none(&p.coefficients)),
            _ => false,
        }
    }
}

/// Replacement digit sets read from a separate file.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DigitsFile {
    #[serde(default)]
    pub digits: Option<Vec<IVec>>,
    #[serde(default)]
    pub dual_digits: Option<Vec<IVec>>,
}

impl DigitsFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// A mask together with its dilation and (optionally) digit sets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaskFile {
    pub dim: usize,
    pub dilation: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub digits: Option<Vec<IVec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual_digits: Option<Vec<IVec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<Vec<TermJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polyphase: Option<Vec<PolyphaseJson>>,
}

fn strategy(digits: &Option<Vec<IVec>>) -> DigitStrategy {
    match digits {
        Some(d) => DigitStrategy::UserSupplied(d.clone()),
        None => DigitStrategy::Canonical,
    }
}

impl MaskFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("mask file serializes")
    }

    /// Records `t` with explicit digit sets, in coefficient or polyphase form.
    pub fn from_mask(t: &TrigPoly, ctx: &DilationContext, polyphase: bool) -> Result<Self> {
        let mask = if polyphase {
            MaskObject::from_polyphase(t, ctx)?
        } else {
            MaskObject::from_coefficients(t)
        };
        Ok(MaskFile {
            dim: ctx.dim(),
            dilation: ctx.matrix().rows(),
            digits: Some(ctx.digits().to_vec()),
            dual_digits: Some(ctx.dual_digits().to_vec()),
            coefficients: mask.coefficients,
            polyphase: mask.polyphase,
        })
    }

    fn matrix(&self) -> Result<IntMatrix> {
        if self.dim == 0 {
            return Err(Error::Parse("dim must be positive".into()));
        }
        if self.dilation.len() != self.dim || self.dilation.iter().any(|r| r.len() != self.dim) {
            return Err(Error::Parse(format!(
                "dilation must be a {0}x{0} matrix",
                self.dim
            )));
        }
        IntMatrix::from_rows(&self.dilation)
    }

    fn context(
        &self,
        digits: &Option<Vec<IVec>>,
        dual: &Option<Vec<IVec>>,
    ) -> Result<DilationContext> {
        DilationContext::with_digits(self.matrix()?, strategy(digits), strategy(dual))
    }

    /// Dilation context and mask. Polyphase components refer to the file's own
    /// digits; `override_digits` then replaces the digit sets used afterwards.
    pub fn load(
        &self,
        override_digits: Option<&DigitsFile>,
    ) -> Result<(DilationContext, TrigPoly)> {
        let mask = MaskObject {
            coefficients: self.coefficients.clone(),
            polyphase: self.polyphase.clone(),
        };
        if mask.polyphase.is_some() && self.digits.is_none() {
            return Err(Error::Parse("polyphase form requires digits".into()));
        }
        let ctx = self.context(&self.digits, &self.dual_digits)?;
        if mask.is_empty() {
            return Err(Error::Parse("mask has no coefficients".into()));
        }
        let t = mask.to_poly(self.dim, Some(&ctx))?;
        let ctx = match override_digits {
            None => ctx,
            Some(o) => {
                let digits = o.digits.clone().or_else(|| self.digits.clone());
                let dual = o.dual_digits.clone().or_else(|| self.dual_digits.clone());
                self.context(&digits, &dual)?
            }
        };
        Ok((ctx, t))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LambdaEntryJson {
    pub beta: MultiIndex,
    pub value: ValueJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LambdaTableFile {
    pub order: u32,
    pub values: Vec<LambdaEntryJson>,
}

impl LambdaTableFile {
    pub fn from_table(table: &LambdaTable) -> Self {
        let values = table
            .values
            .iter()
            .map(|(beta, v)| LambdaEntryJson {
                beta: beta.clone(),
                value: ValueJson::from_value(v),
            })
            .collect();
        LambdaTableFile {
            order: table.order,
            values,
        }
    }

    pub fn to_table(&self, dim: usize) -> Result<LambdaTable> {
        let mut values = BTreeMap::new();
        for entry in &self.values {
            if values
                .insert(entry.beta.clone(), entry.value.parse()?)
                .is_some()
            {
                return Err(Error::Parse(format!("beta {:?} listed twice", entry.beta)));
            }
        }
        let table = LambdaTable {
            order: self.order,
            values,
        };
        table.validate(dim)?;
        Ok(table)
    }
}

/// One entry `t_{jk}` with one-based axis tuples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryJson {
    pub j: Vec<usize>,
    pub k: Vec<usize>,
    pub mask: MaskObject,
}

/// A decomposition with the source mask, so that it can be re-verified alone.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionFile {
    pub order: u32,
    pub depth: u32,
    pub achieved_class: i64,
    pub source: MaskFile,
    pub entries: Vec<EntryJson>,
}

fn tuples(dim: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|p| (0..dim).map(move |a| [p.clone(), vec![a]].concat()))
            .collect();
    }
    out
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|a| a + 1).collect()
}

impl DecompositionFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("decomposition serializes")
    }

    pub fn from_decomposition(dec: &MaskDecomposition, order: u32) -> Result<Self> {
        let d = dec.dim();
        let mut entries = Vec::with_capacity(d * d);
        for j in 0..d {
            for k in 0..d {
                let mask = MaskObject::from_polyphase(&dec.entries[j][k], &dec.ctx)?;
                entries.push(EntryJson {
                    j: vec![j + 1],
                    k: vec![k + 1],
                    mask,
                });
            }
        }
        Ok(DecompositionFile {
            order,
            depth: 1,
            achieved_class: dec.achieved_class,
            source: MaskFile::from_mask(&dec.source, &dec.ctx, false)?,
            entries,
        })
    }

    pub fn from_iterated(
        t: &TrigPoly,
        ctx: &DilationContext,
        it: &IteratedDecomposition,
        order: u32,
    ) -> Result<Self> {
        let d = ctx.dim();
        let idx = tuples(d, it.order as usize);
        let mut entries = Vec::with_capacity(idx.len() * idx.len());
        for j in &idx {
            for k in &idx {
                let mask = MaskObject::from_polyphase(it.entry(j, k, d), ctx)?;
                entries.push(EntryJson {
                    j: one_based(j),
                    k: one_based(k),
                    mask,
                });
            }
        }
        Ok(DecompositionFile {
            order,
            depth: it.order,
            achieved_class: it.class_guarantee,
            source: MaskFile::from_mask(t, ctx, false)?,
            entries,
        })
    }

    /// Rebuilds every entry and re-checks the factorization, the values at the
    /// origin and the recorded class of each entry.
    pub fn verify(&self) -> Result<()> {
        let (ctx, t) = self.source.load(None)?;
        let d = ctx.dim();
        if self.depth == 0 {
            return Err(Error::Parse("depth must be positive".into()));
        }
        let idx = tuples(d, self.depth as usize);
        let size = idx.len();
        let mut slots: Vec<Vec<Option<TrigPoly>>> = vec![vec![None; size]; size];
        for e in &self.entries {
            let to_flat = |v: &[usize]| -> Result<usize> {
                if v.len() != self.depth as usize || v.iter().any(|&a| a == 0 || a > d) {
                    return Err(Error::Parse(format!("bad entry index {v:?}")));
                }
                Ok(v.iter().fold(0, |acc, &a| acc * d + a - 1))
            };
            let (j, k) = (to_flat(&e.j)?, to_flat(&e.k)?);
            if slots[j][k].is_some() {
                return Err(Error::Parse(format!(
                    "entry ({:?}, {:?}) listed twice",
                    e.j, e.k
                )));
            }
            slots[j][k] = Some(e.mask.to_poly(d, Some(&ctx))?);
        }
        let mut entries = Vec::with_capacity(size);
        for row in slots {
            let row: Option<Vec<TrigPoly>> = row.into_iter().collect();
            entries
                .push(row.ok_or_else(|| Error::Parse("decomposition is missing entries".into()))?);
        }
        for e in entries.iter().flatten() {
            if self.achieved_class >= 0 {
                let found = zero_condition_order(e, &ctx, self.achieved_class as u32)?;
                if found < self.achieved_class {
                    return Err(Error::NotInClass {
                        required: self.achieved_class,
                        found,
                    });
                }
            }
        }
        if self.depth == 1 {
            let dec = MaskDecomposition {
                source: t,
                ctx,
                entries,
                achieved_class: self.achieved_class,
            };
            dec.verify()
        } else {
            let matrix = (0..size)
                .map(|k| (0..size).map(|j| entries[j][k].clone()).collect())
                .collect();
            let it = IteratedDecomposition {
                order: self.depth,
                class_guarantee: self.achieved_class,
                matrix,
            };
            verify_iterated(&t, &ctx, &it)
        }
    }
}
