use std::fmt;

use num_rational::BigRational;
use num_traits::One;

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::lattice::{
    is_isotropic, power_inf_norm, rat_mat_vec, DilationContext, Isotropy, IsotropyReport, QVec,
};
use crate::trigpoly::TrigPoly;
use crate::zerocond::zero_condition_order;

use super::difference::{difference_symbol, matrix_difference_symbol};
use super::mask::MatrixMask;
use super::norm::{norm_trajectory, DEFAULT_TERM_BUDGET};
use super::sequence::{apply, Sequence};

/// Depth of the `||M^k|| ||M^-k||` probe reported alongside the isotropy verdict.
const ISOTROPY_PROBE_DEPTH: u32 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Convergent,
    C1,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Convergent => "convergent",
            Verdict::C1 => "C1",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug)]
pub struct ConvergenceReport {
    pub mask_at_zero: Cyclotomic,
    /// `t(0) = m`.
    pub normalized: bool,
    pub in_z0: bool,
    pub difference_symbol: Option<MatrixMask>,
    /// `||S_T^L||` for `L = 1, 2, ...`; stops at the first certificate.
    pub norms: Vec<Interval>,
    /// The power symbols outgrew the term budget before `L_max`.
    pub truncated: bool,
    pub certificate: Option<u32>,
    pub verdict: Verdict,
    pub reasons: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct SmoothnessReport {
    pub isotropy: IsotropyReport,
    pub in_z1: bool,
    pub convergence: ConvergenceReport,
    pub second_difference_symbol: Option<MatrixMask>,
    /// `||S_Q^L||` for `L = 1, 2, ...`.
    pub norms: Vec<Interval>,
    /// `||M*^L||_inf ||S_Q^L||` alongside `norms`.
    pub scaled_norms: Vec<Interval>,
    pub truncated: bool,
    pub certificate: Option<u32>,
    pub verdict: Verdict,
    pub reasons: Vec<String>,
}

fn below_one(iv: &Interval) -> bool {
    iv.certainly_below(&BigRational::one())
}

/// Sufficient test for uniform convergence: `t(0) = m`, `t` in `Z^0`, and some `||S_T^L|| < 1`.
pub fn check_convergence(
    t: &TrigPoly,
    ctx: &DilationContext,
    max_level: u32,
    precision_bits: u32,
) -> Result<ConvergenceReport> {
    let mask_at_zero = t.value_at_zero();
    let normalized = mask_at_zero == Cyclotomic::from_int(ctx.m() as i64);
    let in_z0 = zero_condition_order(t, ctx, 0)? >= 0;
    let mut reasons = Vec::new();
    if !normalized {
        reasons.push(format!(
            "normalization failed: t(0) = {mask_at_zero}, m = {}",
            ctx.m()
        ));
    }
    let mut report = ConvergenceReport {
        mask_at_zero,
        normalized,
        in_z0,
        difference_symbol: None,
        norms: Vec::new(),
        truncated: false,
        certificate: None,
        verdict: Verdict::Inconclusive,
        reasons: Vec::new(),
    };
    if !in_z0 {
        reasons.push("mask is not in Z^0".into());
        report.reasons = reasons;
        return Ok(report);
    }
    let (_, symbol) = difference_symbol(t, ctx)?;
    let (norms, truncated) = norm_trajectory(
        &symbol,
        ctx.matrix(),
        max_level,
        precision_bits,
        DEFAULT_TERM_BUDGET,
        |_, n| below_one(n),
    );
    report.certificate = norms.iter().position(below_one).map(|i| i as u32 + 1);
    if report.certificate.is_none() {
        if truncated {
            reasons.push(format!(
                "power symbol exceeded the term budget at L = {}",
                norms.len() + 1
            ));
        } else {
            reasons.push(format!("no L <= {max_level} with ||S_T^L|| < 1"));
        }
    }
    if normalized && report.certificate.is_some() {
        report.verdict = Verdict::Convergent;
    }
    report.difference_symbol = Some(symbol);
    report.norms = norms;
    report.truncated = truncated;
    report.reasons = reasons;
    Ok(report)
}

/// Sufficient test for `C^1` limits: isotropic `M`, `t` in `Z^1`, convergence, and
/// some `||M*^L||_inf ||S_Q^L|| < 1`.
pub fn check_c1(
    t: &TrigPoly,
    ctx: &DilationContext,
    max_level: u32,
    precision_bits: u32,
) -> Result<SmoothnessReport> {
    let isotropy = is_isotropic(ctx.matrix(), ISOTROPY_PROBE_DEPTH);
    let in_z1 = zero_condition_order(t, ctx, 1)? >= 1;
    let convergence = check_convergence(t, ctx, max_level, precision_bits)?;
    let mut reasons = Vec::new();
    if isotropy.verdict != Isotropy::Yes {
        reasons.push(format!(
            "M not isotropic (isotropy test: {})",
            isotropy.verdict
        ));
    }
    if !in_z1 {
        reasons.push("mask is not in Z^1".into());
    }
    if convergence.verdict != Verdict::Convergent {
        reasons.push("convergence not certified".into());
    }
    let mut report = SmoothnessReport {
        isotropy,
        in_z1,
        convergence,
        second_difference_symbol: None,
        norms: Vec::new(),
        scaled_norms: Vec::new(),
        truncated: false,
        certificate: None,
        verdict: Verdict::Inconclusive,
        reasons: Vec::new(),
    };
    if in_z1 {
        let symbol = report
            .convergence
            .difference_symbol
            .as_ref()
            .expect("Z^1 implies Z^0");
        let q = matrix_difference_symbol(symbol, ctx)?;
        let transpose = ctx.transpose().clone();
        let mut scaled = Vec::new();
        let (norms, truncated) = norm_trajectory(
            &q,
            ctx.matrix(),
            max_level,
            precision_bits,
            DEFAULT_TERM_BUDGET,
            |level, n| {
                let factor = BigRational::from_integer(power_inf_norm(&transpose, level));
                let s = n.scale(&factor);
                let done = below_one(&s);
                scaled.push(s);
                done
            },
        );
        report.certificate = scaled.iter().position(below_one).map(|i| i as u32 + 1);
        if report.certificate.is_none() {
            if truncated {
                reasons.push(format!(
                    "power symbol exceeded the term budget at L = {}",
                    norms.len() + 1
                ));
            } else {
                reasons.push(format!("no L <= {max_level} with ||M*^L|| ||S_Q^L|| < 1"));
            }
        }
        report.second_difference_symbol = Some(q);
        report.norms = norms;
        report.scaled_norms = scaled;
        report.truncated = truncated;
    }
    if reasons.is_empty() && report.certificate.is_some() {
        report.verdict = Verdict::C1;
    }
    report.reasons = reasons;
    Ok(report)
}

/// `S_t^rounds f`, with the value at `alpha` attached to the grid point `M^{-rounds} alpha`.
#[derive(Clone, Debug)]
pub struct Refinement {
    pub rounds: u32,
    pub sequence: Sequence,
    pub grid: Vec<(QVec, Vec<BigRational>)>,
}

pub fn refine(
    t: &TrigPoly,
    ctx: &DilationContext,
    f: &Sequence,
    rounds: u32,
) -> Result<Refinement> {
    if !t.has_rational_coefficients() || !f.is_rational() {
        return Err(Error::NotRational);
    }
    let mask = MatrixMask::scalar(t.clone())?;
    let mut current = f.clone();
    for _ in 0..rounds {
        current = apply(&mask, ctx.matrix(), &current)?;
    }
    let inverse = ctx.matrix().pow(rounds).inverse()?;
    let grid = current
        .iter()
        .map(|(alpha, v)| {
            let point = rat_mat_vec(&inverse, alpha);
            let values = v
                .iter()
                .map(|c| c.as_rational().cloned().expect("rational by construction"))
                .collect();
            (point, values)
        })
        .collect();
    Ok(Refinement {
        rounds,
        sequence: current,
        grid,
    })
}
