//! Machine-readable report blocks and their human renderings.

use maskforge::cyclotomic::format_rational;
use maskforge::io::{LambdaTableFile, MaskFile, ValueJson};
use maskforge::lattice::IsotropyReport;
use maskforge::subdivision::{ConvergenceReport, SmoothnessReport};
use maskforge::{
    lambda_parameters, zero_condition_order, DilationContext, Interval, Result, TrigPoly,
};
use serde_json::{json, Value};

fn value(c: &maskforge::Cyclotomic) -> Value {
    serde_json::to_value(ValueJson::from_value(c)).unwrap()
}

pub fn interval(iv: &Interval) -> Value {
    json!({ "lo": format_rational(&iv.lo), "hi": format_rational(&iv.hi), "exact": iv.is_exact() })
}

fn interval_text(iv: &Interval) -> String {
    if iv.is_exact() {
        format!("= {}", format_rational(&iv.hi))
    } else {
        format!(
            "in [{}, {}] (~{:.6})",
            format_rational(&iv.lo),
            format_rational(&iv.hi),
            to_f64(&iv.hi)
        )
    }
}

fn to_f64(q: &num_rational::BigRational) -> f64 {
    num_traits::ToPrimitive::to_f64(q).unwrap_or(f64::NAN)
}

fn input(t: &TrigPoly, ctx: &DilationContext) -> Result<Value> {
    Ok(serde_json::to_value(MaskFile::from_mask(t, ctx, false)?).unwrap())
}

pub fn analyze(t: &TrigPoly, ctx: &DilationContext, cap: u32) -> Result<Value> {
    let order = zero_condition_order(t, ctx, cap)?;
    let taus = t.polyphase_split(ctx)?;
    let t0 = t.value_at_zero();
    let lambda = if order >= 0 {
        serde_json::to_value(LambdaTableFile::from_table(&lambda_parameters(
            t,
            ctx,
            order as u32,
        )?))
        .unwrap()
    } else {
        Value::Null
    };
    Ok(json!({
        "command": "analyze",
        "parameters": { "cap": cap },
        "input": input(t, ctx)?,
        "m": ctx.m(),
        "det": ctx.det(),
        "digits": ctx.digits(),
        "dual_digits": ctx.dual_digits(),
        "mask_at_zero": value(&t0),
        "normalized": t0 == maskforge::Cyclotomic::from_int(ctx.m() as i64),
        "polyphase_at_zero": taus.iter().map(|tau| value(&tau.value_at_zero())).collect::<Vec<_>>(),
        "zero_condition_order": order,
        "order_capped": order == cap as i64,
        "lambda": lambda,
    }))
}

pub fn analyze_text(r: &Value) -> String {
    let mut out = Vec::new();
    out.push(format!("m = {} (det {})", r["m"], r["det"]));
    out.push(format!("digits: {}", r["digits"]));
    out.push(format!("dual digits: {}", r["dual_digits"]));
    let normalized = if r["normalized"] == true { " = m" } else { "" };
    out.push(format!("t(0) = {}{normalized}", plain(&r["mask_at_zero"])));
    for (nu, v) in r["polyphase_at_zero"]
        .as_array()
        .unwrap()
        .iter()
        .enumerate()
    {
        out.push(format!("tau_{nu}(0) = {}", plain(v)));
    }
    let order = r["zero_condition_order"].as_i64().unwrap();
    out.push(match order {
        -1 => "order -1 (not in Z^0)".to_string(),
        n if r["order_capped"] == true => format!("order >= {n} (cap reached)"),
        n => format!("order {n} (in Z^{n}, not in Z^{})", n + 1),
    });
    if let Some(values) = r["lambda"]["values"].as_array() {
        out.push("lambda:".into());
        for entry in values {
            out.push(format!(
                "  beta {}: {}",
                entry["beta"],
                plain(&entry["value"])
            ));
        }
    }
    out.join("\n")
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn convergence_value(r: &ConvergenceReport) -> Value {
    json!({
        "verdict": r.verdict.to_string(),
        "certificate": certificate(r.certificate, &r.norms),
        "mask_at_zero": value(&r.mask_at_zero),
        "normalized": r.normalized,
        "in_z0": r.in_z0,
        "norms": r.norms.iter().map(interval).collect::<Vec<_>>(),
        "truncated": r.truncated,
        "reasons": r.reasons,
    })
}

fn certificate(level: Option<u32>, norms: &[Interval]) -> Value {
    match level {
        Some(l) => json!({ "level": l, "norm": interval(&norms[l as usize - 1]) }),
        None => Value::Null,
    }
}

pub fn converge(
    t: &TrigPoly,
    ctx: &DilationContext,
    r: &ConvergenceReport,
    lmax: u32,
    bits: u32,
) -> Result<Value> {
    let mut v = convergence_value(r);
    v["command"] = json!("converge");
    v["parameters"] = json!({ "lmax": lmax, "precision_bits": bits });
    v["input"] = input(t, ctx)?;
    Ok(v)
}

fn isotropy(iso: &IsotropyReport) -> Value {
    json!({
        "verdict": iso.verdict.to_string(),
        "eigenvalue_moduli": iso.eigenvalue_moduli,
        "diagonalizable": iso.diagonalizable,
        "max_similarity_product": iso.max_similarity_product,
    })
}

pub fn smooth(
    t: &TrigPoly,
    ctx: &DilationContext,
    r: &SmoothnessReport,
    lmax: u32,
    bits: u32,
) -> Result<Value> {
    Ok(json!({
        "command": "smooth",
        "parameters": { "lmax": lmax, "precision_bits": bits },
        "input": input(t, ctx)?,
        "verdict": r.verdict.to_string(),
        "certificate": certificate(r.certificate, &r.scaled_norms),
        "isotropy": isotropy(&r.isotropy),
        "in_z1": r.in_z1,
        "norms": r.norms.iter().map(interval).collect::<Vec<_>>(),
        "scaled_norms": r.scaled_norms.iter().map(interval).collect::<Vec<_>>(),
        "truncated": r.truncated,
        "reasons": r.reasons,
        "convergence": convergence_value(&r.convergence),
    }))
}

fn norm_lines(out: &mut Vec<String>, label: fn(u64) -> String, norms: &Value) {
    for (i, n) in norms.as_array().unwrap().iter().enumerate() {
        out.push(format!(
            "  {} {}",
            label(i as u64 + 1),
            interval_text(&parse_interval(n))
        ));
    }
}

fn operator_label(l: u64) -> String {
    format!("||S_T^{l}||")
}

fn scaled_label(l: u64) -> String {
    format!("||M*^{l}|| * ||S_Q^{l}||")
}

fn parse_interval(v: &Value) -> Interval {
    let q = |s: &Value| maskforge::cyclotomic::parse_rational(s.as_str().unwrap()).unwrap();
    Interval::new(q(&v["lo"]), q(&v["hi"]))
}

fn verdict_line(r: &Value, label: fn(u64) -> String) -> String {
    let verdict = plain(&r["verdict"]);
    match r["certificate"]
        .as_object()
        .filter(|_| verdict != "inconclusive")
    {
        Some(c) => {
            let norm = parse_interval(&c["norm"]);
            let level = c["level"].as_u64().unwrap();
            format!(
                "{verdict}, certificate L={level}, {} <= {}",
                label(level),
                format_rational(&norm.hi)
            )
        }
        None => {
            let reasons: Vec<String> = r["reasons"].as_array().unwrap().iter().map(plain).collect();
            format!("{verdict}: {}", reasons.join("; "))
        }
    }
}

pub fn converge_text(r: &Value) -> String {
    let mut out = vec![verdict_line(r, operator_label)];
    out.push(format!(
        "t(0) = {}, in Z^0: {}",
        plain(&r["mask_at_zero"]),
        r["in_z0"]
    ));
    out.push("norm trajectory:".into());
    norm_lines(&mut out, operator_label, &r["norms"]);
    if r["truncated"] == true {
        out.push("  (trajectory truncated: symbol size budget exceeded)".into());
    }
    out.join("\n")
}

pub fn smooth_text(r: &Value) -> String {
    let mut out = vec![verdict_line(r, scaled_label)];
    out.push(format!(
        "isotropy: {}, eigenvalue moduli {}",
        plain(&r["isotropy"]["verdict"]),
        r["isotropy"]["eigenvalue_moduli"]
    ));
    out.push(format!("in Z^1: {}", r["in_z1"]));
    out.push(format!(
        "convergence: {}",
        verdict_line(&r["convergence"], operator_label)
    ));
    out.push("scaled norm trajectory:".into());
    norm_lines(&mut out, scaled_label, &r["scaled_norms"]);
    out.join("\n")
}
