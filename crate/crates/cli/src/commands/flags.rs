use padic_hodge::filtration::{
    filtration_from_1ps, filtration_pairing, flag_distance as distance, hm_candidates, hm_semistable, hn_filtration,
    is_fixed_by, is_semistable, ps_limit as limit, Direction, FilteredSpace, FlagDistance,
};
use padic_hodge::rational::format_rational;
use serde_json::{json, Value};

use super::Output;
use crate::fixture::Fixture;
use crate::{show, CliError, PsDirection};

/// A document holding the named inputs.
fn doc_with(fx: &Fixture, isocrystals: &[&str], filtrations: &[&str]) -> Result<Fixture, CliError> {
    let mut doc = Fixture::empty(fx.ctx);
    for &e in isocrystals {
        doc.isocrystals.insert(e.into(), fx.isocrystal(e)?.clone());
    }
    for &f in filtrations {
        doc.filtrations.insert(f.into(), fx.filtration(f)?.clone());
    }
    Ok(doc)
}

fn slope_of(f: &FilteredSpace) -> String {
    f.slope().map_or_else(|| "undefined".into(), |m| format_rational(&m))
}

pub fn hn(fx: &Fixture, e_name: &str, f_name: &str) -> Result<Output, CliError> {
    let (e, f) = (fx.isocrystal(e_name)?, fx.filtration(f_name)?);
    let chain = hn_filtration(e, f)?;
    let hn = FilteredSpace::new(fx.ctx.p, e.dim(), chain.iter().map(|(s, q)| (q.clone(), s.clone())).collect())?;
    let mut doc = doc_with(fx, &[e_name], &[f_name])?;
    doc.filtrations.insert("hn".into(), hn);
    let mut out = Output::new("hn", doc);
    out.line(format!("HN filtration of ({e_name}, {f_name}), μ = {}", slope_of(f)));
    let mut prev = 0;
    let mut pieces = Vec::new();
    for (s, q) in &chain {
        out.line(format!("  slope {}: gr dim {}  {}", format_rational(q), s.dim() - prev, show::subspace(s)));
        pieces.push(json!({ "slope": format_rational(q), "dim": s.dim() - prev }));
        prev = s.dim();
    }
    out.put("isocrystal", e_name);
    out.put("filtration", f_name);
    out.put("pieces", pieces);
    out.put("result", "hn");
    Ok(out)
}

pub fn semistable(fx: &Fixture, e_name: &str, f_name: &str, assert: bool) -> Result<Output, CliError> {
    let (e, f) = (fx.isocrystal(e_name)?, fx.filtration(f_name)?);
    let v = is_semistable(e, f)?;
    let mut doc = doc_with(fx, &[e_name], &[f_name])?;
    let mut report_witness = Value::Null;
    let mut lines = vec![
        format!("({e_name}, {f_name}): μ = {}", slope_of(f)),
        format!("semistable: {}", if v.semistable { "yes" } else { "no" }),
    ];
    if let Some((w, m)) = &v.witness {
        lines.push(format!("witness: {}  (dim {}, induced μ = {})", show::subspace(w), w.dim(), format_rational(m)));
        report_witness = json!({ "subspace": "witness", "slope": format_rational(m) });
        doc.subspaces.insert("witness".into(), w.clone());
    }
    if !v.complete {
        lines.push("note: subobject enumeration incomplete; verdict covers the enumerated subobjects".into());
    }
    let mut out = Output::new("semistable", doc);
    out.extend(lines);
    out.put("isocrystal", e_name);
    out.put("filtration", f_name);
    out.put("semistable", v.semistable);
    out.put("complete", v.complete);
    out.put("witness", report_witness);
    out.failed = assert && !v.semistable;
    Ok(out)
}

pub fn pairing(fx: &Fixture, a: &str, b: &str) -> Result<Output, CliError> {
    let value = filtration_pairing(fx.filtration(a)?, fx.filtration(b)?)?;
    let mut out = Output::new("pairing", doc_with(fx, &[], &[a, b])?);
    out.line(format!("<{a}, {b}> = {}", format_rational(&value)));
    out.put("value", format_rational(&value));
    Ok(out)
}

pub fn hm(fx: &Fixture, e_name: &str, f_name: &str, bound: i64, assert: bool) -> Result<Output, CliError> {
    let (e, f) = (fx.isocrystal(e_name)?, fx.filtration(f_name)?);
    let count = hm_candidates(e, bound)?.len();
    let (ok, witness) = hm_semistable(e, f, bound)?;
    let mut doc = doc_with(fx, &[e_name], &[f_name])?;
    let mut out_lines = vec![
        format!("({e_name}, {f_name}): {count} candidate 1-PS with weights in [{}, {bound}]", -bound),
        format!("hm-semistable: {}", if ok { "yes" } else { "no" }),
    ];
    let mut destab = Value::Null;
    if let Some((lambda, value)) = witness {
        out_lines.push(format!("destabilizing weights {:?}, invariant {}", lambda.weights(), format_rational(&value)));
        destab = json!({ "one_param": "lambda", "value": format_rational(&value) });
        doc.one_params.insert("lambda".into(), lambda);
    }
    let mut out = Output::new("hm", doc);
    out.extend(out_lines);
    out.put("isocrystal", e_name);
    out.put("filtration", f_name);
    out.put("bound", bound);
    out.put("candidates", count);
    out.put("semistable", ok);
    out.put("destabilizing", destab);
    out.failed = assert && !ok;
    Ok(out)
}

pub fn ps_limit(fx: &Fixture, l_name: &str, f_name: &str, direction: PsDirection) -> Result<Output, CliError> {
    let (lambda, f) = (fx.one_param(l_name)?, fx.filtration(f_name)?);
    let dir = match direction {
        PsDirection::Zero => Direction::ToZero,
        PsDirection::Infinity => Direction::ToInfinity,
    };
    let lim = limit(lambda, f, dir)?;
    let fixed = is_fixed_by(lambda, &lim);
    let fl = filtration_from_1ps(lambda);
    let mut doc = doc_with(fx, &[], &[f_name])?;
    doc.one_params.insert(l_name.into(), lambda.clone());
    doc.filtrations.insert("limit".into(), lim.clone());
    let mut out = Output::new("ps-limit", doc);
    let arrow = if dir == Direction::ToZero { "t → 0" } else { "t → ∞" };
    out.line(format!("lim_{{{arrow}}} {l_name}(t)·{f_name}:"));
    out.extend(show::filtration(&lim));
    out.line(format!("fixed by {l_name}: {}", if fixed { "yes" } else { "no" }));
    out.line(format!(
        "<F, F_λ> = {} before, {} after",
        format_rational(&filtration_pairing(f, &fl)?),
        format_rational(&filtration_pairing(&lim, &fl)?)
    ));
    out.put("one_param", l_name);
    out.put("filtration", f_name);
    out.put("direction", if dir == Direction::ToZero { "zero" } else { "infinity" });
    out.put("fixed", fixed);
    out.put("result", "limit");
    Ok(out)
}

pub fn flag_distance(fx: &Fixture, a: &str, b: &str) -> Result<Output, CliError> {
    let d = distance(fx.filtration(a)?, fx.filtration(b)?)?;
    let mut out = Output::new("flag-distance", doc_with(fx, &[], &[a, b])?);
    out.line(d.to_string());
    out.put("distance", d.to_string());
    out.put("k", match d {
        FlagDistance::Zero => Value::Null,
        FlagDistance::PowerOfP { k, .. } => json!(k),
    });
    Ok(out)
}
