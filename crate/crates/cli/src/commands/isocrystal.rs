use padic_hodge::isocrystal::{newton_polygon, slope_decomposition};
use padic_hodge::rational::format_rational;
use serde_json::json;

use super::Output;
use crate::fixture::Fixture;
use crate::{show, CliError};

fn with_isocrystal(fx: &Fixture, name: &str) -> Result<Fixture, CliError> {
    let mut doc = Fixture::empty(fx.ctx);
    doc.isocrystals.insert(name.into(), fx.isocrystal(name)?.clone());
    Ok(doc)
}

pub fn newton(fx: &Fixture, name: &str) -> Result<Output, CliError> {
    let e = fx.isocrystal(name)?;
    let nu = newton_polygon(e)?;
    let mut out = Output::new("newton", with_isocrystal(fx, name)?);
    out.line(format!("isocrystal {name} (p = {}, dim {})", e.p(), e.dim()));
    out.line(format!("slopes: {}", show::rationals(&nu.slopes())));
    for (s, m) in nu.parts() {
        out.line(format!("  slope {} with multiplicity {m}", format_rational(s)));
    }
    out.put("isocrystal", name);
    out.put("slopes", nu.slopes().iter().map(format_rational).collect::<Vec<_>>());
    out.put(
        "parts",
        nu.parts().iter().map(|(s, m)| json!({ "slope": format_rational(s), "multiplicity": m })).collect::<Vec<_>>(),
    );
    Ok(out)
}

pub fn decompose(fx: &Fixture, name: &str) -> Result<Output, CliError> {
    let e = fx.isocrystal(name)?;
    let parts = slope_decomposition(e)?;
    let mut doc = with_isocrystal(fx, name)?;
    let mut out_parts = Vec::new();
    let mut lines = vec![format!("isocrystal {name}: {} isoclinic part(s)", parts.len())];
    for (i, part) in parts.iter().enumerate() {
        let key = format!("part{i}");
        lines.push(format!(
            "  slope {}: dim {}  {}",
            format_rational(&part.slope),
            part.space.dim(),
            show::subspace(&part.space)
        ));
        out_parts.push(json!({
            "slope": format_rational(&part.slope),
            "dim": part.space.dim(),
            "subspace": key,
            "factor": part.factor.coeffs().iter().map(padic_hodge::padic::scalar_to_json).collect::<Vec<_>>(),
        }));
        doc.subspaces.insert(key, part.space.clone());
    }
    let mut out = Output::new("decompose", doc);
    out.extend(lines);
    out.put("isocrystal", name);
    out.put("parts", out_parts);
    Ok(out)
}
