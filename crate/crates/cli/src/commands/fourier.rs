use padic_hodge::fourier::{amice_pairing, decay_envelope, estimate_report, mahler_expand, MahlerSeries};
use padic_hodge::padic::{scalar_to_json, Context, PadicPoly, TruncatedSeries};
use padic_hodge::rational::{format_rational, parse_rational, rat};
use padic_hodge::Rational;
use serde_json::json;

use super::{Env, Output};
use crate::fixture::Fixture;
use crate::{show, CliError, FourierCommand};

fn rationals(s: &str) -> Result<Vec<Rational>, CliError> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(|t| Ok(parse_rational(t)?)).collect()
}

fn poly(ctx: &Context, s: &str) -> Result<PadicPoly, CliError> {
    Ok(PadicPoly::from_rationals(ctx, &rationals(s)?))
}

pub(crate) fn run(env: &Env, command: FourierCommand) -> Result<Output, CliError> {
    let ctx = env.context()?;
    match command {
        FourierCommand::Expand { poly: text } => {
            let f = poly(&ctx, &text)?;
            let series = mahler_expand(&ctx, &f);
            let mut out = Output::new("fourier expand", Fixture::empty(ctx));
            out.line(format!("f = {text}"));
            out.line("Mahler coefficients c_n (f = Σ c_n·binom(x, n)):");
            for (n, c) in series.coeffs.iter().enumerate() {
                out.line(format!("  c_{n} = {}", show::scalar(c)));
            }
            out.put("poly", f.coeffs().iter().map(scalar_to_json).collect::<Vec<_>>());
            out.put("mahler", series.coeffs.iter().map(scalar_to_json).collect::<Vec<_>>());
            Ok(out)
        }
        FourierCommand::Pairing { measure, poly: p_text, character, order } => {
            let big_f = TruncatedSeries::from_poly(&poly(&ctx, &measure)?);
            let (series, label) = match (p_text, character) {
                (Some(t), None) => (mahler_expand(&ctx, &poly(&ctx, &t)?), format!("f = {t}")),
                (None, Some(w)) => (MahlerSeries::character(&ctx, &ctx.parse(&w)?, order)?, format!("κ_w, w = {w}")),
                _ => return Err(CliError::Input("give exactly one of --poly and --character".into())),
            };
            let value = amice_pairing(&big_f, &series)?;
            let mut out = Output::new("fourier pairing", Fixture::empty(ctx));
            out.line(format!("<F, {label}> with F = {measure}"));
            out.line(format!("value: {}", show::scalar(&value)));
            out.line(format!("known to precision p^{}", value.precision()));
            out.put("measure", big_f.coeffs.iter().map(scalar_to_json).collect::<Vec<_>>());
            out.put("value", scalar_to_json(&value));
            out.put("precision", value.precision().min(i64::MAX / 2));
            Ok(out)
        }
        FourierCommand::Estimates { l_max, n_max, omega, windows } => {
            let p = ctx.p;
            let omega = match omega {
                Some(s) => parse_rational(&s)?,
                None => rat(1, p as i64 - 1),
            };
            let rep = estimate_report(p, l_max, n_max, &omega)?;
            let mut out = Output::new("fourier estimates", Fixture::empty(ctx));
            out.line(format!("val ‖P_l(y·Ω)‖_(0,n), p = {p}, val Ω = {}", format_rational(&omega)));
            for n in 1..=n_max {
                let vals: Vec<String> =
                    rep.rows.iter().filter(|r| r.n == n).map(|r| format_rational(&r.norm_val)).collect();
                out.line(format!("  n = {n}: {}", vals.join(" ")));
            }
            let status = if rep.sup_bound_holds() { "PASS" } else { "FAIL" };
            out.line(format!("sup inequality for l ≤ n ≤ {n_max}: {status} ({} cases)", rep.sup_bound_checked));
            for (l, n) in &rep.sup_bound_failures {
                out.line(format!("  fails at l = {l}, n = {n}"));
            }
            out.put("omega", format_rational(&omega));
            out.put(
                "rows",
                rep.rows
                    .iter()
                    .map(|r| json!({ "l": r.l, "n": r.n, "norm_val": format_rational(&r.norm_val) }))
                    .collect::<Vec<_>>(),
            );
            out.put("inequality", json!({ "checked": rep.sup_bound_checked, "failures": rep.sup_bound_failures }));
            out.put(
                "fits",
                rep.fits.iter().map(|(n, q)| json!({ "n": n, "rate": format_rational(q) })).collect::<Vec<_>>(),
            );
            if !windows.is_empty() {
                let mut envs = Vec::new();
                for n in 1..=n_max {
                    let env = decay_envelope(p, n, &omega, &windows)?;
                    let vals: Vec<String> =
                        env.windows.iter().map(|(l, v)| format!("L={l}: {}", format_rational(v))).collect();
                    out.line(format!(
                        "envelope n = {n}: {}  ({})",
                        vals.join(", "),
                        if env.non_increasing() { "non-increasing" } else { "grows" }
                    ));
                    envs.push(json!({
                        "n": n,
                        "windows": env.windows.iter().map(|(l, v)| json!({ "start": l, "val": format_rational(v) })).collect::<Vec<_>>(),
                        "non_increasing": env.non_increasing(),
                    }));
                }
                out.put("envelope", envs);
            }
            out.failed = !rep.sup_bound_holds();
            Ok(out)
        }
    }
}
