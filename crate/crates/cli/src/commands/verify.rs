use std::path::PathBuf;

use padic_hodge::padic::Context;
use padic_hodge::verify::{run_suite, FilteredIsocrystal, Suite};
use serde_json::json;

use super::{Env, Output};
use crate::fixture::Fixture;
use crate::CliError;

/// Fixtures shipped with the tool; their pairs feed the HN suite.
pub const BUNDLED: [(&str, &str); 4] = [
    ("simple12", include_str!("../../fixtures/simple12.json")),
    ("diag1p", include_str!("../../fixtures/diag1p.json")),
    ("mixed3", include_str!("../../fixtures/mixed3.json")),
    ("orbit2", include_str!("../../fixtures/orbit2.json")),
];

pub fn bundled_pairs() -> Result<Vec<FilteredIsocrystal>, CliError> {
    let mut out = Vec::new();
    for (name, text) in BUNDLED {
        let fx = Fixture::parse(text, None).map_err(|e| CliError::Input(format!("bundled fixture {name}: {e}")))?;
        out.extend(fx.filtered_isocrystals().into_iter().map(|mut f| {
            f.name = format!("{name}/{}", f.name);
            f
        }));
    }
    Ok(out)
}

pub(crate) fn run(env: &Env, suite: &str, extra: &[PathBuf]) -> Result<Output, CliError> {
    let suites: Vec<Suite> = if suite == "all" { Suite::ALL.to_vec() } else { vec![suite.parse()?] };
    let mut pairs = bundled_pairs()?;
    for path in extra {
        let fx = env.load(path)?;
        let stem = path.file_stem().map_or_else(|| "fixture".into(), |s| s.to_string_lossy().into_owned());
        pairs.extend(fx.filtered_isocrystals().into_iter().map(|mut f| {
            f.name = format!("{stem}/{}", f.name);
            f
        }));
    }
    let ctx = Context::new(2, padic_hodge::padic::DEFAULT_PRECISION)?;
    let mut out = Output::new("verify", Fixture::empty(ctx));
    let mut all_passed = true;
    let mut report = Vec::new();
    for s in suites {
        if suite == "all" {
            out.line(format!("[{}]", s.name()));
        }
        let outcomes = run_suite(s, env.seed, &pairs);
        for o in &outcomes {
            all_passed &= o.passed();
            out.extend(o.to_string().lines().map(str::to_string));
        }
        report.push(json!({
            "suite": s.name(),
            "checks": outcomes
                .iter()
                .map(|o| json!({
                    "name": o.name,
                    "passed": o.passed(),
                    "cases": o.cases,
                    "scope": o.scope,
                    "counterexample": o.counterexample,
                }))
                .collect::<Vec<_>>(),
        }));
    }
    out.put("seed", env.seed);
    out.put("suites", report);
    out.put("passed", all_passed);
    out.failed = !all_passed;
    Ok(out)
}
