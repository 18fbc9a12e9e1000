use std::path::Path;

use padic_hodge::padic::{Context, DEFAULT_PRECISION};
use serde_json::{Map, Value};

use crate::fixture::Fixture;
use crate::{Cli, CliError, Command};

mod flags;
mod fourier;
mod isocrystal;
mod orbit;
mod verify;

pub use verify::{bundled_pairs, BUNDLED};

/// What a command prints: text lines, or the fixture document `doc` with
/// `report` attached. `failed` marks a checked property that does not hold.
#[derive(Debug)]
pub struct Output {
    pub lines: Vec<String>,
    pub doc: Fixture,
    pub report: Map<String, Value>,
    pub failed: bool,
}

impl Output {
    pub fn new(command: &str, doc: Fixture) -> Self {
        let mut report = Map::new();
        report.insert("command".into(), Value::String(command.into()));
        Self { lines: Vec::new(), doc, report, failed: false }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn extend(&mut self, ls: impl IntoIterator<Item = String>) {
        self.lines.extend(ls);
    }

    pub fn put(&mut self, key: &str, v: impl Into<Value>) {
        self.report.insert(key.into(), v.into());
    }

    pub fn to_json(&self) -> Value {
        let mut v = self.doc.to_value();
        v.as_object_mut().unwrap().insert("report".into(), Value::Object(self.report.clone()));
        v
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            format!("{:#}\n", self.to_json())
        } else {
            self.lines.iter().map(|l| format!("{l}\n")).collect()
        }
    }
}

/// Settings shared by every command.
pub(crate) struct Env<'a> {
    pub prime: Option<u32>,
    pub precision: Option<i64>,
    pub seed: u64,
    pub results: Option<&'a Path>,
}

impl Env<'_> {
    pub fn load(&self, path: &Path) -> Result<Fixture, CliError> {
        let fx = Fixture::load(path, self.precision)?;
        if let Some(p) = self.prime {
            if p != fx.ctx.p {
                return Err(CliError::Input(format!("--prime {p} but the fixture is over p = {}", fx.ctx.p)));
            }
        }
        Ok(fx)
    }

    /// Context for commands without a fixture.
    pub fn context(&self) -> Result<Context, CliError> {
        let p = self.prime.ok_or_else(|| CliError::Input("this command needs --prime".into()))?;
        Ok(Context::new(p, self.precision.unwrap_or(DEFAULT_PRECISION))?)
    }
}

pub fn run(cli: Cli) -> Result<Output, CliError> {
    let env = Env {
        prime: cli.prime,
        precision: cli.precision,
        seed: cli.seed.unwrap_or(padic_hodge::verify::DEFAULT_SEED),
        results: cli.results.as_deref(),
    };
    match cli.command {
        Command::Newton { fixture, isocrystal } => isocrystal::newton(&env.load(&fixture)?, &isocrystal),
        Command::Decompose { fixture, isocrystal } => isocrystal::decompose(&env.load(&fixture)?, &isocrystal),
        Command::Hn { fixture, isocrystal, filtration } => flags::hn(&env.load(&fixture)?, &isocrystal, &filtration),
        Command::Semistable { fixture, isocrystal, filtration, assert } => {
            flags::semistable(&env.load(&fixture)?, &isocrystal, &filtration, assert)
        }
        Command::Pairing { fixture, first, second } => flags::pairing(&env.load(&fixture)?, &first, &second),
        Command::Hm { fixture, isocrystal, filtration, bound, assert } => {
            flags::hm(&env.load(&fixture)?, &isocrystal, &filtration, bound, assert)
        }
        Command::PsLimit { fixture, one_param, filtration, direction } => {
            flags::ps_limit(&env.load(&fixture)?, &one_param, &filtration, direction)
        }
        Command::FlagDistance { fixture, first, second } => {
            flags::flag_distance(&env.load(&fixture)?, &first, &second)
        }
        Command::Orbit { command } => orbit::run(&env, command),
        Command::WeightFiltration { fixture, nilpotent } => orbit::weight_filtration(&env.load(&fixture)?, &nilpotent),
        Command::Sl2 { fixture, nilpotent } => orbit::sl2(&env.load(&fixture)?, &nilpotent),
        Command::Fourier { command } => fourier::run(&env, command),
        Command::Verify { suite, fixture } => verify::run(&env, &suite, &fixture),
    }
}
