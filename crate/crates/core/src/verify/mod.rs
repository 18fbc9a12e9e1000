//! Seeded property suites with independent oracles. Each check returns a
//! [`CheckOutcome`] carrying the number of cases and the first
//! counterexample found.

pub mod fourier;
pub mod isocrystal;
pub mod oracle;
pub mod orbit;
pub mod padic;
pub mod sample;
pub mod filtration;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::filtration::FilteredSpace;
use crate::isocrystal::Isocrystal;

pub use sample::Sampler;

pub const DEFAULT_SEED: u64 = 20240607;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: String,
    pub cases: usize,
    /// Replaces "N cases" in the report when the check is an exhaustive
    /// sweep over a described range.
    pub scope: Option<String>,
    pub counterexample: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let detail = self.scope.clone().unwrap_or_else(|| format!("{} cases", self.cases));
        write!(f, "{}: {status} ({detail})", self.name)?;
        if let Some(c) = &self.counterexample {
            write!(f, "\n  counterexample: {c}")?;
        }
        Ok(())
    }
}

/// Accumulates cases for one check, keeping the first failure.
pub(crate) struct Tally {
    name: String,
    cases: usize,
    scope: Option<String>,
    failure: Option<String>,
}

impl Tally {
    pub fn new(name: &str) -> Self {
        Self { name: name.to_string(), cases: 0, scope: None, failure: None }
    }

    pub fn scope(mut self, s: impl Into<String>) -> Self {
        self.scope = Some(s.into());
        self
    }

    pub fn case(&mut self, ok: bool, dump: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(dump());
        }
    }

    /// Records a case whose computation may fail; an error is a failure.
    pub fn try_case(&mut self, r: Result<bool>, dump: impl FnOnce() -> String) {
        match r {
            Ok(ok) => self.case(ok, dump),
            Err(e) => self.case(false, || format!("{} → error: {e}", dump())),
        }
    }

    pub fn done(self) -> CheckOutcome {
        CheckOutcome { name: self.name, cases: self.cases, scope: self.scope, counterexample: self.failure }
    }
}

/// A named isocrystal with a filtration, e.g. from a fixture file.
#[derive(Clone, Debug)]
pub struct FilteredIsocrystal {
    pub name: String,
    pub e: Isocrystal,
    pub f: FilteredSpace,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Padic,
    Isocrystal,
    Filtration,
    Orbit,
    Fourier,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Padic, Suite::Isocrystal, Suite::Filtration, Suite::Orbit, Suite::Fourier];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Padic => "padic",
            Suite::Isocrystal => "isocrystal",
            Suite::Filtration => "filtration",
            Suite::Orbit => "orbit",
            Suite::Fourier => "fourier",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown suite '{s}'")))
    }
}

/// Runs every check of a suite. `fixtures` feed the checks that run on
/// fixed inputs as well as random ones.
pub fn run_suite(suite: Suite, seed: u64, fixtures: &[FilteredIsocrystal]) -> Vec<CheckOutcome> {
    match suite {
        Suite::Padic => padic::run(seed),
        Suite::Isocrystal => isocrystal::run(seed),
        Suite::Filtration => filtration::run(seed, fixtures),
        Suite::Orbit => orbit::run(seed),
        Suite::Fourier => fourier::run(seed),
    }
}
