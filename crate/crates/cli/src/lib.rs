//! `phodge`: command-line front end for padic-hodge.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

pub mod commands;
pub mod fixture;
pub mod show;

pub use commands::{run, Output};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Lib(#[from] padic_hodge::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 for bad input, 3 when the working precision ran out.
    pub fn exit_code(&self) -> u8 {
        use padic_hodge::Error::*;
        match self {
            Self::Lib(PrecisionExhausted(_) | DenominatorPrecision(_)) => 3,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "phodge", version, about = "Exact p-adic Hodge-theoretic computations")]
pub struct Cli {
    /// Prime for commands without a fixture; must agree with the fixture otherwise.
    #[arg(long, global = true, env = "PHODGE_PRIME")]
    pub prime: Option<u32>,
    /// Working precision in p-adic digits [default: the fixture's, else 64].
    #[arg(long, global = true, env = "PHODGE_PRECISION")]
    pub precision: Option<i64>,
    /// Seed for the verification suites.
    #[arg(long, global = true, env = "PHODGE_SEED")]
    pub seed: Option<u64>,
    /// Print a JSON fixture document instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// JSON-lines file that `orbit search` appends its records to.
    #[arg(long, global = true, env = "PHODGE_RESULTS")]
    pub results: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PsDirection {
    Zero,
    Infinity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OrbitDir {
    /// |t| → ∞
    #[default]
    MinusInfinity,
    /// t → 0
    PlusInfinity,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Newton slopes of an isocrystal.
    Newton { fixture: PathBuf, isocrystal: String },
    /// Slope decomposition into isoclinic parts.
    Decompose { fixture: PathBuf, isocrystal: String },
    /// Harder–Narasimhan filtration of a filtered isocrystal.
    Hn { fixture: PathBuf, isocrystal: String, filtration: String },
    /// Semistability with a destabilizing witness.
    Semistable {
        fixture: PathBuf,
        isocrystal: String,
        filtration: String,
        /// Exit with status 1 when not semistable.
        #[arg(long)]
        assert: bool,
    },
    /// The pairing <F1, F2>.
    Pairing { fixture: PathBuf, first: String, second: String },
    /// Hilbert–Mumford test over the eigenframe candidates.
    Hm {
        fixture: PathBuf,
        isocrystal: String,
        filtration: String,
        /// Weights range over [−bound, bound].
        #[arg(long, default_value_t = 2)]
        bound: i64,
        #[arg(long)]
        assert: bool,
    },
    /// lim λ(t)·F.
    PsLimit {
        fixture: PathBuf,
        one_param: String,
        filtration: String,
        #[arg(long, value_enum, default_value_t = PsDirection::Zero)]
        direction: PsDirection,
    },
    /// Nilpotent orbits.
    Orbit {
        #[command(subcommand)]
        command: OrbitCommand,
    },
    /// Monodromy weight filtration of a nilpotent operator.
    WeightFiltration { fixture: PathBuf, nilpotent: String },
    /// Jacobson–Morozov sl2-triple of a nilpotent operator.
    Sl2 { fixture: PathBuf, nilpotent: String },
    /// Mahler expansions, pairings and norm estimates.
    Fourier {
        #[command(subcommand)]
        command: FourierCommand,
    },
    /// Distance between two flags of the same shape.
    FlagDistance { fixture: PathBuf, first: String, second: String },
    /// Run a property suite: padic, isocrystal, filtration, orbit, fourier or all.
    Verify {
        suite: String,
        /// Extra fixtures whose pairs join the HN suite.
        #[arg(long)]
        fixture: Vec<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum OrbitCommand {
    /// exp(tN)·F, or the twisted model flag at z = t with --model.
    Eval {
        fixture: PathBuf,
        nilpotent: String,
        filtration: String,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[arg(long)]
        model: Option<String>,
    },
    /// lim exp(tN)·F.
    Limit {
        fixture: PathBuf,
        nilpotent: String,
        filtration: String,
        #[arg(long, value_enum, default_value_t = OrbitDir::MinusInfinity)]
        direction: OrbitDir,
    },
    /// Compatibility of N with Φ and semistability of the limit.
    Check {
        fixture: PathBuf,
        isocrystal: String,
        nilpotent: String,
        filtration: String,
        #[arg(long, value_enum, default_value_t = OrbitDir::MinusInfinity)]
        direction: OrbitDir,
        #[arg(long)]
        assert: bool,
    },
    /// Exhaustive search for (N, F_0) with semistable orbit limit.
    Search {
        fixture: PathBuf,
        isocrystal: String,
        /// Jump multiset of F_0, one per dimension.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        jumps: Vec<String>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0,1")]
        pool: Vec<String>,
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum FourierCommand {
    /// Mahler coefficients of a polynomial c0,c1,... (rational coefficients).
    Expand {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
    },
    /// <F, f> for a power series F = F0,F1,... against a polynomial or a character κ_w.
    Pairing {
        #[arg(long, allow_hyphen_values = true)]
        measure: String,
        #[arg(long, allow_hyphen_values = true)]
        poly: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        character: Option<String>,
        /// Mahler terms kept for a character.
        #[arg(long, default_value_t = 40)]
        order: usize,
    },
    /// Norm table of the binomial polynomials and the supremum inequality.
    Estimates {
        #[arg(long, default_value_t = 20)]
        l_max: usize,
        #[arg(long, default_value_t = 20)]
        n_max: i64,
        /// Valuation of Ω [default: 1/(p−1)].
        #[arg(long)]
        omega: Option<String>,
        /// Dyadic window starts for the decay envelope, e.g. 16,32,64.
        #[arg(long, value_delimiter = ',')]
        windows: Vec<usize>,
    },
}
