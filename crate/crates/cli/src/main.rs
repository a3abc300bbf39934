//! `orthoprob`: lattices, states, Hilbert demos and Cox analysis from the
//! command line.

mod commands;
mod error;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "orthoprob", version, about = "Generalized probability on finite orthomodular lattices")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Subspace equality tolerance for Hilbert commands.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    JsonLines,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Boolean,
    Mo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LawSet {
    All,
    Ortho,
    Om,
    Modular,
    Dist,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DefectArg {
    /// s(a) + s(b) - s(a∨b) - s(a∧b)
    Ie,
    /// s(a) - s(a∧b) - s(a∧¬b)
    Tp,
    /// s(a) + s(b) - s(a∨b)
    Super,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Demo {
    Qubit,
    Qutrit,
    Closure,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a Boolean algebra (n atoms) or MO(n) as `.oml`.
    Gen {
        #[arg(value_enum)]
        family: Family,
        n: usize,
    },
    /// Parse a lattice and print a summary.
    Parse {
        #[arg(default_value = "-")]
        file: String,
    },
    /// Re-emit a lattice in canonical `.oml` form.
    Serialize {
        #[arg(default_value = "-")]
        file: String,
    },
    /// Check lattice laws; exits 1 on a violation.
    Check {
        #[arg(default_value = "-")]
        file: String,
        #[arg(long, value_enum, default_value_t = LawSet::All)]
        law: LawSet,
    },
    /// List the blocks (maximal Boolean subalgebras) of an orthomodular lattice.
    Blocks {
        #[arg(default_value = "-")]
        file: String,
    },
    /// State polytope commands.
    #[command(subcommand)]
    States(StatesCommand),
    /// Classical-rule defects. Without a pair, scans all pairs and reports
    /// the largest.
    Defect {
        #[arg(value_enum)]
        kind: DefectArg,
        file: String,
        a: Option<String>,
        b: Option<String>,
        /// State file; defaults to a seeded random state (or, for `super`,
        /// the maximizing witness).
        #[arg(long)]
        state: Option<String>,
    },
    /// Hilbert-space commands.
    #[command(subcommand)]
    Hilbert(HilbertCommand),
    /// Associativity and additive representations of grid functions.
    #[command(subcommand)]
    Cox(CoxCommand),
}

#[derive(Debug, Subcommand)]
pub enum StatesCommand {
    /// Decide whether the lattice carries a state.
    Feasible {
        #[arg(default_value = "-")]
        file: String,
    },
    /// Enumerate the vertices of the state polytope.
    Vertices {
        #[arg(default_value = "-")]
        file: String,
    },
    /// A seeded random state (convex mixture of vertices).
    Random {
        #[arg(default_value = "-")]
        file: String,
    },
    /// Validate a `.state` file against both the state laws and the
    /// deduced rules.
    Validate { file: String, state: String },
}

#[derive(Debug, Subcommand)]
pub enum HilbertCommand {
    Demo {
        #[arg(value_enum)]
        which: Demo,
    },
    /// tr(ρP) for two `mat` files.
    Born { rho: String, projection: String },
}

#[derive(Debug, clap::Args)]
pub struct GridArgs {
    /// Built-in name (sum, sumprod, sumsq) or a grid file.
    pub function: String,
    #[arg(long, default_value_t = orthoprob_core::cox::DEFAULT_POINTS)]
    pub points: usize,
    #[arg(long, default_value_t = 1.0)]
    pub x_max: f64,
}

#[derive(Debug, Subcommand)]
pub enum CoxCommand {
    Residual {
        #[command(flatten)]
        grid: GridArgs,
    },
    Extract {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = 0.25)]
        unit: f64,
        /// Print every k-th grid point of h in text mode.
        #[arg(long, default_value_t = 64)]
        stride: usize,
    },
    /// Emit g(f(g⁻¹x, g⁻¹y)) as a grid file.
    Transport {
        #[command(flatten)]
        grid: GridArgs,
        /// identity, scale:<c> or power:<p>
        #[arg(long)]
        map: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = commands::Output::new(cli.format == Format::JsonLines);
    let result = commands::run(&cli, &mut out);
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(out.buffer().as_bytes());
    let _ = stdout.flush();
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

pub type CliResult = Result<u8, CliError>;
