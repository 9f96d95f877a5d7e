//! `siteconvex`: energies, dual potentials and convexity certificates for
//! classical electrons on sites.
//!
//! Exit codes: 0 success (for `certify`, convexity violated), 1 convex at
//! the requested `N` (or a failed `verify` suite), 2 bad input, 3 infeasible
//! density.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod config;
mod output;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<siteconvex::Error> for CliError {
    fn from(e: siteconvex::Error) -> Self {
        let code = match e {
            siteconvex::Error::InfeasibleDensity(_) => 3,
            _ => 2,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "siteconvex",
    version,
    about = "Convexity of classical site energies in the particle number"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// TOML run configuration.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// RNG seed for `search` and `verify`; overrides the config file.
    #[arg(long, global = true, value_name = "U64")]
    pub seed: Option<u64>,

    /// Write the machine-readable result here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Average the dual potential over the symmetries declared in [density].
    #[arg(long, global = true)]
    pub symmetrize: bool,

    /// Interaction exponent s of |r|^-s; overrides [geometry].
    #[arg(long, global = true, value_name = "S")]
    pub exponent: Option<f64>,

    /// Worker threads for grid and search.
    #[arg(long, global = true, value_name = "INT")]
    pub jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ground-state energy and optimal configurations for every N.
    Table,
    /// Dual potential of the grand-canonical density program.
    Dual,
    /// Exact check of convexity at N; exits 0 when it fails, 1 when it holds.
    Certify {
        /// Particle number; defaults to [certify] n.
        #[arg(short, long)]
        n: Option<usize>,
    },
    /// Hardness on a (|v1|, |v3|) grid of the six-site diamond, as CSV.
    Grid,
    /// Random geometries with a canonical/grand-canonical functional gap.
    Search,
    /// Compass search for the most negative hardness from [potential].
    Minimize,
    /// Binding predictions of the scaled quantum system.
    Quantum {
        /// Also write the (N, ell * E) step profile as CSV.
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
    },
    /// Randomized checks that the two functionals agree on four sites and on lines.
    Verify,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli).and_then(|o| o.emit()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
