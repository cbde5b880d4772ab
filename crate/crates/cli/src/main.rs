//! `tricolor`: enumeration, certificates, domination and blow-ups from one binary.
//!
//! Reports go to standard output as JSON (`{"manifest": .., "report": ..}`),
//! a short summary goes to standard error.

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_INFEASIBLE: u8 = 3;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_INTERNAL: u8 = 70;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Internal(m) => write!(f, "internal: {m}"),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "tricolor", version, about = "Flag-algebra toolkit for 3-edge-colored complete graphs")]
struct Cli {
    /// Worker threads; defaults to the hardware parallelism.
    #[arg(long, global = true, env = "TRICOLOR_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(untagged)]
enum Command {
    /// Count isomorphism classes of colorings of K_level.
    Enumerate {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=5))]
        level: u8,
        /// Write the ordered basis (index, canonical key, colors) here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Correction values of the seven four-vertex types.
    Epsilon {
        /// An interpretation id, or `all`.
        #[arg(long, default_value = "all")]
        interpretation: String,
    },
    /// Check a certificate: the published multipliers, or a report file.
    Verify {
        /// `published` (alias `paper`) or `file:PATH`.
        #[arg(long)]
        coeffs: String,
        #[arg(long, value_enum, default_value_t = Scope::Selected)]
        interpretations: Scope,
        /// Interpretation id used with `--interpretations selected`.
        #[arg(long)]
        interpretation: Option<String>,
    },
    /// Solve the exact LP for a certificate.
    Derive {
        #[arg(long)]
        exclude_squares: bool,
        /// An interpretation id, `all`, or `pooled`.
        #[arg(long, default_value = "all")]
        interpretation: String,
        /// Write the certificate report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Look for orders with no small dominating set.
    CheckTheorem {
        #[arg(long)]
        n: usize,
        /// Every coloring (n <= 5) or every class (n = 6); otherwise random colorings.
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write a named construction as a .tcg graph.
    Construct {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Largest strongly dominated set over sets of at most t vertices.
    BestDomination {
        #[arg(long)]
        t: usize,
        /// .tcg file, `-` for standard input.
        #[arg(long, default_value = "-")]
        graph: PathBuf,
    },
    /// Blow up a base graph and run Monte-Carlo checks on it.
    Blowup {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Check::None)]
        check: Check,
        /// Sampled 5-subsets for the square functionals.
        #[arg(long, default_value_t = 200_000)]
        samples: usize,
        /// Sampled quadruples per (type, color) for the slack check.
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// Interpretation id for the slack check; the first admissible one by default.
        #[arg(long)]
        interpretation: Option<String>,
        /// Write the blown-up graph here.
        #[arg(long)]
        out_graph: Option<PathBuf>,
    },
    /// Domination by random pairs in uniformly random colorings.
    RandomPairs {
        #[arg(long, default_value_t = 900)]
        n: usize,
        #[arg(long, default_value_t = 2000)]
        pairs: usize,
        #[arg(long, value_delimiter = ',', default_values_t = [0u64, 1, 2, 3, 4])]
        seeds: Vec<u64>,
    },
    /// Re-run the command recorded in a report and compare the result.
    Replay { report: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Scope {
    Selected,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Kierstead,
    Rainbow,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Check {
    None,
    /// Square functionals are nonnegative.
    #[value(alias = "eq2")]
    Squares,
    Slack,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Enumerate { .. } => "enumerate",
            Command::Epsilon { .. } => "epsilon",
            Command::Verify { .. } => "verify",
            Command::Derive { .. } => "derive",
            Command::CheckTheorem { .. } => "check-theorem",
            Command::Construct { .. } => "construct",
            Command::BestDomination { .. } => "best-domination",
            Command::Blowup { .. } => "blowup",
            Command::RandomPairs { .. } => "random-pairs",
            Command::Replay { .. } => "replay",
        }
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("usage: --threads must be at least 1");
            return ExitCode::from(EXIT_USAGE);
        }
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let code = match commands::execute(&cli.command, &argv[1..]) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{e}");
            e.code()
        }
    };
    ExitCode::from(code)
}
