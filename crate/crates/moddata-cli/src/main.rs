mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use output::Format;

#[derive(Parser, Debug)]
#[command(name = "moddata", version, about = "Exact modular data for cyclic exterior powers, quantum gl_n and G(d,1,n) families")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Output format; csv embeds entries as floats and is lossy.
    #[arg(long, value_enum, default_value = "pretty", global = true)]
    pub format: Format,
    /// Directory receiving one file per table instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for grid commands; 0 picks the number of cores.
    #[arg(long, default_value_t = 0, global = true)]
    pub jobs: usize,
    /// Seed for the order in which grid tasks are scheduled; output is unaffected.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Largest working modulus lcm(24, 12d) accepted.
    #[arg(long, env = "MODDATA_MAX_MODULUS", default_value_t = 4096, global = true)]
    pub max_modulus: u32,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// ∧^nS, ∧^nT, the special tuple i^(p) and the structure constants.
    Ext {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        p: i64,
        #[command(flatten)]
        common: Common,
    },
    /// Axioms, integrality, positivity and doubled/absolute rings over a grid.
    Verify {
        /// d or an inclusive range a..b.
        #[arg(long)]
        d: String,
        /// Defaults to 1..d for each d.
        #[arg(long)]
        n: Option<String>,
        /// Defaults to 0..d-1 for each d.
        #[arg(long)]
        p: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Match the quantum gl_n category with (∧^nS, ∧^nT).
    Categorify {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        p: i64,
        #[command(flatten)]
        common: Common,
    },
    /// Symbols, Fourier matrix, Frobenius eigenvalues, fusion ring and categorical match of a family.
    Family {
        /// JSON file {"d", "m", "blocks": [{"w", "n"}], "arrangement"?}.
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Ennola permutation of a family and its orbits.
    Ennola {
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    /// Documents produced so far, and the witness of the failed check.
    Verification(Vec<output::Document>, Value),
}

fn emit(docs: &[output::Document], common: &Common) -> Result<(), CliError> {
    match &common.out {
        Some(dir) => output::write_dir(docs, common.format, dir).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", dir.display()))),
        None => {
            print!("{}", output::render(docs, common.format));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, common) = match &cli.command {
        Command::Ext { d, n, p, common } => (commands::ext(*d, *n, *p, common), common),
        Command::Verify { d, n, p, common } => (commands::verify(d, n.as_deref(), p.as_deref(), common), common),
        Command::Categorify { d, n, p, common } => (commands::categorify(*d, *n, *p, common), common),
        Command::Family { spec, common } => (commands::family(spec, common), common),
        Command::Ennola { spec, common } => (commands::ennola(spec, common), common),
    };
    let outcome = result.and_then(|docs| emit(&docs, common));
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Verification(docs, witness)) => {
            if emit(&docs, common).is_err() {
                eprintln!("error: could not write partial output");
            }
            eprintln!("{}", serde_json::to_string_pretty(&witness).expect("JSON values serialize"));
            ExitCode::from(2)
        }
    }
}
