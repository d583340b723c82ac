//! Command-line verifier: every subcommand prints a report or certificate,
//! and the exit code is nonzero exactly when some check failed.

mod commands;
mod inputs;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "trilevel", version, about = "Chain-level certificates for triangles, squares and levels")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Clone)]
pub struct Common {
    /// Seed for every generated instance.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Coefficient algebra, e.g. "F2[x]/(x2)" or "F3[x,y]/(x2,y2)".
    #[arg(long, global = true, default_value = "F2[x]/(x2)")]
    pub ring: String,
    /// Number of generated instances.
    #[arg(long, global = true, default_value_t = 10)]
    pub instances: usize,
    /// Bound on the free rank of each term of a generated complex.
    #[arg(long, global = true, default_value_t = 4)]
    pub max_rank: usize,
    /// Bound on the number of degrees a generated complex spans, minus one.
    #[arg(long, global = true, default_value_t = 3)]
    pub max_amplitude: usize,
    /// Emit machine-readable JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand)]
pub enum Command {
    /// Test whether a square read from a bundle is homotopy cartesian.
    CheckSquare {
        /// Bundle with maps `f: T→U`, `g: T→V`, `g2: U→X`, `f2: V→X` and an
        /// optional homotopy `K` with `g2 f - f2 g = dK + Kd`.
        #[arg(long)]
        input: PathBuf,
    },
    /// Test whether a triangle read from a bundle is exact.
    CheckTriangle {
        /// Bundle with maps `f: X→Y`, `g: Y→Z`, `h: Z→ΣX` and an optional
        /// homotopy `composite` with `g f = dK + Kd`.
        #[arg(long)]
        input: PathBuf,
    },
    /// Run the tensor pushout-product checks on random split monos.
    VerifyVerdier,
    /// Build and verify level certificates.
    LevelWitness {
        #[arg(long, value_enum)]
        mode: LevelMode,
        /// JSON input; without it, instances are generated from the seed.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Run the Koszul-object level checks on random instances.
    Koszul,
    /// Reproduce the worked example over the dual numbers.
    ExampleKx2 {
        #[arg(long, default_value_t = 2)]
        p: u32,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        n: i64,
    },
    /// Run the full acceptance matrix.
    Selftest,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LevelMode {
    Tensor,
    Koszul,
    Loewy,
    Resolution,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
