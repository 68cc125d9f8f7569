//! `glq` command-line pipelines: compile, simulate, verify, factor 15 and
//! the physics calculators. Every sampling command takes `--seed`; when it
//! is omitted the seed is 0 and a notice goes to stderr.

mod commands;
mod physics;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

pub use commands::{cmd_compile, cmd_factor15, cmd_simulate, cmd_verify, verify_files};
pub use physics::{cmd_physics, parse_sweep, PhysicsCommand};

#[derive(Debug, Parser)]
#[command(name = "glq", version, about = "Globally addressed lattice toolchain")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lower a circuit file to a pulse program and a cost table.
    Compile(CompileArgs),
    /// Run a pulse program and write measurement records and the final state.
    Simulate(SimulateArgs),
    /// Check a program against its circuit over basis and random inputs.
    Verify(VerifyArgs),
    /// Order finding for N = 15 on the 18x2 lattice.
    Factor15(FactorArgs),
    /// Coupling, superlattice, Zeno and perturbation calculators.
    #[command(subcommand)]
    Physics(PhysicsCommand),
}

#[derive(Debug, clap::Args)]
pub struct CompileArgs {
    pub circuit: PathBuf,
    /// Lattice columns [default: 3 per qubit].
    #[arg(long)]
    pub cols: Option<usize>,
    /// Lattice rows; must be even.
    #[arg(long, default_value_t = 2)]
    pub rows: usize,
    /// Program output [default: circuit path with extension `pulse`].
    #[arg(short, long)]
    pub out: Option<PathBuf>,
    /// Cost table output [default: program path with `.cost.csv` appended].
    #[arg(long)]
    pub cost: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Backend {
    Hybrid,
    Dense,
}

#[derive(Debug, clap::Args)]
pub struct SimulateArgs {
    pub program: PathBuf,
    /// Sampling seed [default: 0].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Independent runs; shot k samples on stream k of the seed.
    #[arg(long, default_value_t = 1)]
    pub shots: usize,
    #[arg(long, value_enum, default_value_t = Backend::Hybrid)]
    pub backend: Backend,
    /// Largest entangled cluster the hybrid backend may build.
    #[arg(long, default_value_t = glq_sim::DEFAULT_MAX_CLUSTER_QUBITS)]
    pub max_cluster: usize,
    /// Records CSV [default: program path with `.records.csv` appended].
    #[arg(long)]
    pub records: Option<PathBuf>,
    /// Final state of the last shot [default: program path with `.snapshot` appended].
    #[arg(long)]
    pub snapshot: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct VerifyArgs {
    pub circuit: PathBuf,
    pub program: PathBuf,
    /// Seed for the random input states [default: 0].
    #[arg(long)]
    pub seed: Option<u64>,
}

fn parse_base(s: &str) -> Result<u64, String> {
    match s.parse::<u64>() {
        Ok(a) if glq_compiler::factor::SUPPORTED_A.contains(&a) => Ok(a),
        _ => Err(format!("`{s}` is not a supported base; use 7 or 11")),
    }
}

#[derive(Debug, clap::Args)]
pub struct FactorArgs {
    /// Base: 7 or 11.
    #[arg(long, value_parser = parse_base)]
    pub a: u64,
    #[arg(long, default_value_t = 1000)]
    pub shots: usize,
    /// Sampling seed [default: 0].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Histogram CSV output [default: stdout only].
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

/// How a command finished when it did not error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// A check ran and did not pass.
    Fail,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Fail => 1,
        }
    }
}

/// Exit code for errors: bad flags, unreadable input, size limits.
pub const USAGE_EXIT: u8 = 2;

/// Resolve an optional seed, announcing the default on `note`.
pub fn seed_or_default(seed: Option<u64>, note: &mut dyn Write) -> u64 {
    seed.unwrap_or_else(|| {
        let _ = writeln!(note, "note: no --seed given, using seed 0");
        0
    })
}

pub fn run(cli: Cli, out: &mut dyn Write, note: &mut dyn Write) -> anyhow::Result<Status> {
    match cli.command {
        Command::Compile(a) => cmd_compile(&a, out),
        Command::Simulate(a) => cmd_simulate(&a, out, note),
        Command::Verify(a) => cmd_verify(&a, out, note),
        Command::Factor15(a) => cmd_factor15(&a, out, note),
        Command::Physics(p) => cmd_physics(&p, out, note),
    }
}
