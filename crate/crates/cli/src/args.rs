//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Serialize, Serializer};
use xxlde::CouplingPattern;

use crate::grid::{GridShape, SizeList, ValueList};
use crate::output::Format;

#[derive(Debug, Parser)]
#[command(name = "xxlde", version, about = "Long-distance entanglement in XX chains, Bose-Hubbard lattices and cavity arrays")]
pub struct Cli {
    /// Worker threads for parallel sweeps (default: all available cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// End-to-end correlator, concurrence, fidelity and gap versus chain length.
    SweepLength(SweepLengthArgs),
    /// Same quantities over a grid of pattern parameters (λ, and μ for λ–μ chains).
    SweepCouplings(SweepCouplingsArgs),
    /// Many-body gap versus chain length, optionally checked by exact diagonalization.
    Gap(GapArgs),
    /// Concurrence statistics of a bond-disorder ensemble.
    Disorder(DisorderArgs),
    /// End-site entanglement of Bose-Hubbard lattices versus on-site repulsion.
    BoseHubbard(BoseHubbardArgs),
    /// Phase-averaged teleportation fidelity versus input amplitude.
    Teleport(TeleportArgs),
    /// Critical temperature of thermal teleportation, or a thermal fidelity map.
    Tc(TcArgs),
    /// Run a command described by a TOML file whose keys mirror the flags.
    Run(RunArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::SweepLength(_) => "sweep-length",
            Command::SweepCouplings(_) => "sweep-couplings",
            Command::Gap(_) => "gap",
            Command::Disorder(_) => "disorder",
            Command::BoseHubbard(_) => "bose-hubbard",
            Command::Teleport(_) => "teleport",
            Command::Tc(_) => "tc",
            Command::Run(_) => "run",
        }
    }
}

fn as_display<T: std::fmt::Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn as_display_opt<T: std::fmt::Display, S: Serializer>(v: &Option<T>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_some(&v.to_string()),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OutputArgs {
    /// Output file; relative paths are placed under $LDE_OUTPUT_DIR when set.  Default: stdout.
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepLengthArgs {
    /// Coupling pattern, e.g. `alternating:lambda=0.1`.
    #[arg(long)]
    #[serde(serialize_with = "as_display")]
    pub pattern: CouplingPattern,
    /// Chain lengths: `N`, `a,b,c` or `start:stop:step`.
    #[arg(long)]
    pub n: SizeList,
    /// Temperature in units of J.
    #[arg(long, default_value_t = 0.0)]
    pub temperature: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepKind {
    Alternating,
    Hybrid,
    Endprobe,
    Lambdamu,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepCouplingsArgs {
    #[arg(long, value_enum)]
    pub kind: SweepKind,
    #[arg(long)]
    pub n: SizeList,
    /// Weak-bond ratios λ.
    #[arg(long)]
    pub lambda: ValueList,
    /// Strong-bond ratios μ (λ–μ chains only).
    #[arg(long)]
    pub mu: Option<ValueList>,
    /// Alternating segment length (hybrid chains only).
    #[arg(long)]
    pub ntilde: Option<usize>,
    #[arg(long, default_value_t = 0.0)]
    pub temperature: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GapArgs {
    #[arg(long)]
    #[serde(serialize_with = "as_display")]
    pub pattern: CouplingPattern,
    #[arg(long)]
    pub n: SizeList,
    /// Also compute the gap by sector-blocked exact diagonalization.
    #[arg(long)]
    pub oracle: bool,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DisorderArgs {
    #[arg(long)]
    #[serde(serialize_with = "as_display")]
    pub pattern: CouplingPattern,
    /// Half-width χ̄ of the multiplicative noise.
    #[arg(long)]
    pub chi: f64,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub n: SizeList,
    #[arg(long, default_value_t = 0.0)]
    pub temperature: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Lattice {
    /// Field ε on every third site.
    Superlattice,
    /// Field ε on the second and second-to-last sites.
    Endprobe,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BoseHubbardArgs {
    #[arg(long, value_enum)]
    pub lattice: Lattice,
    #[arg(long)]
    pub sites: usize,
    /// Local field ε in units of t.
    #[arg(long)]
    pub epsilon: f64,
    /// On-site repulsion values U in units of t.
    #[arg(long)]
    pub u: ValueList,
    /// Boson number (default: half filling of the effective spin chain).
    #[arg(long)]
    pub bosons: Option<usize>,
    /// Per-site occupancy cap (default: min(n, 4)).
    #[arg(long)]
    pub cap: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TeleportArgs {
    /// Channel length.
    #[arg(long, default_value_t = 12)]
    pub n: usize,
    /// Channel hopping pattern (overrides --lambda/--mu).
    #[arg(long)]
    #[serde(serialize_with = "as_display_opt")]
    pub pattern: Option<CouplingPattern>,
    #[arg(long, default_value_t = 0.5)]
    pub lambda: f64,
    #[arg(long, default_value_t = 4.0)]
    pub mu: f64,
    /// Sender bond ratio ν = J₀/J_b.
    #[arg(long, default_value_t = 50.0)]
    pub nu: f64,
    /// Temperature in units of J_b.
    #[arg(long, default_value_t = 0.0)]
    pub temperature: f64,
    /// Evolution time (default π/(4J₀)).
    #[arg(long)]
    pub time: Option<f64>,
    /// Input amplitudes |α|.
    #[arg(long, default_value = "0:1:0.05")]
    pub alpha: ValueList,
    /// Fixed relative phase of the input; phase-averaged when absent.
    #[arg(long)]
    pub phase: Option<f64>,
    #[arg(long, default_value_t = xxlde::teleport::PHASE_POINTS)]
    pub phase_points: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TcArgs {
    /// Chain lengths.
    #[arg(long)]
    pub n: SizeList,
    /// (λ, μ) grid resolution.
    #[arg(long, default_value = "40x40")]
    pub grid: GridShape,
    /// Bisection tolerance in units of J_b.
    #[arg(long, default_value_t = 0.005)]
    pub tolerance: f64,
    /// Emit the long-format fidelity map at this temperature instead of T_c.
    #[arg(long)]
    pub map_temperature: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RunArgs {
    #[arg(long)]
    pub config: PathBuf,
}
