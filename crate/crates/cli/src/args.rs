use std::path::PathBuf;

use clap::{ArgAction, Args, Parser, Subcommand};

/// `-h` is the field flag throughout, so help is `--help` only.
#[derive(Parser, Debug)]
#[command(name = "localctl", version, about = "Heat-engine sweeps and queries for locally controlled spin chains")]
#[command(disable_help_flag = true, disable_help_subcommand = true)]
pub struct Cli {
    #[arg(long, action = ArgAction::Help, global = true, help = "Print help")]
    help: Option<bool>,

    /// JSON file with run parameters; flags take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Efficiency at maximum work density across J (CSV)
    #[command(disable_help_flag = true)]
    SweepJ(SweepArgs),
    /// Finite-chain efficiency with imprecise fields (CSV)
    #[command(disable_help_flag = true)]
    Precision(PrecisionArgs),
    /// Work-maximising field across J for several temperatures (CSV)
    #[command(disable_help_flag = true)]
    OptimalField(OptimalFieldArgs),
    /// Efficiency bound for four Ising corners (JSON)
    #[command(disable_help_flag = true)]
    Bound(BoundArgs),
    /// Simulated Carnot-like cycle through four Ising corners (JSON)
    #[command(disable_help_flag = true)]
    Cycle(CycleArgs),
    /// Ground-state degeneracy of a periodic chain (JSON)
    #[command(disable_help_flag = true)]
    GsDeg(GsDegArgs),
    /// Dynamical Lie algebra of a drift plus local controls (JSON)
    #[command(disable_help_flag = true)]
    Control(ControlArgs),
}

#[derive(Args, Debug)]
pub struct Temps {
    /// Hot-bath inverse temperature [default: 0.5]
    #[arg(long, allow_negative_numbers = true)]
    pub beta_h: Option<f64>,
    /// Cold-bath inverse temperature [default: 1]
    #[arg(long, allow_negative_numbers = true)]
    pub beta_c: Option<f64>,
}

#[derive(Args, Debug)]
pub struct JRange {
    #[arg(long, allow_negative_numbers = true)]
    pub j_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub j_max: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub j_step: Option<f64>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub temps: Temps,
    #[command(flatten)]
    pub range: JRange,
    /// paper (h_C = h_B) or free (h_C optimised) [default: paper]
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(short = 'o', long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Args, Debug)]
pub struct PrecisionArgs {
    #[command(flatten)]
    pub temps: Temps,
    #[command(flatten)]
    pub range: JRange,
    /// Number of sites, at most 12 [default: 6]
    #[arg(short = 'N')]
    pub n: Option<usize>,
    /// Smallest field magnitude at the B/C corners; repeatable
    #[arg(long, allow_negative_numbers = true)]
    pub epsilon: Vec<f64>,
    #[arg(short = 'o', long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Args, Debug)]
pub struct OptimalFieldArgs {
    #[command(flatten)]
    pub range: JRange,
    /// Inverse temperature; repeatable [default: 1 2 3]
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Vec<f64>,
    #[arg(short = 'o', long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Args, Debug)]
pub struct CornerArgs {
    /// Number of sites [default: 2]
    #[arg(short = 'N')]
    pub n: Option<usize>,
    /// Coupling [default: 0]
    #[arg(short = 'J', allow_negative_numbers = true)]
    pub j: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub h_a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub h_b: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub h_c: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub h_d: Option<f64>,
}

impl CornerArgs {
    pub fn fields(&self) -> [Option<f64>; 4] {
        [self.h_a, self.h_b, self.h_c, self.h_d]
    }
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    #[command(flatten)]
    pub temps: Temps,
    #[command(flatten)]
    pub corners: CornerArgs,
    /// full, commuting or identity [default: commuting]
    #[arg(long)]
    pub class: Option<String>,
}

#[derive(Args, Debug)]
pub struct CycleArgs {
    #[command(flatten)]
    pub temps: Temps,
    #[command(flatten)]
    pub corners: CornerArgs,
    /// Quench–contact pairs per isotherm [default: 1000]
    #[arg(long)]
    pub micro_steps: Option<usize>,
}

#[derive(Args, Debug)]
pub struct GsDegArgs {
    #[arg(short = 'N')]
    pub n: Option<usize>,
    /// Coupling [default: -1]
    #[arg(short = 'J', allow_negative_numbers = true)]
    pub j: Option<f64>,
    /// Field [default: 0]
    #[arg(short = 'h', allow_negative_numbers = true)]
    pub h: Option<f64>,
}

#[derive(Args, Debug)]
pub struct ControlArgs {
    /// heisenberg-chain, ising-chain, random-two-local or none [default: heisenberg-chain]
    #[arg(long)]
    pub model: Option<String>,
    /// Number of sites [default: 2]
    #[arg(short = 'N')]
    pub n: Option<usize>,
    /// site<k>:<x|y|z,...> or all:<x|y|z,...>; repeatable
    #[arg(long)]
    pub controls: Vec<String>,
    /// Seed for random-two-local [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub max_depth: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
}
