mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Serialize)]
#[command(name = "fgum", version, about = "Fine-grained unambiguous measurements: LP, bounds, POVMs, simulation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Solve the primal and dual programs and report both optima.
    Solve {
        #[command(flatten)]
        input: ProfileArgs,
        #[command(flatten)]
        cost: CostArgs,
        #[command(flatten)]
        tol: TolArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Audit a closed-form dual family and compare it with the LP optimum.
    Verify {
        #[command(flatten)]
        input: ProfileArgs,
        #[arg(long, value_enum)]
        family: VerifyFamily,
        /// Ball radius (threshold-ball).
        #[arg(long)]
        d: Option<usize>,
        /// Ball scale; τ = max(1, ⌈γ·d⌉) (threshold-ball).
        #[arg(long)]
        gamma: Option<f64>,
        /// Threshold (threshold-set).
        #[arg(long)]
        tau: Option<usize>,
        /// Comma-separated bit strings (threshold-set); defaults to the zero-weight set.
        #[arg(long)]
        set: Option<String>,
        #[command(flatten)]
        tol: TolArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Build a closed-form primal candidate and certify it by complementary slackness.
    PrimalCandidate {
        #[command(flatten)]
        input: ProfileArgs,
        #[arg(long, value_enum)]
        family: CandidateFamily,
        #[command(flatten)]
        tol: TolArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Synthesize the POVM from an optimal primal solution and verify it.
    Povm {
        #[command(flatten)]
        input: ProfileArgs,
        #[command(flatten)]
        cost: CostArgs,
        #[command(flatten)]
        tol: TolArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Simulate the optimal measurement on |ψ_x⟩.
    Simulate {
        #[command(flatten)]
        input: ProfileArgs,
        #[command(flatten)]
        cost: CostArgs,
        /// Hidden string, written MSB first (x_1 is the last character).
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 100_000)]
        shots: usize,
        /// Required whenever shots > 0.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        tol: TolArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Bernoulli noise: average-cost optimum, Hamming bound and threshold bound.
    Slpn {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        d: Option<usize>,
        #[command(flatten)]
        tol: TolArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Decide whether the threshold value is zero via a universal zero-set witness.
    Threshold {
        #[command(flatten)]
        input: ProfileArgs,
        #[arg(long)]
        tau: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// List the canonical parity matrices of rank k (all ranks if k is omitted).
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Option<usize>,
        /// Include coset leaders for every code.
        #[arg(long)]
        cosets: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args, Serialize, Clone)]
pub struct ProfileArgs {
    /// Profile JSON: {"n":..,"weights":[..]} and/or "amplitudes":[{"re":..,"im":..}].
    #[arg(long)]
    pub profile: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    pub mode: Mode,
}

#[derive(Args, Serialize, Clone)]
pub struct CostArgs {
    /// average | threshold | inline cost JSON | path to a cost JSON file.
    #[arg(long, default_value = "average")]
    pub cost: String,
    /// Threshold for --cost threshold.
    #[arg(long)]
    pub tau: Option<usize>,
}

#[derive(Args, Serialize, Clone)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Also write the JSON report (or the command's artifact) to this path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Serialize, Clone)]
pub struct TolArgs {
    #[arg(long, default_value_t = 1e-9)]
    pub tol_lp: f64,
    #[arg(long, default_value_t = 1e-9)]
    pub tol_positivity: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub tol_completeness: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol_unambiguity: f64,
    #[arg(long, default_value_t = 1e-9)]
    pub tol_symmetry: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol_coset: f64,
    /// Allowed |rho_eval − ρ^L|.
    #[arg(long, default_value_t = 1e-8)]
    pub tol_rho: f64,
}

#[derive(ValueEnum, Serialize, Clone, Copy, PartialEq, Eq, Debug)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

#[derive(ValueEnum, Serialize, Clone, Copy, PartialEq, Eq, Debug)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Table,
}

#[derive(ValueEnum, Serialize, Clone, Copy, PartialEq, Eq, Debug)]
#[serde(rename_all = "kebab-case")]
pub enum VerifyFamily {
    Hamming,
    Cohamming,
    Spike,
    ThresholdBall,
    ThresholdSet,
}

#[derive(ValueEnum, Serialize, Clone, Copy, PartialEq, Eq, Debug)]
#[serde(rename_all = "lowercase")]
pub enum CandidateFamily {
    Hamming,
    Cohamming,
    Spike,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("audit failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
