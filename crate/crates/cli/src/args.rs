use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use laap_core::ClosureRule;

use crate::report::Format;

#[derive(Debug, Parser)]
#[command(name = "laap-lab", version, about = "Least-action and entropy-rate comparisons for Riemann fans")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Two-shock middle state, shock speeds and energy production.
    Riemann(DataArgs),
    /// Least-action bound near the two-shock solution.
    Laap(DataArgs),
    /// Fan sub-solution for one intermediate density.
    Subsolution(FanArgs),
    /// Actions and dissipation of the two candidates.
    Compare(CompareArgs),
    /// `compare` over a grid of intermediate densities, as CSV-ready rows.
    Sweep(SweepArgs),
    /// Exit-circle selection for the switching oscillator.
    Oscillator(OscillatorArgs),
    /// Energy, dissipation and action of Akramov-Wiedemann profiles.
    Aw(AwArgs),
    /// Run a JSON scenario file.
    Scenario(ScenarioArgs),
}

#[derive(Debug, Clone, Args)]
pub struct DataArgs {
    #[arg(long = "rho-minus", allow_negative_numbers = true)]
    pub rho_minus: f64,
    #[arg(long = "v-minus", allow_negative_numbers = true)]
    pub v_minus: f64,
    #[arg(long = "rho-plus", allow_negative_numbers = true)]
    pub rho_plus: f64,
    #[arg(long = "v-plus", allow_negative_numbers = true)]
    pub v_plus: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub kappa: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: f64,
}

#[derive(Debug, Clone, Args)]
pub struct FanArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub rho1: f64,
    /// `min-c` or `fixed:<C>`.
    #[arg(long, default_value = "min-c", value_parser = parse_closure)]
    pub closure: ClosureRule,
}

#[derive(Debug, Clone, Args)]
pub struct BoxArgs {
    /// Final time of the space-time box.
    #[arg(long = "T", default_value_t = 1.0, allow_negative_numbers = true)]
    pub t_final: f64,
    /// Half-width of the box in x1.
    #[arg(long = "L3", default_value_t = 1.0, allow_negative_numbers = true)]
    pub l3: f64,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub fan: FanArgs,
    #[command(flatten)]
    pub domain: BoxArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, default_value = "min-c", value_parser = parse_closure)]
    pub closure: ClosureRule,
    #[command(flatten)]
    pub domain: BoxArgs,
    #[arg(long = "rho1-from", allow_negative_numbers = true)]
    pub rho1_from: f64,
    #[arg(long = "rho1-to", allow_negative_numbers = true)]
    pub rho1_to: f64,
    /// Number of intervals; the grid has `steps + 1` points.
    #[arg(long)]
    pub steps: usize,
}

#[derive(Debug, Clone, Args)]
pub struct OscillatorArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub c: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub t1: f64,
    /// Also integrate the trajectory and integrate its Lagrangian.
    #[arg(long)]
    pub numeric: bool,
    #[arg(long, default_value_t = 1e-3, allow_negative_numbers = true)]
    pub dt: f64,
    #[arg(long, value_delimiter = ',', default_values_t = [1.0, 1.5, 2.0, 5.0], allow_negative_numbers = true)]
    pub candidates: Vec<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct AwArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub chi0: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub c1: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub c2: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub meas: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub background: f64,
    /// Action horizon; defaults to the vanishing time `2 chi0^(1/2) / C1`.
    #[arg(long = "t-bar", allow_negative_numbers = true)]
    pub t_bar: Option<f64>,
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    pub delta: f64,
}

#[derive(Debug, Clone, Args)]
pub struct ScenarioArgs {
    #[arg(long)]
    pub file: PathBuf,
}

fn parse_closure(s: &str) -> Result<ClosureRule, String> {
    if s == "min-c" {
        return Ok(ClosureRule::default());
    }
    let c = s
        .strip_prefix("fixed:")
        .ok_or_else(|| format!("expected `min-c` or `fixed:<C>`, got `{s}`"))?;
    c.parse::<f64>()
        .ok()
        .filter(|c| c.is_finite())
        .map(ClosureRule::FixedC)
        .ok_or_else(|| format!("`{c}` is not a finite number"))
}
