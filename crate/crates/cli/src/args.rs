//! Command-line grammar and validated configurations.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use esdlab::{NoiseModel, NoiseParams, NoiseScenario};

use crate::Failure;

pub const DEFAULT_TOL: f64 = 1e-12;

#[derive(Debug, Parser)]
#[command(
    name = "esdlab",
    version,
    about = "Entanglement sudden death of isotropic qudit pairs under local dephasing"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Time series of fidelity, gap and entanglement for one initial state
    Evolve(EvolveArgs),
    /// Death time and classification for one initial state (JSON)
    Esd(EsdArgs),
    /// Death-time table over dimensions and initial fidelities
    Sweep(SweepArgs),
    /// Run the invariant and oracle suites
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Simple,
    Full,
}

impl From<ModelArg> for NoiseModel {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Simple => NoiseModel::SimpleGroundDephasing,
            ModelArg::Full => NoiseModel::FullIsotropicDephasing,
        }
    }
}

pub fn model_name(m: NoiseModel) -> &'static str {
    match m {
        NoiseModel::SimpleGroundDephasing => "simple",
        NoiseModel::FullIsotropicDephasing => "full",
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScenarioArg {
    A,
    B,
    Both,
}

impl From<ScenarioArg> for NoiseScenario {
    fn from(s: ScenarioArg) -> Self {
        match s {
            ScenarioArg::A => NoiseScenario::AOnly,
            ScenarioArg::B => NoiseScenario::BOnly,
            ScenarioArg::Both => NoiseScenario::Both,
        }
    }
}

pub fn scenario_name(s: NoiseScenario) -> &'static str {
    match s {
        NoiseScenario::AOnly => "a",
        NoiseScenario::BOnly => "b",
        NoiseScenario::Both => "both",
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct NoiseArgs {
    #[arg(long, value_enum, default_value = "full")]
    pub model: ModelArg,
    #[arg(long, value_enum, default_value = "both")]
    pub scenario: ScenarioArg,
    /// Dephasing rate for both subsystems
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub rate: f64,
    /// Rate of subsystem A (overrides --rate)
    #[arg(long, allow_negative_numbers = true)]
    pub rate_a: Option<f64>,
    /// Rate of subsystem B (overrides --rate)
    #[arg(long, allow_negative_numbers = true)]
    pub rate_b: Option<f64>,
}

impl NoiseArgs {
    pub fn params(&self) -> Result<NoiseParams<f64>, Failure> {
        Ok(NoiseParams::new(
            self.rate_a.unwrap_or(self.rate),
            self.rate_b.unwrap_or(self.rate),
        )?)
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    pub format: OutputFormat,
    /// Output file (default: stdout)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print run metadata to stderr
    #[arg(long)]
    pub meta: bool,
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    /// Local dimension of each qudit
    #[arg(long)]
    pub d: usize,
    /// Initial fidelity F₀
    #[arg(
        long,
        allow_negative_numbers = true,
        conflicts_with = "f0_paper",
        required_unless_present = "f0_paper"
    )]
    pub f0: Option<f64>,
    /// Use F₀ = 1/(d−1)
    #[arg(long)]
    pub f0_paper: bool,
}

impl StateArgs {
    pub fn f0(&self) -> Result<f64, Failure> {
        let f0 = match self.f0 {
            Some(f) => f,
            None => boundary_f0(self.d)?,
        };
        check_f0(f0)?;
        check_d(self.d)?;
        Ok(f0)
    }
}

#[derive(Debug, Clone, Args)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub noise: NoiseArgs,
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    pub t_max: f64,
    /// Number of uniformly spaced samples on [0, t-max]
    #[arg(long, default_value_t = 101)]
    pub steps: usize,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Cross-check every closed-form fidelity against brute-force evolution
    #[arg(long)]
    pub verify: bool,
    #[arg(long, env = "ESDLAB_TOL", default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args)]
pub struct EsdArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub noise: NoiseArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub meta: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Dimensions, e.g. `3-10` or `3,4,8`
    #[arg(long, default_value = "3-10")]
    pub d: String,
    /// Initial fidelities, comma separated; `boundary` means 1/(d−1)
    #[arg(long, default_value = "boundary")]
    pub f0: String,
    /// Shorthand for `--f0 boundary`
    #[arg(long)]
    pub f0_paper: bool,
    #[command(flatten)]
    pub noise: NoiseArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Largest local dimension in the brute-force oracle grid
    #[arg(long, default_value_t = 6)]
    pub dmax: usize,
    #[arg(long, env = "ESDLAB_TOL", default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, value_enum, hide = true)]
    pub inject_fault: Option<crate::verify::Fault>,
}

pub fn boundary_f0(d: usize) -> Result<f64, Failure> {
    if d < 2 {
        return Err(Failure::usage(format!(
            "F0 = 1/(d-1) needs d >= 2, got d = {d}"
        )));
    }
    Ok(1.0 / (d as f64 - 1.0))
}

pub fn check_d(d: usize) -> Result<(), Failure> {
    if d < 2 {
        return Err(Failure::usage(format!("d must be at least 2, got {d}")));
    }
    Ok(())
}

pub fn check_f0(f0: f64) -> Result<(), Failure> {
    if !(0.0..=1.0).contains(&f0) {
        return Err(Failure::usage(format!("F0 must lie in [0, 1], got {f0}")));
    }
    Ok(())
}

/// Parses `3-10`, `3,5,8` or mixtures such as `3-5,9`.
pub fn parse_dims(list: &str) -> Result<Vec<usize>, Failure> {
    let mut out = Vec::new();
    for part in list.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let bad = || Failure::usage(format!("cannot parse dimension list element `{part}`"));
        match part.split_once('-') {
            Some((lo, hi)) => {
                let lo: usize = lo.trim().parse().map_err(|_| bad())?;
                let hi: usize = hi.trim().parse().map_err(|_| bad())?;
                if lo > hi {
                    return Err(bad());
                }
                out.extend(lo..=hi);
            }
            None => out.push(part.parse().map_err(|_| bad())?),
        }
    }
    if out.is_empty() {
        return Err(Failure::usage("no dimensions given"));
    }
    for &d in &out {
        check_d(d)?;
    }
    Ok(out)
}

/// An initial-fidelity choice in a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum F0Choice {
    Value(f64),
    Boundary,
}

impl F0Choice {
    pub fn resolve(self, d: usize) -> Result<f64, Failure> {
        match self {
            F0Choice::Value(f) => Ok(f),
            F0Choice::Boundary => boundary_f0(d),
        }
    }
}

pub fn parse_f0_list(list: &str) -> Result<Vec<F0Choice>, Failure> {
    let mut out = Vec::new();
    for part in list.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if part.eq_ignore_ascii_case("boundary") {
            out.push(F0Choice::Boundary);
        } else {
            let f: f64 = part
                .parse()
                .map_err(|_| Failure::usage(format!("cannot parse F0 `{part}`")))?;
            check_f0(f)?;
            out.push(F0Choice::Value(f));
        }
    }
    if out.is_empty() {
        return Err(Failure::usage("no F0 values given"));
    }
    Ok(out)
}
