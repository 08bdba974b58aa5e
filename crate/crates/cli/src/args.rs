use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "anyon",
    version,
    about = "Entanglement of anyonic pure states: fusion data, entropies and protocols"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Inspect a model file.
    #[command(subcommand)]
    Model(ModelCommand),
    /// Check `prod d = sum dim V^c d_c` on a chain or on random chains.
    Lemma1(Lemma1Args),
    /// Approach of `dim V^b_{a^n}` to its asymptotic form.
    Scaling(ScalingArgs),
    /// Single-copy and asymptotic entanglement entropy of a state.
    Entropy(StateArgs),
    /// Exact `E1(N copies)/N` over a range of `N`.
    NcopyScan(NcopyArgs),
    /// Maximally entangled state of a chain.
    Mes(MesArgs),
    /// Additivity residual of the asymptotic entropy.
    Additivity(AdditivityArgs),
    /// Simulate entanglement distillation.
    Distill(ProtocolArgs),
    /// Simulate entanglement dilution.
    Dilute(ProtocolArgs),
    /// Distill then dilute; reports N'/N.
    Roundtrip(ProtocolArgs),
    /// Purify a charged state and show both reduced states.
    Purify(StateArgs),
    /// Numeric asymptotic entropy on both sides of a (purified) state.
    AeeNumeric(AeeNumericArgs),
}

#[derive(Debug, Subcommand)]
pub enum ModelCommand {
    /// Check the fusion-ring axioms.
    Validate { path: PathBuf },
    /// Quantum dimensions, abelian and primitive charges.
    Dims { path: PathBuf },
}

#[derive(Debug, Args)]
pub struct Lemma1Args {
    #[arg(long)]
    pub model: PathBuf,
    /// Comma-separated charge labels; random chains are drawn when absent.
    #[arg(long, value_delimiter = ',')]
    pub chain: Option<Vec<String>>,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 8)]
    pub max_len: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ScalingArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// The repeated charge `a`.
    #[arg(long)]
    pub charge: String,
    /// Total charge `b`; the vacuum by default.
    #[arg(long)]
    pub sector: Option<String>,
    #[arg(long, default_value_t = 40)]
    pub n_max: usize,
}

#[derive(Debug, Args)]
pub struct StateArgs {
    #[arg(long)]
    pub state: PathBuf,
}

#[derive(Debug, Args)]
pub struct NcopyArgs {
    #[arg(long)]
    pub state: PathBuf,
    /// `start:stop[:step]`, inclusive.
    #[arg(long = "N", value_parser = parse_range, default_value = "1:100")]
    pub n: NRange,
}

#[derive(Debug, Args)]
pub struct MesArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long, value_delimiter = ',', required = true)]
    pub chain: Vec<String>,
    /// Also write the state as a state file.
    #[arg(long)]
    pub save: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AdditivityArgs {
    /// First state; with `--other` checks that pair only.
    #[arg(long, requires = "other")]
    pub state: Option<PathBuf>,
    #[arg(long)]
    pub other: Option<PathBuf>,
    /// Model for random pairs.
    #[arg(long, conflicts_with = "state", required_unless_present = "state")]
    pub model: Option<PathBuf>,
    /// Context of the random states.
    #[arg(long, value_delimiter = ',', default_value = "tau,tau")]
    pub chain: Vec<String>,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ProtocolArgs {
    #[arg(long)]
    pub state: PathBuf,
    /// Copy number or `start:stop[:step]` scan.
    #[arg(long = "N", value_parser = parse_range)]
    pub n: NRange,
    #[arg(long, value_parser = parse_delta, default_value = "0.05")]
    pub delta: f64,
    /// Uniform target chain `x,x,...`; one copy of the first primitive charge by default.
    #[arg(long, value_delimiter = ',')]
    pub target: Option<Vec<String>>,
    /// Average distillation over all typical types instead of the most probable one.
    #[arg(long)]
    pub average: bool,
}

#[derive(Debug, Args)]
pub struct AeeNumericArgs {
    #[arg(long)]
    pub state: PathBuf,
    #[arg(long, default_value_t = 10)]
    pub n_max: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NRange {
    pub start: usize,
    pub stop: usize,
    pub step: usize,
}

impl NRange {
    pub fn values(&self) -> impl Iterator<Item = usize> {
        (self.start..=self.stop).step_by(self.step)
    }

    pub fn is_single(&self) -> bool {
        self.start == self.stop
    }
}

pub fn parse_range(s: &str) -> Result<NRange, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |p: &str| {
        p.trim()
            .parse::<usize>()
            .map_err(|_| format!("`{p}` is not a non-negative integer"))
    };
    let (start, stop, step) = match parts.as_slice() {
        [n] => (num(n)?, num(n)?, 1),
        [a, b] => (num(a)?, num(b)?, 1),
        [a, b, c] => (num(a)?, num(b)?, num(c)?),
        _ => return Err(format!("`{s}` is not of the form start:stop[:step]")),
    };
    if start == 0 {
        return Err("copy numbers start at 1".into());
    }
    if stop < start {
        return Err(format!("empty range `{s}`"));
    }
    if step == 0 {
        return Err("step must be positive".into());
    }
    Ok(NRange { start, stop, step })
}

pub fn parse_delta(s: &str) -> Result<f64, String> {
    let d: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if d > 0.0 && d < 1.0 {
        Ok(d)
    } else {
        Err(format!("delta must lie in (0, 1), got {d}"))
    }
}
