use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::amplitude::{ComplexAmplitude, SqueezeParam};
use crate::error::{Error, Result};
use crate::fock::DEFAULT_DIM;
use crate::gaussian::GaussianStateParams;

pub const DEFAULT_STEPS: usize = 200;
pub const DEFAULT_TAU_MAX: f64 = 1.0;
pub const DEFAULT_T_GEN: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Closed-form evaluation only.
    #[value(name = "closed_form", alias = "closed-form")]
    ClosedForm,
    /// Brute-force truncated Fock evaluation.
    Oracle,
    /// Both, with a worst-case error report.
    Compare,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::ClosedForm => "closed_form",
            Mode::Oracle => "oracle",
            Mode::Compare => "compare",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Command-line flags. Every field is optional so that values from a config
/// file can fill the gaps.
#[derive(Debug, Clone, Default, Parser)]
#[command(
    name = "g2sweep",
    version,
    about = "Sweep g2(tau) for displaced-squeezed thermal light from a degenerate parametric amplifier"
)]
pub struct CliArgs {
    /// Mean thermal occupation of the initial state [default: 0]
    #[arg(long)]
    pub nbar: Option<f64>,
    /// Squeeze magnitude r >= 0 [default: 0]
    #[arg(long)]
    pub r: Option<f64>,
    /// Squeeze phase theta in radians [default: 0]
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Displacement magnitude |alpha| [default: 0]
    #[arg(long = "alpha-mag")]
    pub alpha_mag: Option<f64>,
    /// Displacement phase in radians [default: 0]
    #[arg(long = "alpha-phase", allow_hyphen_values = true)]
    pub alpha_phase: Option<f64>,
    /// Generation time of the state [default: 1]
    #[arg(long = "t-gen")]
    pub t_gen: Option<f64>,
    /// Largest delay in the sweep [default: 1]
    #[arg(long = "tau-max")]
    pub tau_max: Option<f64>,
    /// Number of intervals; the sweep has steps + 1 rows [default: 200]
    #[arg(long)]
    pub steps: Option<usize>,
    /// Evaluation mode [default: closed_form]
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// Fock truncation for oracle and compare modes [default: 120]
    #[arg(long = "oracle-dim")]
    pub oracle_dim: Option<usize>,
    /// Output format [default: csv]
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    /// Output file; standard output when absent or "-"
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// TOML file with the same keys as the long flags
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Flat key-value config file; keys are the long flag names.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct FileConfig {
    nbar: Option<f64>,
    r: Option<f64>,
    theta: Option<f64>,
    alpha_mag: Option<f64>,
    alpha_phase: Option<f64>,
    t_gen: Option<f64>,
    tau_max: Option<f64>,
    steps: Option<usize>,
    mode: Option<Mode>,
    oracle_dim: Option<usize>,
    format: Option<OutputFormat>,
    output: Option<PathBuf>,
}

impl FileConfig {
    fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| Error::Config(format!("bad config {}: {e}", path.display())))
    }
}

/// A validated sweep configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub state: GaussianStateParams,
    pub t_gen: f64,
    pub tau_max: f64,
    pub steps: usize,
    pub mode: Mode,
    pub oracle_dim: usize,
    pub output_format: OutputFormat,
    /// `None` writes to standard output.
    pub output_path: Option<PathBuf>,
}

impl RunConfig {
    /// Merges flags over the optional config file over defaults, then
    /// validates.
    pub fn from_args(args: CliArgs) -> Result<Self> {
        let file = match &args.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };

        let nbar = args.nbar.or(file.nbar).unwrap_or(0.0);
        let r = args.r.or(file.r).unwrap_or(0.0);
        let theta = args.theta.or(file.theta).unwrap_or(0.0);
        let alpha_mag = args.alpha_mag.or(file.alpha_mag).unwrap_or(0.0);
        let alpha_phase = args.alpha_phase.or(file.alpha_phase).unwrap_or(0.0);
        let t_gen = args.t_gen.or(file.t_gen).unwrap_or(DEFAULT_T_GEN);
        let tau_max = args.tau_max.or(file.tau_max).unwrap_or(DEFAULT_TAU_MAX);
        let steps = args.steps.or(file.steps).unwrap_or(DEFAULT_STEPS);
        let mode = args.mode.or(file.mode).unwrap_or(Mode::ClosedForm);
        let oracle_dim = args.oracle_dim.or(file.oracle_dim).unwrap_or(DEFAULT_DIM);
        let output_format = args.format.or(file.format).unwrap_or(OutputFormat::Csv);
        let output_path = args.output.or(file.output).filter(|p| p.as_os_str() != "-");

        let usage = |msg: String| Error::Config(msg);
        if !(alpha_mag.is_finite() && alpha_mag >= 0.0) {
            return Err(usage(format!("--alpha-mag must be >= 0, got {alpha_mag}")));
        }
        if !alpha_phase.is_finite() {
            return Err(usage(format!(
                "--alpha-phase must be finite, got {alpha_phase}"
            )));
        }
        if !(t_gen.is_finite() && t_gen > 0.0) {
            return Err(usage(format!("--t-gen must be > 0, got {t_gen}")));
        }
        if !(tau_max.is_finite() && tau_max > 0.0) {
            return Err(usage(format!("--tau-max must be > 0, got {tau_max}")));
        }
        if steps < 1 {
            return Err(usage("--steps must be >= 1".to_string()));
        }
        if mode != Mode::ClosedForm && oracle_dim < 2 {
            return Err(usage(format!(
                "--oracle-dim must be >= 2, got {oracle_dim}"
            )));
        }
        let xi = SqueezeParam::new(r, theta).map_err(|e| usage(format!("--r/--theta: {e}")))?;
        let state = GaussianStateParams::new(
            ComplexAmplitude::from_polar(alpha_mag, alpha_phase),
            xi,
            nbar,
        )
        .map_err(|e| usage(format!("state: {e}")))?;

        Ok(Self {
            state,
            t_gen,
            tau_max,
            steps,
            mode,
            oracle_dim,
            output_format,
            output_path,
        })
    }
}

/// Parses command-line arguments (including the program name) into a
/// validated configuration. Any clap error, help requests included, comes
/// back as [`Error::Config`].
pub fn parse_config<I, T>(args: I) -> Result<RunConfig>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = CliArgs::try_parse_from(args).map_err(|e| Error::Config(e.to_string()))?;
    RunConfig::from_args(cli)
}
