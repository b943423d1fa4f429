use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pppca::spectrum::{Orientation, Standardization, TableFormat};
use pppca::{CumlogVariant, EstimatorConfig, LawleyOptions, LawleyScale, Method};

#[derive(Debug, Clone, Parser)]
#[command(name = "pppca", version, about = "Effective dimension by penalized probabilistic PCA")]
pub struct Cli {
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true, env = "PPPCA_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Estimate k for a data matrix or an eigenvalue list and write a JSON report.
    Estimate(EstimateArgs),
    /// Run seeded replicates of one scenario and write one CSV row per replicate and method.
    Simulate(SimulateArgs),
    /// Run a figure's scenario grid at desk scale.
    Bench(BenchArgs),
    /// Tabulate penalized likelihood curves over a range of penalty weights.
    Profile(ProfileArgs),
}

/// Comma-separated method names, or `all`.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodList(pub Vec<Method>);

fn parse_methods(s: &str) -> Result<MethodList, String> {
    Method::parse_list(s).map(MethodList).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Data matrix, CSV or TSV.
    #[arg(long, short, conflicts_with = "eigenvalues")]
    pub input: Option<PathBuf>,

    /// Table format; guessed from the extension when omitted.
    #[arg(long)]
    pub format: Option<TableFormat>,

    /// `rows` when each row is a unit, `columns` when each column is.
    #[arg(long, default_value = "rows")]
    pub orientation: Orientation,

    /// `zscore` or `rank`.
    #[arg(long, default_value = "zscore")]
    pub standardization: Standardization,

    /// Use the matrix as given.
    #[arg(long)]
    pub no_standardize: bool,

    /// Drop constant features instead of failing.
    #[arg(long)]
    pub drop_constant: bool,

    /// File of eigenvalues (whitespace or comma separated), rescaled to trace n.
    #[arg(long, requires = "m")]
    pub eigenvalues: Option<PathBuf>,

    /// Feature count that goes with `--eigenvalues`.
    #[arg(long)]
    pub m: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct EstimatorArgs {
    /// Methods to run: pppca, aic, bic, cumlog, vard, lawley, or all.
    #[arg(long, default_value = "all", value_parser = parse_methods)]
    pub methods: MethodList,

    /// Penalty grid size; 50·n by default.
    #[arg(long)]
    pub grid_points: Option<usize>,

    /// Significance level for the sequential Lawley tests.
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,

    /// `corrected`, `literal` or `classical`.
    #[arg(long, default_value = "corrected")]
    pub lawley_scale: LawleyScale,

    /// `head` or `tail`.
    #[arg(long, default_value = "head")]
    pub cumlog_variant: CumlogVariant,

    #[arg(long, default_value_t = 1)]
    pub cumlog_k_min: usize,
}

impl EstimatorArgs {
    pub fn config(&self) -> EstimatorConfig {
        EstimatorConfig {
            grid_points: self.grid_points,
            lawley: LawleyOptions {
                scale: self.lawley_scale,
                alpha: self.alpha,
            },
            cumlog_variant: self.cumlog_variant,
            cumlog_k_min: self.cumlog_k_min,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub input: InputArgs,

    #[command(flatten)]
    pub estimator: EstimatorArgs,

    /// Report path; the report goes to stdout when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

/// Scenario fields given on the command line; they override a scenario file.
#[derive(Debug, Clone, Args, Default)]
pub struct ScenarioArgs {
    /// Scenario file of `key = value` lines.
    #[arg(long)]
    pub scenario: Option<PathBuf>,

    #[arg(long)]
    pub id: Option<String>,

    #[arg(long)]
    pub n: Option<usize>,

    /// Feature count.
    #[arg(long)]
    pub m: Option<usize>,

    #[arg(long)]
    pub k_star: Option<usize>,

    #[arg(long)]
    pub sigma2: Option<f64>,

    #[arg(long)]
    pub d2_min: Option<f64>,

    /// Explicit squared singular values, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub d2: Option<Vec<f64>>,
}

impl ScenarioArgs {
    pub fn given(&self) -> bool {
        self.scenario.is_some()
            || self.n.is_some()
            || self.m.is_some()
            || self.k_star.is_some()
            || self.sigma2.is_some()
            || self.d2_min.is_some()
            || self.d2.is_some()
    }
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,

    #[arg(long, short = 'r', default_value_t = 10)]
    pub replicates: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[command(flatten)]
    pub estimator: EstimatorArgs,

    /// Replicate CSV path; stdout when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,

    /// Add a per-method wall-clock column (breaks byte-for-byte reproducibility).
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Fig3,
    Fig4,
    Fig5,
    #[value(name = "fig6-desk")]
    Fig6Desk,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum)]
    pub preset: Preset,

    #[arg(long, default_value = "bench-out")]
    pub output_dir: PathBuf,

    /// Replicates per scenario; the preset's value when omitted.
    #[arg(long)]
    pub replicates: Option<usize>,

    /// Feature counts to sweep, comma separated; the preset's values when omitted.
    #[arg(long, value_delimiter = ',')]
    pub m_values: Option<Vec<usize>>,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[command(flatten)]
    pub estimator: EstimatorArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ProfileArgs {
    #[command(flatten)]
    pub input: InputArgs,

    /// Use the population spectrum of this scenario file.
    #[arg(long, conflicts_with_all = ["input", "eigenvalues"])]
    pub scenario: Option<PathBuf>,

    /// Values of k, comma separated; every k when omitted.
    #[arg(long, value_delimiter = ',')]
    pub k: Option<Vec<usize>>,

    /// Smallest positive penalty weight; the vote grid's lower end by default.
    #[arg(long)]
    pub delta_min: Option<f64>,

    /// Largest penalty weight; the vote grid's upper end by default.
    #[arg(long)]
    pub delta_max: Option<f64>,

    /// Log-spaced penalty weights per k, after the zero row.
    #[arg(long, default_value_t = 200)]
    pub points: usize,

    /// Curve CSV path; stdout when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}
